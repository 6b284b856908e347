"""Matrices over the rational function field Q(b)(z) with exact operations."""

from .errors import MalformedInputError, NotABasisError
from .strings import ratfun_to_string


class RatFunMatrix:
    """Dense matrix of field elements; immutable by convention."""

    __slots__ = ("ctx", "rows", "ncols", "nrows")

    def __init__(self, ctx, rows):
        self.ctx = ctx
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise MalformedInputError("ragged matrix")

    @classmethod
    def zeros(cls, ctx, n, m):
        return cls(ctx, [[ctx.fzero] * m for _ in range(n)])

    @classmethod
    def identity(cls, ctx, n):
        return cls(ctx, [[ctx.fone if i == j else ctx.fzero for j in range(n)]
                         for i in range(n)])

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other):
        return isinstance(other, RatFunMatrix) and self.rows == other.rows

    def __add__(self, other):
        return RatFunMatrix(self.ctx, [[a + b for a, b in zip(ra, rb)]
                                       for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return RatFunMatrix(self.ctx, [[a - b for a, b in zip(ra, rb)]
                                       for ra, rb in zip(self.rows, other.rows)])

    def __mul__(self, other):
        if isinstance(other, RatFunMatrix):
            if self.ncols != other.nrows:
                raise MalformedInputError("matrix shape mismatch")
            out = []
            for i in range(self.nrows):
                row = []
                for j in range(other.ncols):
                    acc = self.ctx.fzero
                    for t in range(self.ncols):
                        a = self.rows[i][t]
                        if a:
                            b = other.rows[t][j]
                            if b:
                                acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return RatFunMatrix(self.ctx, out)
        return self.scale(other)

    def scale(self, c):
        return RatFunMatrix(self.ctx, [[a * c for a in r] for r in self.rows])

    def transpose(self):
        return RatFunMatrix(self.ctx, [[self.rows[i][j] for i in range(self.nrows)]
                                       for j in range(self.ncols)])

    def diff_z(self, j):
        g = self.ctx.field.gens[self.ctx.npar + j]
        return RatFunMatrix(self.ctx, [[a.diff(g) for a in r] for r in self.rows])

    def subs_z(self, values):
        return RatFunMatrix(self.ctx, [[self.ctx.subs_z(a, values) for a in r]
                                       for r in self.rows])

    def negate_params(self):
        return RatFunMatrix(self.ctx, [[self.ctx.negate_params(a) for a in r]
                                       for r in self.rows])

    def is_zero(self):
        return all(not a for r in self.rows for a in r)

    def inverse(self):
        """Exact inverse via fraction-free (Bareiss) elimination: each row is
        cleared to polynomial entries, eliminated with exact divisions, and the
        row scalings divided back out at the end."""
        ctx = self.ctx
        if self.nrows != self.ncols:
            raise MalformedInputError("inverse of non-square matrix")
        n = self.nrows
        ring_one = ctx.ring.one
        # clear rows: row_i * den_i has polynomial entries
        M = []
        dens = []
        for r in self.rows:
            den = ring_one
            for c in r:
                g = den.gcd(c.denom)
                den = den * c.denom.quo(g)
            denf = ctx.to_frac(den)
            row = []
            for c in r:
                cc = c * denf
                row.append(cc.numer)
            M.append(row + [ctx.zero] * n)
            dens.append(denf)
        for i in range(n):
            M[i][n + i] = den_num = dens[i].numer  # den_i * I on the right block
            if dens[i].denom != ring_one:
                raise MalformedInputError("unexpected denominator")
        # Bareiss elimination
        prev = ring_one
        sign = 1
        for k in range(n):
            if not M[k][k]:
                piv = next((r for r in range(k + 1, n) if M[r][k]), None)
                if piv is None:
                    raise NotABasisError("singular matrix over Q(b)(z)")
                M[k], M[piv] = M[piv], M[k]
                sign = -sign
            for i in range(n):
                if i == k:
                    continue
                for j in range(2 * n):
                    if j == k:
                        continue
                    M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]).quo(prev)
                M[i][k] = ctx.zero
            prev = M[k][k]
        det = M[n - 1][n - 1]
        if not det:
            raise NotABasisError("singular matrix over Q(b)(z)")
        detf = ctx.to_frac(det)
        out = []
        for i in range(n):
            out.append([ctx.to_frac(M[i][n + j]) / detf for j in range(n)])
        return RatFunMatrix(ctx, out)

    def determinant(self):
        ctx = self.ctx
        n = self.nrows
        M = [[c for c in r] for r in self.rows]
        det = ctx.fone
        for k in range(n):
            piv = next((r for r in range(k, n) if M[r][k]), None)
            if piv is None:
                return ctx.fzero
            if piv != k:
                M[k], M[piv] = M[piv], M[k]
                det = -det
            det = det * M[k][k]
            inv = 1 / M[k][k]
            for i in range(k + 1, n):
                if M[i][k]:
                    f = M[i][k] * inv
                    for j in range(k, n):
                        M[i][j] = M[i][j] - f * M[k][j]
        return det

    def to_strings(self):
        return [[ratfun_to_string(self.ctx, c) for c in r] for r in self.rows]

    def __repr__(self):
        return "RatFunMatrix(" + repr(self.to_strings()) + ")"
