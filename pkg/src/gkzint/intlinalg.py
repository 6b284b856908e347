"""Exact integer linear algebra: kernel lattices, normal forms, small inverses."""

from fractions import Fraction
from math import gcd

from .errors import MalformedInputError


class IntMatrix:
    """Dense integer matrix with exact helpers used across the toolkit."""

    def __init__(self, entries):
        rows = [list(map(int, r)) for r in entries]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise MalformedInputError("ragged or empty integer matrix")
        self.entries = rows
        self.rows = len(rows)
        self.cols = len(rows[0])

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def row(self, i):
        return tuple(self.entries[i])

    def col(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def tolist(self):
        return [list(r) for r in self.entries]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.entries == other.entries

    def __repr__(self):
        return f"IntMatrix({self.entries})"


def column_hermite_transform(A):
    """Column-style Hermite reduction: returns (H, U) with A*U = H, U unimodular.

    H is in column echelon form; the trailing columns of U spanning A*U = 0
    give a kernel lattice basis.
    """
    M = [list(r) for r in A.entries]
    d, N = A.rows, A.cols
    U = [[1 if i == j else 0 for j in range(N)] for i in range(N)]
    pc = 0
    for r in range(d):
        nz = [c for c in range(pc, N) if M[r][c]]
        if not nz:
            continue
        while len(nz) > 1:
            nz.sort(key=lambda c: abs(M[r][c]))
            c0 = nz[0]
            for c in nz[1:]:
                q = M[r][c] // M[r][c0]
                if q:
                    for i in range(d):
                        M[i][c] -= q * M[i][c0]
                    for i in range(N):
                        U[i][c] -= q * U[i][c0]
            nz = [c for c in range(pc, N) if M[r][c]]
        c0 = nz[0]
        if c0 != pc:
            for i in range(d):
                M[i][c0], M[i][pc] = M[i][pc], M[i][c0]
            for i in range(N):
                U[i][c0], U[i][pc] = U[i][pc], U[i][c0]
        if M[r][pc] < 0:
            for i in range(d):
                M[i][pc] = -M[i][pc]
            for i in range(N):
                U[i][pc] = -U[i][pc]
        pc += 1
        if pc == N:
            break
    return IntMatrix(M), IntMatrix(U), pc


def kernel_lattice(A):
    """Basis of ker(A) ∩ Z^N as a list of integer tuples (saturated lattice basis)."""
    if not isinstance(A, IntMatrix):
        A = IntMatrix(A)
    H, U, rank = column_hermite_transform(A)
    basis = []
    for c in range(rank, A.cols):
        v = tuple(U[i, c] for i in range(A.cols))
        basis.append(_orient(v))
    return basis


def _orient(v):
    """Deterministic sign: first nonzero entry positive."""
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def smith_invariant_factors(A):
    """Invariant factors of an integer matrix (Smith normal form diagonal)."""
    if isinstance(A, IntMatrix):
        M = [list(r) for r in A.entries]
    else:
        M = [list(map(int, r)) for r in A]
    rows, cols = len(M), len(M[0]) if M else 0
    factors = []
    r = 0
    while r < min(rows, cols):
        # find pivot with smallest nonzero absolute value in M[r:, r:]
        best = None
        for i in range(r, rows):
            for j in range(r, cols):
                if M[i][j] and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i0, j0 = best
        M[r], M[i0] = M[i0], M[r]
        for row in M:
            row[r], row[j0] = row[j0], row[r]
        # clear row/column by division steps
        dirty = True
        while dirty:
            dirty = False
            for i in range(r + 1, rows):
                if M[i][r]:
                    q = M[i][r] // M[r][r]
                    for j in range(r, cols):
                        M[i][j] -= q * M[r][j]
                    if M[i][r]:
                        M[r], M[i] = M[i], M[r]
                        dirty = True
            for j in range(r + 1, cols):
                if M[r][j]:
                    q = M[r][j] // M[r][r]
                    for i in range(r, rows):
                        M[i][j] -= q * M[i][r]
                    if M[r][j]:
                        for i in range(rows):
                            M[i][r], M[i][j] = M[i][j], M[i][r]
                        dirty = True
        # enforce divisibility on the remaining block
        p = abs(M[r][r])
        for i in range(r + 1, rows):
            for j in range(r + 1, cols):
                if M[i][j] % p:
                    for jj in range(r, cols):
                        M[r][jj] += M[i][jj]
                    dirty = True
                    break
            else:
                continue
            break
        if dirty:
            continue
        factors.append(p)
        r += 1
    return factors


def rational_matrix_inverse(M):
    """Exact inverse of a small integer/rational matrix as Fractions."""
    n = len(M)
    A = [[Fraction(M[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            raise MalformedInputError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [[A[i][n + j] for j in range(n)] for i in range(n)]


def int_det(M):
    """Determinant of a small integer matrix via fraction-free (Bareiss) elimination."""
    A = [list(map(int, r)) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def solve_integer(A, w):
    """One integer solution v of A v = w, assuming ZA = Z^d; None if insolvable."""
    if not isinstance(A, IntMatrix):
        A = IntMatrix(A)
    H, U, rank = column_hermite_transform(A)
    # solve H y = w by forward substitution on the echelon columns, then v = U y
    y = [Fraction(0)] * A.cols
    w = [Fraction(x) for x in w]
    used = [None] * rank
    rr = 0
    for c in range(rank):
        # pivot row of column c: first nonzero row at/after rr
        pr = next(i for i in range(A.rows) if H[i, c])
        used[c] = pr
    for c in range(rank):
        pr = used[c]
        acc = w[pr] - sum(Fraction(H[pr, cc]) * y[cc] for cc in range(c))
        if acc % H[pr, c] != 0:
            return None
        y[c] = acc / H[pr, c]
    # consistency on remaining rows
    for i in range(A.rows):
        if sum(Fraction(H[i, c]) * y[c] for c in range(rank)) != w[i]:
            return None
    v = [sum(U[i, c] * y[c] for c in range(rank)) for i in range(A.cols)]
    return tuple(int(x) for x in v)


def lattice_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g
