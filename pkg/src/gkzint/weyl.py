"""Rational Weyl algebra Q(b)(z)<d_1..d_N> with the relation d_j z_j = z_j d_j + 1.

A WeylOperator is normally ordered: all rational-function coefficients stand to
the left of the derivation monomials.  The exponent tuples index d_1..d_N.
"""

from dataclasses import dataclass
from math import comb

from .errors import MalformedInputError
from .strings import _NAME, _Parser, ratfun_to_string, resolve_scalar_name, tokenize


class WeylOperator:
    """Normally ordered operator: map d-exponent tuple -> field coefficient."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = {e: c for e, c in terms.items() if c}

    # ---- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, ctx):
        return cls(ctx, {})

    @classmethod
    def one(cls, ctx):
        return cls(ctx, {(0,) * ctx.nvar: ctx.fone})

    @classmethod
    def scalar(cls, ctx, c):
        return cls(ctx, {(0,) * ctx.nvar: c})

    @classmethod
    def partial(cls, ctx, j):
        """d_{j+1} (0-based j)."""
        e = tuple(1 if t == j else 0 for t in range(ctx.nvar))
        return cls(ctx, {e: ctx.fone})

    @classmethod
    def monomial(cls, ctx, coeff, dexp):
        return cls(ctx, {tuple(dexp): coeff})

    # ---- basic structure --------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, WeylOperator) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def order(self):
        return max((sum(e) for e in self.terms), default=-1)

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, self.ctx.fzero) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return WeylOperator(self.ctx, out)

    def __neg__(self):
        return WeylOperator(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return WeylOperator.zero(self.ctx)
        return WeylOperator(self.ctx, {e: cc * c for e, cc in self.terms.items()})

    def __mul__(self, other):
        return weyl_mul(self, other)

    def __pow__(self, m):
        if m < 0:
            raise MalformedInputError("negative operator power")
        out = WeylOperator.one(self.ctx)
        for _ in range(m):
            out = weyl_mul(out, self)
        return out

    def subs_params(self, bvals):
        """Substitute rational values for all parameters b_i."""
        ctx = self.ctx
        vals = list(bvals)

        def ev(p):
            out = ctx.fzero
            for mon, c in p.terms():
                t = ctx.to_frac(ctx.ring.ground_new(c))
                for i, e in enumerate(mon):
                    if e:
                        if i < ctx.npar:
                            t = t * ctx.to_frac(vals[i]) ** e
                        else:
                            t = t * ctx.field.gens[i] ** e
                out += t
            return out

        out = {}
        for e, c in self.terms.items():
            den = ev(c.denom)
            if not den:
                raise MalformedInputError("parameter substitution hits a pole")
            v = ev(c.numer) / den
            if v:
                out[e] = v
        return WeylOperator(ctx, out)

    def __str__(self):
        return operator_to_string(self)

    __repr__ = __str__


def _mul_term_into(ctx, out, alpha, c_alpha, Q_terms, to_coeff, diff, combine):
    """Accumulate (c_alpha d^alpha) * Q into dict `out` via the Leibniz rule."""
    nv = len(alpha)
    for beta, q in Q_terms.items():
        stack = [(q, 1, ())]
        for j in range(nv):
            new = []
            for (dq, bin0, nupref) in stack:
                dd = dq
                for nu_j in range(alpha[j] + 1):
                    if not dd:
                        break
                    new.append((dd, bin0 * comb(alpha[j], nu_j), nupref + (nu_j,)))
                    if nu_j < alpha[j]:
                        dd = diff(dd, j)
            stack = new
        for dq, bin0, nu in stack:
            expo = tuple(alpha[j] - nu[j] + beta[j] for j in range(nv))
            coef = c_alpha * dq
            if bin0 != 1:
                coef = coef * bin0
            combine(out, expo, coef)


def weyl_mul(P, Q):
    """Normally ordered product P * Q."""
    ctx = P.ctx
    zoff = ctx.npar

    def diff(c, j):
        return c.diff(ctx.field.gens[zoff + j])

    def combine(out, e, c):
        s = out.get(e, ctx.fzero) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)

    out = {}
    for alpha, c in P.terms.items():
        _mul_term_into(ctx, out, alpha, c, Q.terms, None, diff, combine)
    return WeylOperator(ctx, out)


@dataclass(frozen=True)
class EulerVector:
    """Integer coefficient rows a_{i,1..N} of the torus scaling operators."""

    coefficients: tuple  # d rows, each an N-tuple

    @classmethod
    def from_cayley(cls, cay):
        return cls(tuple(cay.matrix.row(i) for i in range(cay.d)))


def euler_operators(cay, ctx):
    """Generators sum_j a_ij z_j d_j - b_i, one per row of the configuration."""
    ops = []
    for i in range(cay.d):
        terms = {}
        for j in range(cay.N):
            a = cay.matrix[i, j]
            if a:
                e = tuple(1 if t == j else 0 for t in range(cay.N))
                terms[e] = ctx.to_frac(a * ctx.z[j])
        z0 = (0,) * cay.N
        terms[z0] = terms.get(z0, ctx.fzero) - ctx.to_frac(ctx.b[i])
        ops.append(WeylOperator(ctx, terms))
    return ops


def box_operator(ctx, u):
    """Binomial operator d^{u+} - d^{u-}; u oriented so its first nonzero is positive."""
    u = tuple(int(x) for x in u)
    if not any(u):
        raise MalformedInputError("zero lattice vector has no box operator")
    for x in u:
        if x:
            if x < 0:
                u = tuple(-y for y in u)
            break
    ep = tuple(max(x, 0) for x in u)
    em = tuple(max(-x, 0) for x in u)
    return WeylOperator(ctx, {ep: ctx.fone, em: -ctx.fone})


def theta_operator(ctx, j):
    """z_j d_j (0-based j)."""
    e = tuple(1 if t == j else 0 for t in range(ctx.nvar))
    return WeylOperator(ctx, {e: ctx.to_frac(ctx.z[j])})


# ---- operator string grammar ------------------------------------------

def operator_to_string(op):
    """Coefficients in the scalar grammar, derivations as dz1, dz2, ..."""
    ctx = op.ctx
    if not op.terms:
        return "0"
    parts = []
    for e in sorted(op.terms,
                    key=lambda a: (sum(a), tuple(-x for x in reversed(a))),
                    reverse=True):
        c = op.terms[e]
        dz = "*".join(f"dz{j + 1}^{x}" if x > 1 else f"dz{j + 1}"
                      for j, x in enumerate(e) if x)
        cs = ratfun_to_string(ctx, c)
        if not dz:
            parts.append(cs)
        elif cs == "1":
            parts.append(dz)
        elif cs == "-1":
            parts.append("-" + dz)
        else:
            if "+" in cs[1:] or "-" in cs[1:]:
                cs = "(" + cs + ")"
            parts.append(cs + "*" + dz)
    out = parts[0]
    for p in parts[1:]:
        out += ("+" + p) if not p.startswith("-") else p
    return out


def parse_operator(ctx, text):
    """Parse the operator grammar; multiplication is noncommutative in the
    written order, division only by coefficient-level (d-free) operators."""

    def atom_name(s):
        m = _NAME.match(s)
        if m and m.group(1) == "dz":
            j = int(m.group(2))
            if not 1 <= j <= ctx.nvar:
                raise MalformedInputError(f"derivation index out of range: {s}")
            return WeylOperator.partial(ctx, j - 1)
        return WeylOperator.scalar(ctx, resolve_scalar_name(ctx, s))

    def div(a, b):
        if set(b.terms) - {(0,) * ctx.nvar}:
            raise MalformedInputError("division by a non-scalar operator")
        c = b.terms.get((0,) * ctx.nvar)
        if not c:
            raise MalformedInputError("division by zero")
        return a.scale(1 / c)

    p = _Parser(
        tokenize(text),
        atom_num=lambda v: WeylOperator.scalar(ctx, ctx.to_frac(v)),
        atom_name=atom_name,
        mul=weyl_mul,
        div=div,
        add=lambda a, b: a + b,
        sub=lambda a, b: a - b,
        neg=lambda a: -a,
        powr=lambda a, e: a ** e,
    )
    return p.parse()
