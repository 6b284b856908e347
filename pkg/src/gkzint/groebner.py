"""Buchberger engine for the rational Weyl algebra and for commutative
polynomial rings (toric ideals), with exact normal forms.

Operators are stored internally as dicts {d-exponent: ring element}; reduction
is fraction-free (coefficients stay polynomial, content is stripped after each
step).  The same engine runs the commutative case: slots without an attached
z-variable produce no Leibniz terms.
"""

import itertools
from dataclasses import dataclass, field
from math import comb

from .errors import MalformedInputError, ResourceLimitError
from .intlinalg import kernel_lattice
from .weyl import WeylOperator, box_operator, euler_operators


# ---------------------------------------------------------------------------
# term orders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TermOrder:
    name: str
    key: callable = field(compare=False)

    def max(self, exps):
        return max(exps, key=self.key)


def grevlex_order(nexp):
    """Graded reverse lexicographic with d_1 > d_2 > ... > d_nexp."""

    def key(a):
        return (sum(a), tuple(-x for x in reversed(a)))

    return TermOrder(f"grevlex({nexp})", key)


def permuted_grevlex_order(nexp, last):
    """Grevlex on exponents re-read so that slot `last` is cheapest."""
    perm = [j for j in range(nexp) if j != last] + [last]

    def key(a):
        b = tuple(a[j] for j in perm)
        return (sum(b), tuple(-x for x in reversed(b)))

    return TermOrder(f"grevlex({nexp};last=d{last + 1})", key)


def elimination_order(nexp, block):
    """Block order: degree in `block` slots first, then grevlex overall."""
    block = tuple(block)

    def key(a):
        return (sum(a[j] for j in block), sum(a), tuple(-x for x in reversed(a)))

    return TermOrder(f"elim({nexp};{block})", key)


# ---------------------------------------------------------------------------
# internal fraction-free engine
# ---------------------------------------------------------------------------

class _Engine:
    """Operations on poly-coefficient operator dicts with `nexp` slots.

    zslots[j] is the ring generator of the variable paired with slot j under
    the Weyl relation, or None for a purely commutative slot.
    """

    def __init__(self, ctx, nexp, zslots):
        self.ctx = ctx
        self.nexp = nexp
        self.zslots = zslots
        self._shift_cache = {}

    def mul_term(self, alpha, c_alpha, Q):
        ctx, nexp = self.ctx, self.nexp
        out = {}
        for beta, q in Q.items():
            stack = [(q, 1, ())]
            for j in range(nexp):
                if alpha[j] == 0:
                    stack = [(dq, b, nu + (0,)) for dq, b, nu in stack]
                    continue
                gen = self.zslots[j]
                new = []
                for (dq, bin0, nupref) in stack:
                    dd = dq
                    for nu_j in range(alpha[j] + 1):
                        if not dd:
                            break
                        new.append((dd, bin0 * comb(alpha[j], nu_j), nupref + (nu_j,)))
                        if nu_j < alpha[j]:
                            dd = dd.diff(gen) if gen is not None else None
                            if dd is None:
                                dd = ctx.zero
                stack = new
            for dq, bin0, nu in stack:
                expo = tuple(alpha[j] - nu[j] + beta[j] for j in range(nexp))
                coef = c_alpha * dq
                if bin0 != 1:
                    coef = coef * bin0
                s = out.get(expo, ctx.zero) + coef
                if s:
                    out[expo] = s
                else:
                    out.pop(expo, None)
        return out

    def shifted(self, gi, shift, gop):
        key = (gi, shift)
        hit = self._shift_cache.get(key)
        if hit is None:
            hit = self.mul_term(shift, self.ctx.one, gop)
            self._shift_cache[key] = hit
        return hit

    def content_strip(self, P, order):
        if not P:
            return P
        cs = list(P.values())
        g = cs[0]
        for c in cs[1:]:
            if g == self.ctx.one:
                break
            g = g.gcd(c)
        if g != self.ctx.one:
            P = {e: c.quo(g) for e, c in P.items()}
        lm = order.max(P)
        if P[lm].LC < 0:
            P = {e: -c for e, c in P.items()}
        return P

    def _find_reducible(self, P, prepped, order):
        for e in sorted(P, key=order.key, reverse=True):
            for g in prepped:
                lm = g[1]
                if all(e[j] >= lm[j] for j in range(self.nexp)):
                    return e, g
        return None

    def reduce_full(self, P, prepped, order):
        """Fully reduced remainder, content-stripped (membership/GB use)."""
        P = dict(P)
        while True:
            t = self._find_reducible(P, prepped, order)
            if not t:
                return self.content_strip(P, order)
            e, (gi, glm, glc, gop) = t
            shift = tuple(e[j] - glm[j] for j in range(self.nexp))
            c = P[e]
            P2 = {ee: cc * glc for ee, cc in P.items()}
            for ee, cc in self.shifted(gi, shift, gop).items():
                cc = cc * c
                s = P2.get(ee, self.ctx.zero) - cc
                if s:
                    P2[ee] = s
                else:
                    P2.pop(ee, None)
            P = self.content_strip(P2, order)
            if not P:
                return P

    def reduce_tracked(self, P, prepped, order):
        """Fully reduced remainder with exact multiplier: returns (R, mult) with
        mult * P ≡ R modulo the left ideal, mult a field element."""
        ctx = self.ctx
        P = dict(P)
        mult = ctx.fone
        while True:
            t = self._find_reducible(P, prepped, order)
            if not t:
                return P, mult
            e, (gi, glm, glc, gop) = t
            shift = tuple(e[j] - glm[j] for j in range(self.nexp))
            c = P[e]
            P2 = {ee: cc * glc for ee, cc in P.items()}
            for ee, cc in self.shifted(gi, shift, gop).items():
                cc = cc * c
                s = P2.get(ee, ctx.zero) - cc
                if s:
                    P2[ee] = s
                else:
                    P2.pop(ee, None)
            mult = mult * ctx.to_frac(glc)
            if P2:
                cs = list(P2.values())
                g = cs[0]
                for cc in cs[1:]:
                    if g == ctx.one:
                        break
                    g = g.gcd(cc)
                if g != ctx.one:
                    P2 = {ee: cc.quo(g) for ee, cc in P2.items()}
                    mult = mult / ctx.to_frac(g)
            P = P2

    def prep(self, g, order, gi):
        g = self.content_strip(g, order)
        lm = order.max(g)
        return (gi, lm, g[lm], g)

    def spair(self, g1, g2):
        (_, lm1, lc1, op1), (_, lm2, lc2, op2) = g1, g2
        lcmm = tuple(max(a, b) for a, b in zip(lm1, lm2))
        s1 = tuple(l - a for l, a in zip(lcmm, lm1))
        s2 = tuple(l - a for l, a in zip(lcmm, lm2))
        out = {}
        for e, c in self.mul_term(s1, lc2, op1).items():
            out[e] = c
        for e, c in self.mul_term(s2, lc1, op2).items():
            s = out.get(e, self.ctx.zero) - c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return out

    def buchberger(self, gens, order, step_limit):
        G = []
        for g in gens:
            if g:
                G.append(self.prep(g, order, len(G)))
        pairs = [(i, j) for i in range(len(G)) for j in range(i)]
        steps = 0
        while pairs:
            pairs.sort(key=lambda ij: order.key(tuple(
                max(a, b) for a, b in zip(G[ij[0]][1], G[ij[1]][1]))), reverse=True)
            i, j = pairs.pop()
            steps += 1
            if steps > step_limit:
                raise ResourceLimitError(
                    f"Buchberger exceeded {step_limit} S-pair reductions")
            r = self.reduce_full(self.spair(G[i], G[j]), G, order)
            if r:
                G.append(self.prep(r, order, len(G)))
                pairs += [(len(G) - 1, t) for t in range(len(G) - 1)]
        # minimalize: drop generators whose leading term is divisible by another's
        order_ix = sorted(range(len(G)), key=lambda i: order.key(G[i][1]))
        kept = []
        for i in order_ix:
            lm = G[i][1]
            if not any(all(lm[t] >= G[j][1][t] for t in range(self.nexp)) for j in kept):
                kept.append(i)
        Gmin = [G[i] for i in kept]
        # tail-reduce for the unique reduced basis
        out = []
        for i in range(len(Gmin)):
            others = [Gmin[j] for j in range(len(Gmin)) if j != i]
            r = self.reduce_full(Gmin[i][3], others, order)
            out.append(self.prep(r, order, len(out)))
        self._shift_cache.clear()
        return out


# ---------------------------------------------------------------------------
# public Groebner objects
# ---------------------------------------------------------------------------

class GroebnerBasis:
    """Reduced Groebner basis; generators are normally ordered operators with
    polynomial (content-free) coefficients, leading coefficient sign-normalized."""

    def __init__(self, ctx, order, prepped, nexp, zslots, is_reduced=True):
        self.ctx = ctx
        self.order = order
        self.nexp = nexp
        self.zslots = zslots
        self.is_reduced = is_reduced
        self._prepped = prepped
        self._engine = _Engine(ctx, nexp, zslots)

    @property
    def generators(self):
        out = []
        for (_, lm, lc, op) in self._prepped:
            out.append(WeylOperator(self.ctx, {e: self.ctx.to_frac(c) for e, c in op.items()}))
        return out

    def leading_exponents(self):
        return [lm for (_, lm, _, _) in self._prepped]

    def __len__(self):
        return len(self._prepped)

    def reduce_to_zero(self, op):
        """Ideal membership via full reduction."""
        P = _clear_operator(self.ctx, op)[0]
        return not self._engine.reduce_full(P, self._prepped, self.order)

    def spair_certificate(self):
        """Every S-pair of the basis reduces to zero (Buchberger criterion)."""
        eng = self._engine
        for i in range(len(self._prepped)):
            for j in range(i):
                s = eng.spair(self._prepped[i], self._prepped[j])
                if eng.reduce_full(s, self._prepped, self.order):
                    return False
        return True


def _clear_operator(ctx, op):
    """WeylOperator -> (poly-coefficient dict, common denominator as field elt)."""
    den = ctx.one
    for c in op.terms.values():
        g = den.gcd(c.denom)
        den = den * c.denom.quo(g)
    denf = ctx.to_frac(den)
    out = {}
    for e, c in op.terms.items():
        cc = c * denf
        if cc.denom != ctx.ring.one:
            raise MalformedInputError("operator coefficients failed to clear")
        out[e] = cc.numer
    return out, denf


def buchberger(ctx, ops, order=None, step_limit=200000, nexp=None, zslots=None):
    nexp = nexp if nexp is not None else ctx.nvar
    if zslots is None:
        zslots = [ctx.ring.gens[ctx.npar + j] for j in range(nexp)]
    order = order or grevlex_order(nexp)
    eng = _Engine(ctx, nexp, zslots)
    gens = [_clear_operator(ctx, op)[0] if isinstance(op, WeylOperator) else op
            for op in ops]
    prepped = eng.buchberger(gens, order, step_limit)
    return GroebnerBasis(ctx, order, prepped, nexp, zslots)


def gkz_groebner(cay, ctx, order=None, step_limit=200000):
    """Reduced Groebner basis of the hypergeometric ideal <E_i - b_i, box_u>
    over Q(b)(z), for symbolic generic parameters."""
    gens = euler_operators(cay, ctx)
    for u in kernel_lattice(cay.matrix):
        gens.append(box_operator(ctx, u))
    return buchberger(ctx, gens, order=order, step_limit=step_limit)


# ---------------------------------------------------------------------------
# standard monomials and normal forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StandardMonomialBasis:
    """Monomials not divisible by any leading term; descending canonical order."""

    monomials: tuple

    def __len__(self):
        return len(self.monomials)

    def index(self, e):
        return self.monomials.index(e)

    def vector(self, nf_dict, ctx):
        return [nf_dict.get(e, ctx.fzero) for e in self.monomials]


def standard_monomials(G):
    lms = G.leading_exponents()
    nexp = G.nexp
    bounds = []
    for j in range(nexp):
        pure = [lm[j] for lm in lms if all(lm[t] == 0 for t in range(nexp) if t != j)]
        if not pure:
            raise MalformedInputError(
                "leading-term ideal has an infinite staircase (non-holonomic input)")
        bounds.append(min(pure))
    out = []
    for e in itertools.product(*[range(b) for b in bounds]):
        if not any(all(e[j] >= lm[j] for j in range(nexp)) for lm in lms):
            out.append(e)
    out.sort(key=G.order.key, reverse=True)
    return StandardMonomialBasis(tuple(out))


def normal_form(op, G):
    """Exact normal form of a WeylOperator modulo G: dict exponent -> coefficient.

    Linear over the coefficient field; for a reduced basis the support lies in
    the standard monomials.
    """
    ctx = G.ctx
    P, den = _clear_operator(ctx, op)
    R, mult = G._engine.reduce_tracked(P, G._prepped, G.order)
    mult = mult * den
    return {e: ctx.to_frac(c) / mult for e, c in R.items()}


# ---------------------------------------------------------------------------
# toric ideals
# ---------------------------------------------------------------------------

def _binomial_dict(ctx, u):
    for x in u:
        if x:
            if x < 0:
                u = tuple(-y for y in u)
            break
    ep = tuple(max(x, 0) for x in u)
    em = tuple(max(-x, 0) for x in u)
    return {ep: ctx.one, em: -ctx.one}


def toric_groebner(cay, ctx, order=None, step_limit=200000):
    """Reduced Groebner basis of the saturated toric ideal in Q[d_1..d_N].

    The lattice-basis binomial ideal is saturated with respect to the product
    of all variables via one auxiliary variable and an elimination order.
    """
    N = cay.N
    kb = kernel_lattice(cay.matrix)
    if not kb:
        return GroebnerBasis(ctx, order or grevlex_order(N), [], N, [None] * N)
    # step 1: saturate with aux slot w (index N): gens + (w*d_1..d_N - 1)
    eng = _Engine(ctx, N + 1, [None] * (N + 1))
    gens = [_binomial_dict(ctx, u + (0,)) for u in kb]
    gens.append({tuple([1] * N + [1]): ctx.one, (0,) * (N + 1): -ctx.one})
    elim = elimination_order(N + 1, [N])
    sat = eng.buchberger(gens, elim, step_limit)
    kept = []
    for (_, lm, lc, g) in sat:
        if all(e[N] == 0 for e in g):
            kept.append({e[:N]: c for e, c in g.items()})
    # step 2: reduced basis in the requested order
    order = order or grevlex_order(N)
    eng2 = _Engine(ctx, N, [None] * N)
    prepped = eng2.buchberger(kept, order, step_limit)
    return GroebnerBasis(ctx, order, prepped, N, [None] * N)


def toric_reduce_exponents(op_dict, toric_G):
    """Rewrite the d-monomials of a poly-coefficient operator dict modulo a
    binomial toric basis (coefficients pass through unchanged)."""
    ctx = toric_G.ctx
    rules = []
    for (_, lm, lc, g) in toric_G._prepped:
        others = [(e, c) for e, c in g.items() if e != lm]
        rules.append((lm, lc, others))
    P = dict(op_dict)
    changed = True
    nexp = toric_G.nexp
    while changed:
        changed = False
        for e in sorted(P, key=toric_G.order.key, reverse=True):
            for lm, lc, others in rules:
                if all(e[j] >= lm[j] for j in range(nexp)):
                    c = P.pop(e)
                    if lc != ctx.one and lc != -ctx.one:
                        raise MalformedInputError("toric basis is not binomial-monic")
                    for oe, oc in others:
                        ee = tuple(e[j] - lm[j] + oe[j] for j in range(nexp))
                        add = c * oc
                        add = -add if lc == ctx.one else add
                        s = P.get(ee, ctx.zero) + add
                        if s:
                            P[ee] = s
                        else:
                            P.pop(ee, None)
                    changed = True
                    break
            if changed:
                break
    return P
