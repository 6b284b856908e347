"""Direction b-functions b_i(b), inverse-contiguity operators C_i, and the
composite operators that realize twisted-cohomology classes from the class
[dx/x] by derivation/contiguity shifts along configuration columns."""

import itertools
from dataclasses import dataclass

from .errors import (DegenerateDecompositionError, MalformedInputError,
                     ResourceLimitError)
from .groebner import (grevlex_order, normal_form, permuted_grevlex_order,
                       toric_groebner, toric_reduce_exponents, _clear_operator)
from .intlinalg import kernel_lattice, lattice_gcd, solve_integer
from .weyl import WeylOperator, weyl_mul


# ---------------------------------------------------------------------------
# facets of the configuration cone
# ---------------------------------------------------------------------------

def cone_facets(cay):
    """Primitive inner normals of the facets of the cone spanned by the columns."""
    d, N = cay.d, cay.N
    cols = cay.columns()
    facets = set()
    for sub in itertools.combinations(range(N), d - 1):
        if sub:
            nul = kernel_lattice([list(cols[j]) for j in sub])
        else:
            # empty wall: only meaningful for a one-dimensional cone
            nul = [tuple(1 if t == 0 else 0 for t in range(d))] if d == 1 else []
        if len(nul) != 1:
            continue
        F = nul[0]
        g = lattice_gcd(F)
        F = tuple(x // g for x in F)
        vals = [sum(F[i] * cols[j][i] for i in range(d)) for j in range(N)]
        if all(v >= 0 for v in vals) and any(v > 0 for v in vals):
            facets.add(F)
        elif all(v <= 0 for v in vals) and any(v < 0 for v in vals):
            facets.add(tuple(-x for x in F))
    return sorted(facets)


# ---------------------------------------------------------------------------
# direction contiguity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirectionContiguity:
    """Certified pair: c_op * d_i ≡ b_poly(b) modulo the hypergeometric ideal."""

    direction: int          # 0-based column index
    b_poly: object          # ring element in the parameters only
    c_op: WeylOperator      # parameter-free coefficients in Q[z]<d>

    def b_shifted(self, ctx, shift):
        """b_poly evaluated at b + shift (integer vector)."""
        return ctx.poly_shift_params(self.b_poly, shift)


def _facet_candidate(cay, ctx, i):
    """Facet-product candidate: returns (b_poly, product operator dict)."""
    facets = cone_facets(cay)
    col = cay.column(i)
    bpoly = ctx.one
    op = {(0,) * cay.N: ctx.one}
    engine_mul = None
    for F in facets:
        v = sum(F[t] * col[t] for t in range(cay.d))
        if v <= 0:
            continue
        for j in range(v):
            bpoly = bpoly * (sum(F[t] * ctx.b[t] for t in range(cay.d)) - j)
            th = {}
            for m in range(cay.N):
                w = sum(F[t] * cay.matrix[t, m] for t in range(cay.d))
                if w:
                    e = tuple(1 if s == m else 0 for s in range(cay.N))
                    th[e] = w * ctx.z[m]
            z0 = (0,) * cay.N
            if j:
                th[z0] = th.get(z0, ctx.zero) - j
            op = _poly_op_mul(ctx, op, th)
    return bpoly, op


def _poly_op_mul(ctx, P, Q):
    """Normally ordered product of poly-coefficient operator dicts."""
    wP = WeylOperator(ctx, {e: ctx.to_frac(c) for e, c in P.items()})
    wQ = WeylOperator(ctx, {e: ctx.to_frac(c) for e, c in Q.items()})
    prod = weyl_mul(wP, wQ)
    out = {}
    for e, c in prod.terms.items():
        if c.denom != ctx.ring.one:
            raise MalformedInputError("unexpected denominator in operator product")
        out[e] = c.numer
    return out


def direction_contiguity(cay, ctx, i, gkz_gb, toric_cache=None, max_ansatz_degree=4):
    """Compute (b_i, C_i) with C_i d_i - b_i(b) in the hypergeometric ideal.

    Primary route: reduce the facet product by the toric ideal oriented toward
    d_i and split off a right factor d_i.  Fallback: bounded linear ansatz.
    Either way the congruence is certified by an exact normal form.
    """
    bpoly, op = _facet_candidate(cay, ctx, i)
    toric_cache = toric_cache if toric_cache is not None else {}
    order = permuted_grevlex_order(cay.N, i)
    if order.name not in toric_cache:
        toric_cache[order.name] = toric_groebner(cay, ctx, order=order)
    red = toric_reduce_exponents(op, toric_cache[order.name])
    cand = None
    if red and all(e[i] >= 1 for e in red):
        cop = {tuple(e[t] - (1 if t == i else 0) for t in range(cay.N)): c
               for e, c in red.items()}
        cand = DirectionContiguity(
            i, bpoly, WeylOperator(ctx, {e: ctx.to_frac(c) for e, c in cop.items()}))
        if _certify(cay, ctx, cand, gkz_gb):
            return cand
    cand = _ansatz_contiguity(cay, ctx, i, gkz_gb, max_ansatz_degree)
    if cand is None:
        raise ResourceLimitError(
            f"no contiguity operator for direction {i + 1} within ansatz bounds")
    return cand


def _certify(cay, ctx, cont, gkz_gb):
    test = weyl_mul(cont.c_op, WeylOperator.partial(ctx, cont.direction)) - \
        WeylOperator.scalar(ctx, ctx.to_frac(cont.b_poly))
    nf = normal_form(test, gkz_gb)
    return not nf


def _ansatz_contiguity(cay, ctx, i, gkz_gb, max_degree):
    """Solve for parameter-free C = sum c_ga z^g d^a and b in Q[b] of bounded
    degree with NF(C d_i - b) = 0; exact rational linear algebra over Q."""
    from fractions import Fraction

    from .linsolve import nullspace_markowitz  # local import to avoid a cycle

    di = WeylOperator.partial(ctx, i)
    for deg in range(2, max_degree + 1):
        opmons = []
        for a in itertools.product(*[range(deg + 1)] * cay.N):
            if sum(a) > deg:
                continue
            for g in itertools.product(*[range(deg + 1)] * cay.N):
                if sum(g) <= deg:
                    opmons.append((g, a))
        bmons = [m for m in itertools.product(*[range(deg + 1)] * cay.d)
                 if sum(m) <= deg]
        nunk = len(opmons) + len(bmons)
        # normal forms of each candidate monomial times d_i, on one common
        # denominator per standard monomial, then split into Q-linear rows
        nfs = []
        for (g, a) in opmons:
            zmon = ctx.one
            for t, e in enumerate(g):
                if e:
                    zmon = zmon * ctx.z[t] ** e
            mon_op = WeylOperator.monomial(ctx, ctx.to_frac(zmon), a)
            nfs.append(normal_form(weyl_mul(mon_op, di), gkz_gb))
        stdmons = sorted({se for nf in nfs for se in nf}, key=gkz_gb.order.key)
        one_exp = (0,) * cay.N
        if one_exp not in stdmons:
            stdmons.append(one_exp)
        rows = {}

        def add(rkey, u, coeff):
            row = rows.setdefault(rkey, {})
            s = row.get(u, Fraction(0)) + coeff
            if s:
                row[u] = s
            else:
                row.pop(u, None)

        for se in stdmons:
            den = ctx.one
            for nf in nfs:
                c = nf.get(se)
                if c is not None:
                    g = den.gcd(c.denom)
                    den = den * c.denom.quo(g)
            denf = ctx.to_frac(den)
            for u, nf in enumerate(nfs):
                c = nf.get(se)
                if c is None:
                    continue
                cleared = c * denf
                for mon, cc in cleared.numer.terms():
                    add((se, mon), u, Fraction(cc.numerator, cc.denominator))
            if se == one_exp:
                for w, m in enumerate(bmons):
                    for mon, cc in den.terms():
                        full = tuple(m[t] + mon[t] for t in range(ctx.npar)) + mon[ctx.npar:]
                        add((se, full), len(opmons) + w,
                            -Fraction(cc.numerator, cc.denominator))
        basis = nullspace_markowitz(list(rows.values()), nunk)
        best = None
        for vec in basis:
            bpart = {bmons[w]: vec[len(opmons) + w]
                     for w in range(len(bmons)) if vec[len(opmons) + w]}
            if not bpart:
                continue
            bdeg = max(sum(m) for m in bpart)
            if best is None or bdeg < best[0]:
                best = (bdeg, vec, bpart)
        if best is None:
            continue
        _, vec, bpart = best
        from math import gcd, lcm
        scale = 1
        for x in vec:
            if x:
                scale = lcm(scale, Fraction(x).denominator)
        dom = ctx.ring.domain
        cterms = {}
        for u, (g, a) in enumerate(opmons):
            if vec[u]:
                q = Fraction(vec[u]) * scale
                mono = ctx.ring.from_dict({(0,) * ctx.npar + g: dom(int(q))})
                cterms[a] = cterms.get(a, ctx.fzero) + ctx.to_frac(mono)
        bp = ctx.zero
        for m, c in bpart.items():
            q = Fraction(c) * scale
            bp = bp + ctx.ring.from_dict({m + (0,) * ctx.nvar: dom(int(q))})
        cand = DirectionContiguity(i, bp, WeylOperator(ctx, cterms))
        if _certify(cay, ctx, cand, gkz_gb):
            return cand
    return None


# ---------------------------------------------------------------------------
# class indices and composite operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FormIndex:
    """Index q = (q', q'') of the class prod_l h_l^{-q'_l} x^{q''} dx/x, with a
    chosen integer decomposition r of q over the configuration columns."""

    q_prime: tuple
    q_doubleprime: tuple
    r: tuple

    @property
    def q(self):
        return tuple(self.q_prime) + tuple(self.q_doubleprime)

    def validate(self, cay):
        q = self.q
        for t in range(cay.d):
            if sum(cay.matrix[t, j] * self.r[j] for j in range(cay.N)) != q[t]:
                raise MalformedInputError("decomposition r does not reproduce q")


def decompose_form_index(cay, q_prime, q_doubleprime, box_radius=3):
    """FormIndex with an integer solution r of A r = q minimizing sum |r_i|
    within a bounded lattice search; deterministic tie-break."""
    q = tuple(q_prime) + tuple(q_doubleprime)
    if len(q) != cay.d:
        raise MalformedInputError("q has wrong length")
    part = solve_integer(cay.matrix, q)
    if part is None:
        raise MalformedInputError("q is not in the column lattice")
    kb = kernel_lattice(cay.matrix)
    best = None
    ranges = [range(-box_radius, box_radius + 1)] * len(kb)
    for ts in itertools.product(*ranges) if kb else [()]:
        r = list(part)
        for t, u in zip(ts, kb):
            for j in range(cay.N):
                r[j] += t * u[j]
        key = (sum(abs(x) for x in r), tuple(r))
        if best is None or key < best[0]:
            best = (key, tuple(r))
    return FormIndex(tuple(q_prime), tuple(q_doubleprime), best[1])


def decomposition_candidates(cay, q_prime, q_doubleprime, box_radius=3):
    """All decompositions within the search box, cheapest first."""
    q = tuple(q_prime) + tuple(q_doubleprime)
    part = solve_integer(cay.matrix, q)
    if part is None:
        raise MalformedInputError("q is not in the column lattice")
    kb = kernel_lattice(cay.matrix)
    seen = []
    ranges = [range(-box_radius, box_radius + 1)] * len(kb)
    for ts in itertools.product(*ranges) if kb else [()]:
        r = list(part)
        for t, u in zip(ts, kb):
            for j in range(cay.N):
                r[j] += t * u[j]
        seen.append(tuple(r))
    seen.sort(key=lambda r: (sum(abs(x) for x in r), r))
    return [FormIndex(tuple(q_prime), tuple(q_doubleprime), r) for r in seen]


def assemble_F(cay, ctx, form, contiguities):
    """Composite operator realizing the class of `form` from [dx/x]:

        F = C_N^{-r_N} ... C_1^{-r_1} d_N^{r_N} ... d_1^{r_1} / (B B')

    applied right-to-left (derivations first, lowest index first).  Returns
    (operator, prefactor) where prefactor = 1/(B B') as a field element.
    """
    r = form.r
    form.validate(cay)
    cols = cay.columns()
    # B': scalars picked up by the derivation factors, ascending index
    Bp = ctx.fone
    shift_acc = [0] * cay.d
    for j in range(cay.N):
        if r[j] <= 0:
            continue
        beta_j = [-shift_acc[t] for t in range(cay.d)]  # relative to symbolic b
        for t in range(r[j]):
            lin = ctx.fzero
            for l in range(cay.k):
                if cay.matrix[l, j]:
                    lin = lin + ctx.fb[l] + (beta_j[l] - t * cols[j][l])
            Bp = Bp * lin
        for tt in range(cay.d):
            shift_acc[tt] += r[j] * cols[j][tt]
    # B: scalars picked up by the contiguity factors, ascending index
    B = ctx.fone
    pos_total = [0] * cay.d
    for j in range(cay.N):
        if r[j] > 0:
            for t in range(cay.d):
                pos_total[t] += r[j] * cols[j][t]
    neg_acc = [0] * cay.d
    for j in range(cay.N):
        if r[j] >= 0:
            continue
        cont = contiguities[j]
        base = [-pos_total[t] + neg_acc[t] for t in range(cay.d)]
        for t in range(1, -r[j] + 1):
            shift = [base[s] + t * cols[j][s] for s in range(cay.d)]
            bval = ctx.to_frac(cont.b_shifted(ctx, shift))
            lin = ctx.fzero
            for l in range(cay.k):
                if cay.matrix[l, j]:
                    lin = lin + ctx.fb[l] + shift[l]
            if not bval or not lin:
                raise DegenerateDecompositionError(
                    f"vanishing contiguity prefactor for direction {j + 1}")
            B = B * bval / lin
        for s in range(cay.d):
            neg_acc[s] += (-r[j]) * cols[j][s]
    if not B or not Bp:
        raise DegenerateDecompositionError("identically zero prefactor")
    # operator product: ascending left-multiplication gives index N..1 order
    op = WeylOperator.one(ctx)
    for j in range(cay.N):
        if r[j] > 0:
            op = weyl_mul(WeylOperator.partial(ctx, j) ** r[j], op)
    for j in range(cay.N):
        if r[j] < 0:
            op = weyl_mul(contiguities[j].c_op ** (-r[j]), op)
    return op, 1 / (B * Bp)
