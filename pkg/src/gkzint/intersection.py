"""Rational solutions of the secondary equation and their normalization into
the cohomology intersection matrix.

The secondary equation for the intersection matrix I reads, direction by
direction,  d_i I = P_i I + I (P_i^dual)^T  (connection matrices are the
transposes of the Pfaffian matrices).  Rational solutions are unique up to a
scalar in Q(b); the scalar is pinned exactly by the constant term of the
series expansion of a chosen entry at a degeneration center, which collapses
to a rational function of the parameters."""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from sympy import factor_list

from .errors import (InconsistencyError, MalformedInputError,
                     NormalizationError, ParameterError, ResourceLimitError)
from .intlinalg import rational_matrix_inverse, solve_integer, kernel_lattice
from .linsolve import nullspace_markowitz
from .ratmat import RatFunMatrix


@dataclass
class SecondaryEquationInstance:
    """Pfaffian data entering the secondary equation.

    `pfaffian[i]` is P_i (so the connection matrix is its transpose); the dual
    system is the parameter-negated one when bases are mirrored.  `fixed_z`
    records coordinates frozen to rational values (line instances)."""

    ctx: object
    cayley: object
    size: int
    directions: tuple            # 0-based z indices still free
    pfaffian: dict               # i -> RatFunMatrix P_i (restricted)
    pfaffian_dual: dict
    basis: tuple                 # FormIndex tuple
    dual_basis: tuple
    fixed_z: dict                # j -> Fraction for frozen coordinates

    @classmethod
    def from_pfaffian(cls, psys, ctx, fix=None):
        fix = dict(fix or {})
        subs = [fix.get(j) for j in range(psys.cayley.N)]
        dirs = tuple(j for j in range(psys.cayley.N) if j not in fix)
        P, Pd = {}, {}
        for i in dirs:
            M = psys.matrices[i]
            Md = psys.dual_matrices[i]
            if fix:
                M = M.subs_z(subs)
                Md = Md.subs_z(subs)
            P[i], Pd[i] = M, Md
        return cls(ctx=ctx, cayley=psys.cayley, size=psys.size, directions=dirs,
                   pfaffian=P, pfaffian_dual=Pd, basis=psys.basis,
                   dual_basis=psys.basis, fixed_z=fix)

    def omega(self, i):
        return self.pfaffian[i].transpose()

    def omega_dual(self, i):
        return self.pfaffian_dual[i].transpose()

    def residual(self, I, i):
        """d_i I - P_i I - I (P_i^dual)^T, exact."""
        return I.diff_z(i) - self.pfaffian[i] * I - I * self.pfaffian_dual[i].transpose()

    def residuals_vanish(self, I):
        return all(self.residual(I, i).is_zero() for i in self.directions)


# ---------------------------------------------------------------------------
# denominator collection
# ---------------------------------------------------------------------------

def _irreducible_z_factors(ctx, matrices):
    """Distinct non-constant irreducible factors (in the z variables) of all
    denominators, as ring elements."""
    seen = {}
    for M in matrices:
        for row in M.rows:
            for c in row:
                den = c.denom
                if den == ctx.ring.one:
                    continue
                for fac, _mult in factor_list(den.as_expr())[1]:
                    p = ctx.ring.from_expr(fac)
                    # normalize sign
                    if p.LC < 0:
                        p = -p
                    seen[p] = True
    return list(seen)


def _poly_weight(cay, p):
    """Torus weight of a homogeneous polynomial in z (error if inhomogeneous)."""
    ws = set()
    for mon, _ in p.terms():
        zexp = mon[-cay.N:]
        ws.add(tuple(sum(cay.matrix[t, j] * zexp[j] for j in range(cay.N))
                     for t in range(cay.d)))
    if len(ws) != 1:
        raise MalformedInputError("denominator factor is not torus-homogeneous")
    return ws.pop()


# ---------------------------------------------------------------------------
# rational solution search
# ---------------------------------------------------------------------------

def rational_solution_secondary(inst, degree_bound=4, denominator_power=2,
                                monomial_radius=3):
    """Nonzero rational solution of the secondary equation, plus the dimension
    of the solution space found within the ansatz.

    Ansatz: I = (polynomial matrix) / D^e with D the squarefree product of the
    denominator factors of the system; when the instance carries the full
    direction set and basis weights, the numerator support is restricted to
    torus-homogeneous lattice monomials of the forced weight.
    """
    ctx = inst.ctx
    mats = [inst.pfaffian[i] for i in inst.directions] + \
           [inst.pfaffian_dual[i] for i in inst.directions]
    factors = _irreducible_z_factors(ctx, mats)
    full = not inst.fixed_z and len(inst.directions) == inst.cayley.N
    best = None
    for e in range(denominator_power + 1):
        if full:
            supports = _homogeneous_supports(inst, factors, e, monomial_radius)
        else:
            supports = _dense_supports(inst, factors, e, degree_bound)
        if supports is None:
            continue
        basis, nunk = _solve_ansatz(inst, supports)
        if basis:
            if len(basis) > 1:
                raise InconsistencyError(
                    f"secondary equation has a {len(basis)}-dimensional rational "
                    "solution space in the ansatz; genericity is violated")
            I = _vector_to_matrix(inst, supports, basis[0])
            if not inst.residuals_vanish(I):
                raise InconsistencyError("ansatz solution fails the exact residual")
            return I, 1
    raise ResourceLimitError(
        "no rational solution within the configured ansatz bounds; "
        "retry with larger degree_bound/denominator_power")


def _monomial_field(ctx, v):
    g = ctx.fone
    for j, e in enumerate(v):
        if e:
            g = g * ctx.fz[j] ** e
    return g


def _homogeneous_supports(inst, factors, e, radius):
    """Per-entry candidate monomials z^v / D^e with A v = weight constraint."""
    cay, ctx = inst.cayley, inst.ctx
    D = ctx.one
    for f in factors:
        D = D * f
    wD = _poly_weight(cay, D) if factors else (0,) * cay.d
    kb = kernel_lattice(cay.matrix)
    denf = ctx.to_frac(D) ** e if e else ctx.fone
    supports = {}
    for p in range(inst.size):
        for q in range(inst.size):
            w = tuple(-(inst.basis[p].q[t] + inst.dual_basis[q].q[t]) + e * wD[t]
                      for t in range(cay.d))
            v0 = solve_integer(cay.matrix, w)
            mons = []
            if v0 is not None:
                for ts in itertools.product(*([range(-radius, radius + 1)] * len(kb))):
                    v = list(v0)
                    for t, u in zip(ts, kb):
                        for j in range(cay.N):
                            v[j] += t * u[j]
                    if all(abs(x) <= 2 * radius for x in v):
                        mons.append(_monomial_field(ctx, v) / denf)
            supports[(p, q)] = mons
    return supports


def _dense_supports(inst, factors, e, degree_bound):
    """Per-entry monomials z^v / D^e over the free variables, |v| <= bound."""
    ctx = inst.ctx
    D = ctx.one
    for f in factors:
        D = D * f
    denf = ctx.to_frac(D) ** e if e else ctx.fone
    free = inst.directions
    mons = []
    for v in itertools.product(*([range(degree_bound + 1)] * len(free))):
        if sum(v) > degree_bound:
            continue
        g = ctx.fone
        for j, x in zip(free, v):
            if x:
                g = g * ctx.fz[j] ** x
        mons.append(g / denf)
    supports = {}
    for p in range(inst.size):
        for q in range(inst.size):
            supports[(p, q)] = list(mons)
    return supports


def _solve_ansatz(inst, supports):
    """Assemble coefficient-matching rows over Q(b) and solve the nullspace."""
    ctx = inst.ctx
    r = inst.size
    unknowns = {}
    for (p, q), mons in supports.items():
        for t, g in enumerate(mons):
            unknowns[(p, q, t)] = len(unknowns)
    nunk = len(unknowns)
    if nunk == 0:
        return [], 0
    rows = []
    for i in inst.directions:
        gi = ctx.field.gens[ctx.npar + i]
        P = inst.pfaffian[i]
        Pd = inst.pfaffian_dual[i]
        for p in range(r):
            for q in range(r):
                comb = {}

                def add(u, fr):
                    if not fr:
                        return
                    s = comb.get(u, ctx.fzero) + fr
                    if s:
                        comb[u] = s
                    else:
                        comb.pop(u, None)

                for t, g in enumerate(supports[(p, q)]):
                    add(unknowns[(p, q, t)], g.diff(gi))
                for k in range(r):
                    if P[p, k]:
                        for t, g in enumerate(supports[(k, q)]):
                            add(unknowns[(k, q, t)], -P[p, k] * g)
                    if Pd[q, k]:
                        for t, g in enumerate(supports[(p, k)]):
                            add(unknowns[(p, k, t)], -Pd[q, k] * g)
                if not comb:
                    continue
                den = ctx.one
                for fr in comb.values():
                    g2 = den.gcd(fr.denom)
                    den = den * fr.denom.quo(g2)
                denf = ctx.to_frac(den)
                split = {}
                for u, fr in comb.items():
                    cleared = fr * denf
                    for mon, c in cleared.numer.terms():
                        zmon = mon[ctx.npar:]
                        bmon = mon[:ctx.npar] + (0,) * ctx.nvar
                        row = split.setdefault(zmon, {})
                        cc = ctx.to_frac(ctx.ring.from_dict({bmon: c}))
                        s = row.get(u, ctx.fzero) + cc
                        if s:
                            row[u] = s
                        else:
                            row.pop(u, None)
                rows.extend(v for v in split.values() if v)
    basis = nullspace_markowitz(rows, nunk)
    # normalize int placeholders to field elements
    out = []
    for vec in basis:
        out.append([ctx.to_frac(x) if isinstance(x, int) else x for x in vec])
    return out, nunk


def _vector_to_matrix(inst, supports, vec):
    ctx = inst.ctx
    r = inst.size
    unknowns = {}
    for (p, q), mons in supports.items():
        for t, g in enumerate(mons):
            unknowns[(p, q, t)] = len(unknowns)
    rows = []
    for p in range(r):
        row = []
        for q in range(r):
            acc = ctx.fzero
            for t, g in enumerate(supports[(p, q)]):
                c = vec[unknowns[(p, q, t)]]
                if c:
                    acc = acc + c * g
            row.append(acc)
        rows.append(row)
    return RatFunMatrix(ctx, rows)


# ---------------------------------------------------------------------------
# exact center values of the quadratic relation
# ---------------------------------------------------------------------------

def _poch_field(ctx, x, w):
    """(x)_w for a field element x and integer w."""
    out = ctx.fone
    if w >= 0:
        for j in range(w):
            out = out * (x + j)
    else:
        for j in range(1, -w + 1):
            out = out / (x - j)
    return out


def rcin_center_value(cay, ctx, T, z0, a, b, a2, b2, targets=None, shell=8):
    """Exact value in Q(b) of the z^target-Laurent coefficient (over the
    vanishing coordinates of z0) of
        <x^a h^b dx/x, x^a' h^b' dx/x>_ch / (2 pi i)^n
    expanded at the degeneration center z0 (entries 0 or +-1).

    The paired Gamma factors collapse against the sine factors, so every
    contributing term is rational in the parameters; nonvanishing +-1
    coordinates contribute exact signs.
    """
    simplex_sets = T.simplex_sets() if hasattr(T, "simplex_sets") else \
        [tuple(sorted(s)) for s in T]
    k, n, d, N = cay.k, cay.n, cay.d, cay.N
    z0 = [Fraction(x) for x in z0]
    if any(x not in (0, 1, -1) for x in z0):
        raise NormalizationError("center coordinates must be 0 or +-1")
    vanishing = [j for j in range(N) if z0[j] == 0]
    targets = {j: 0 for j in vanishing} if targets is None else dict(targets)
    v1 = tuple(-x for x in b) + tuple(a)
    v2 = tuple(-x for x in b2) + tuple(a2)
    pref = ctx.fone if (sum(b) + sum(b2)) % 2 == 0 else -ctx.fone
    for l in range(k):
        pref = pref * (-ctx.fb[l])
        pref = pref * _poch_field(ctx, -ctx.fb[l] - b[l], b[l])
        pref = pref * _poch_field(ctx, ctx.fb[l] - b2[l], b2[l])
    total = ctx.fzero
    for sigma in simplex_sets:
        sig = tuple(sorted(sigma))
        sbar = [j for j in range(N) if j not in sig]
        Asig = [[cay.matrix[i, j] for j in sig] for i in range(d)]
        inv = rational_matrix_inverse(Asig)
        L = []
        for t in range(d):
            s = ctx.fzero
            for rr in range(d):
                if inv[t][rr]:
                    s = s - inv[t][rr] * ctx.fb[rr]
            L.append(s)
        p = [sum(inv[t][rr] * v1[rr] for rr in range(d)) for t in range(d)]
        q = [sum(inv[t][rr] * v2[rr] for rr in range(d)) for t in range(d)]
        if any(x.denominator != 1 for x in p + q):
            raise NormalizationError("triangulation simplex is not unimodular")
        p = [int(x) for x in p]
        q = [int(x) for x in q]
        mu = []
        for j in sbar:
            col = [sum(inv[t][rr] * cay.matrix[rr, j] for rr in range(d))
                   for t in range(d)]
            mu.append([int(x) for x in col])
        nb = len(sbar)
        matched_high_shell = False
        for tot in range(shell + 1):
            for s in _weak_compositions(tot, nb):
                evec = {}
                for pos, j in enumerate(sbar):
                    evec[j] = s[pos]
                for t, j in enumerate(sig):
                    evec[j] = -(p[t] + q[t]) - sum(mu[pos][t] * s[pos]
                                                   for pos in range(nb))
                if any(evec[j] != targets.get(j, 0) for j in vanishing):
                    continue
                if tot >= shell - 1:
                    matched_high_shell = True
                sign = 1
                for j in range(N):
                    if z0[j] == -1 and evec[j] % 2:
                        sign = -sign
                for m1 in itertools.product(*[range(x + 1) for x in s]) if nb else [()]:
                    m2 = tuple(x - y for x, y in zip(s, m1))
                    P = [p[t] + sum(mu[pos][t] * m1[pos] for pos in range(nb))
                         for t in range(d)]
                    Q = [q[t] + sum(mu[pos][t] * m2[pos] for pos in range(nb))
                         for t in range(d)]
                    coef = ctx.fone * sign
                    for t in range(d):
                        den = L[t] * _poch_field(ctx, 1 - L[t], -P[t]) * \
                            _poch_field(ctx, 1 + L[t], -Q[t])
                        coef = coef / den
                    f = 1
                    for x in m1:
                        f *= factorial(x)
                    for x in m2:
                        f *= factorial(x)
                    if f > 1:
                        coef = coef / f
                    total = total + coef
        if matched_high_shell:
            raise NormalizationError(
                "Laurent coefficient extraction did not stabilize within the "
                "shell bound; increase it or choose another center")
    return pref * total


def _weak_compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for rest in _weak_compositions(total - head, parts - 1):
            yield (head,) + rest


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

@dataclass
class IntersectionResult:
    I_raw: RatFunMatrix
    C: object                    # field element in the parameters
    I_ch: RatFunMatrix           # equals C * I_raw; stored divided by (2 pi i)^n
    two_pi_i_power: int
    normalization_point: dict
    solution_dimension: int = 1


def _valuation_and_limit(ctx, fr, j):
    """fr = z_j^v (c + O(z_j)); returns (v, c) with c a field element."""
    gidx = ctx.npar + j

    def split(p):
        mn = min(mon[gidx] for mon in p.monoms())
        coeff = {}
        for mon, c in p.terms():
            if mon[gidx] == mn:
                mm = mon[:gidx] + (0,) + mon[gidx + 1:]
                coeff[mm] = c
        return mn, ctx.ring.from_dict(coeff)

    if not fr:
        raise NormalizationError("zero entry has no center value")
    vn, cn = split(fr.numer)
    vd, cd = split(fr.denom)
    return vn - vd, ctx.to_frac(cn) / ctx.to_frac(cd)


def normalize_intersection(inst, I_raw, T, center_signs=None, shell=8,
                           cross_check=True):
    """Pin the scalar so that C * I_raw equals the intersection matrix divided
    by (2 pi i)^n, by matching one entry's exact Laurent coefficient at the
    degeneration center; cross-checks a second entry when available."""
    ctx, cay = inst.ctx, inst.cayley
    center_signs = dict(center_signs or {})
    # center: frozen coordinates keep their (+-1) values, the first simplex of T
    # carries the remaining nonvanishing coordinates, everything else -> 0
    simplex_sets = T.simplex_sets()
    z0 = [None] * cay.N
    for j, v in inst.fixed_z.items():
        z0[j] = Fraction(v)
    sigma0 = None
    for s in simplex_sets:
        if all(j in s for j in inst.fixed_z):
            sigma0 = s
            break
    if sigma0 is None:
        raise NormalizationError("no simplex is compatible with the frozen point")
    for j in range(cay.N):
        if z0[j] is None:
            z0[j] = Fraction(center_signs.get(j, 1)) if j in sigma0 else Fraction(0)
    if any(x not in (0, 1, -1) for x in z0):
        raise NormalizationError(
            "frozen coordinates must be +-1 at the degeneration center")
    vanishing = [j for j in range(cay.N) if z0[j] == 0]
    subs = [None if j in vanishing else z0[j] for j in range(cay.N)]

    def center_data(p, q):
        fr = I_raw[p, q]
        if not fr:
            return None
        fr = ctx.subs_z(fr, subs) if any(v is not None for v in subs) else fr
        if not fr:
            return None
        targets = {}
        for j in vanishing:
            v, fr = _valuation_and_limit(ctx, fr, j)
            targets[j] = v
        bp = inst.basis[p]
        bq = inst.dual_basis[q]
        true_val = rcin_center_value(
            cay, ctx, T, z0,
            a=bp.q_doubleprime, b=tuple(-x for x in bp.q_prime),
            a2=bq.q_doubleprime, b2=tuple(-x for x in bq.q_prime),
            targets=targets, shell=shell)
        return fr, true_val, targets

    chosen = None
    for p in range(inst.size):
        for q in range(inst.size):
            data = center_data(p, q)
            if data and data[0] and data[1]:
                chosen = (p, q, data)
                break
        if chosen:
            break
    if chosen is None:
        raise NormalizationError("all entries vanish at every admissible center")
    p0, q0, (raw_val, true_val, targets) = chosen
    C = true_val / raw_val
    I_ch = I_raw.scale(C)
    if cross_check:
        for (p, q) in itertools.product(range(inst.size), repeat=2):
            if (p, q) == (p0, q0):
                continue
            data = center_data(p, q)
            if data is None:
                continue
            raw2, true2, _ = data
            if raw2 * C != true2:
                raise InconsistencyError(
                    f"normalization cross-check failed at entry ({p + 1},{q + 1})")
            break
    return IntersectionResult(
        I_raw=I_raw, C=C, I_ch=I_ch, two_pi_i_power=cay.n,
        normalization_point={
            "z0": [str(x) for x in z0],
            "entry": [p0 + 1, q0 + 1],
            "laurent_targets": {str(j + 1): t for j, t in targets.items()},
        },
    )
