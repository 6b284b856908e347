"""Regular triangulations T(omega) of a configuration, their secondary-fan
cones, and exact feasibility certificates.

A candidate simplex is any column subset of full size with nonzero determinant;
membership in T(omega) is decided by the defining linear system for the lifting
normal (exact rational arithmetic, strict inequalities)."""

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateWeightError, MalformedInputError, ResourceLimitError
from .intlinalg import int_det, rational_matrix_inverse


@dataclass(frozen=True)
class WeightVector:
    omega: tuple  # rational entries, length N

    @classmethod
    def make(cls, values):
        return cls(tuple(Fraction(v) for v in values))


@dataclass(frozen=True)
class Simplex:
    columns: tuple          # 0-based sorted column indices, length d
    det: int
    inverse: tuple          # rows of A_sigma^{-1} as Fraction tuples

    @property
    def columns_1based(self):
        return tuple(j + 1 for j in self.columns)


@dataclass(frozen=True)
class Triangulation:
    simplices: tuple        # Simplex objects, sorted by column tuple

    def simplex_sets(self):
        return tuple(s.columns for s in self.simplices)

    def simplex_sets_1based(self):
        return tuple(s.columns_1based for s in self.simplices)

    def normalized_volume(self):
        return sum(abs(s.det) for s in self.simplices)

    def find(self, columns):
        columns = tuple(sorted(columns))
        for s in self.simplices:
            if s.columns == columns:
                return s
        return None


def _candidate_simplices(cay):
    out = []
    for sub in itertools.combinations(range(cay.N), cay.d):
        M = [[cay.matrix[i, j] for j in sub] for i in range(cay.d)]
        det = int_det(M)
        if det:
            inv = tuple(tuple(r) for r in rational_matrix_inverse(M))
            out.append(Simplex(tuple(sub), det, inv))
    return out


def _lift_normal(simplex, omega):
    """The unique row vector n with n . a(i) = omega_i on the simplex columns."""
    om = [omega[j] for j in simplex.columns]
    # n = om * A_sigma^{-1}
    d = len(om)
    return tuple(sum(om[t] * simplex.inverse[t][r] for t in range(d)) for r in range(d))


def regular_triangulation(cay, omega):
    """T(omega) with exact per-simplex certificates; rejects non-generic omega.

    Membership follows the definition (strict inequalities off the simplex);
    genericity is certified afterwards by exact wall matching: every facet cone
    of a member simplex either lies on the boundary of the configuration cone
    or is shared by exactly one other member.
    """
    if isinstance(omega, WeightVector):
        om = omega.omega
    else:
        om = tuple(Fraction(v) for v in omega)
    if len(om) != cay.N:
        raise MalformedInputError("weight vector has wrong length")
    cols = cay.columns()
    found = []
    for s in _candidate_simplices(cay):
        n = _lift_normal(s, om)
        ok = True
        for j in range(cay.N):
            if j in s.columns:
                continue
            val = sum(n[t] * cols[j][t] for t in range(cay.d))
            if val >= om[j]:
                ok = False
                break
        if ok:
            found.append(s)
    found.sort(key=lambda s: s.columns)
    if not found or not _fan_certificate(cay, found):
        raise DegenerateWeightError(
            "weight vector is non-generic (induced cells are not a simplicial fan)")
    return Triangulation(tuple(found))


def _cone_membership_coeffs(simplex, wall_local_index, vec):
    """Coefficients of vec over the wall generators and the off-wall generator.

    Returns (coeffs_on_wall, coeff_off_wall) where vec = sum c_t a(sigma_t)."""
    d = len(simplex.columns)
    coeffs = [sum(simplex.inverse[t][r] * vec[r] for r in range(d)) for t in range(d)]
    off = coeffs[wall_local_index]
    on = [coeffs[t] for t in range(d) if t != wall_local_index]
    return on, off


def _fan_certificate(cay, simplices):
    """Exact check that the simplicial cones meet face-to-face and only leave
    boundary walls of cone(A) unmatched."""
    cols = cay.columns()
    walls = []
    for si, s in enumerate(simplices):
        for drop in range(cay.d):
            walls.append((si, drop))

    def wall_equal(s1, d1, s2, d2):
        w1 = [c for t, c in enumerate(simplices[s1].columns) if t != d1]
        w2 = [c for t, c in enumerate(simplices[s2].columns) if t != d2]
        # same cone: every generator of one is a nonnegative wall-combination
        # of the other (and lies in its span)
        for a, b, bd in ((w1, s2, d2), (w2, s1, d1)):
            for c in a:
                on, off = _cone_membership_coeffs(simplices[b], bd, cols[c])
                if off != 0 or any(x < 0 for x in on):
                    return False
        return True

    for si, s in enumerate(simplices):
        for drop in range(cay.d):
            # boundary wall: all configuration columns weakly on one side of
            # the wall hyperplane within cone(A)
            matches = 0
            for sj, s2 in enumerate(simplices):
                if sj == si:
                    continue
                for drop2 in range(cay.d):
                    if wall_equal(si, drop, sj, drop2):
                        matches += 1
            if matches == 1:
                continue
            if matches > 1:
                return False
            # unmatched: must lie on the boundary of cone(A): all columns have
            # off-wall coefficient of one sign in the simplex frame
            signs = set()
            for j in range(cay.N):
                on, off = _cone_membership_coeffs(s, drop, cols[j])
                if off > 0:
                    signs.add(1)
                elif off < 0:
                    signs.add(-1)
            if len(signs) == 2:
                return False
    return True


def is_unimodular(T):
    return all(abs(s.det) == 1 for s in T.simplices)


def in_cone_CT(cay, omega, T):
    """True iff T(omega) equals T (recompute and compare)."""
    try:
        return regular_triangulation(cay, omega).simplex_sets() == T.simplex_sets()
    except DegenerateWeightError:
        return False


def triangulation_from_sets(cay, simplex_sets, one_based=True):
    """Triangulation object from explicit column subsets (with cached data)."""
    cand = {s.columns: s for s in _candidate_simplices(cay)}
    out = []
    for cols in simplex_sets:
        key = tuple(sorted((c - 1 if one_based else c) for c in cols))
        if key not in cand:
            raise MalformedInputError(f"{cols} is not a full-rank simplex")
        out.append(cand[key])
    out.sort(key=lambda s: s.columns)
    return Triangulation(tuple(out))


# ---------------------------------------------------------------------------
# weight search: exact Fourier-Motzkin feasibility for C_T
# ---------------------------------------------------------------------------

def _fm_feasible_point(ineqs, nvars):
    """A rational point with L . x > 0 for every row L, or None.

    Fourier-Motzkin elimination on strict homogeneous inequalities; the system
    sizes here are tiny (N <= 8, a few dozen rows)."""
    ineqs = [tuple(Fraction(c) for c in row) for row in ineqs]
    stages = []
    cur = ineqs
    for v in range(nvars - 1, 0, -1):
        stages.append(cur)
        pos, neg, rest = [], [], []
        for row in cur:
            if row[v] > 0:
                pos.append(row)
            elif row[v] < 0:
                neg.append(row)
            else:
                rest.append(row)
        new = [r[:v] for r in rest]
        for p in pos:
            for q in neg:
                comb = tuple(p[j] * (-q[v]) + q[j] * p[v] for j in range(v))
                new.append(comb)
        # drop trivial rows; an all-zero row means 0 > 0: infeasible
        filtered = []
        for r in new:
            if any(r):
                filtered.append(r)
            else:
                return None
        cur = filtered
    # single variable: rows c*x1 > 0
    sign = 0
    for (c,) in cur:
        s = 1 if c > 0 else -1
        if sign == 0:
            sign = s
        elif sign != s:
            return None
    x = [Fraction(0)] * nvars
    x[0] = Fraction(sign if sign else 1)
    for v in range(1, nvars):
        stage = stages[nvars - 1 - v]
        lo, hi = None, None
        for row in stage:
            if row[v] == 0:
                continue
            rhs = -sum(row[j] * x[j] for j in range(v)) / row[v]
            if row[v] > 0:
                lo = rhs if lo is None or rhs > lo else lo
            else:
                hi = rhs if hi is None or rhs < hi else hi
        if lo is None and hi is None:
            x[v] = Fraction(0)
        elif lo is None:
            x[v] = hi - 1
        elif hi is None:
            x[v] = lo + 1
        else:
            if lo >= hi:
                return None
            x[v] = (lo + hi) / 2
    return tuple(x)


def find_weight(cay, T):
    """A rational weight vector with T(omega) = T, via the exact feasibility
    system omega_j - (omega_sigma A_sigma^{-1}) . a(j) > 0; raises if T is not
    a regular triangulation of the configuration."""
    if not isinstance(T, Triangulation):
        T = triangulation_from_sets(cay, T)
    cols = cay.columns()
    ineqs = []
    for s in T.simplices:
        # row coefficients of omega in omega_j - n(omega) . a(j)
        for j in range(cay.N):
            if j in s.columns:
                continue
            row = [Fraction(0)] * cay.N
            row[j] = Fraction(1)
            # n = omega_sigma A_sigma^{-1}; n . a(j) = sum_t omega_{sigma_t} (A^{-1} a(j))_t
            aj = cols[j]
            coeffs = [sum(s.inverse[t][r] * aj[r] for r in range(cay.d))
                      for t in range(cay.d)]
            for t, col in enumerate(s.columns):
                row[col] -= coeffs[t]
            ineqs.append(row)
    point = _fm_feasible_point(ineqs, cay.N)
    if point is None:
        raise ResourceLimitError("no weight vector: T is not a regular triangulation")
    om = WeightVector.make(point)
    got = regular_triangulation(cay, om)
    if got.simplex_sets() != T.simplex_sets():
        raise ResourceLimitError(
            "feasibility point does not reproduce T (covering mismatch)")
    return om


def search_triangulations(cay, trials=200, seed=0, magnitude=40):
    """Distinct regular triangulations found by seeded random integer weights."""
    rng = random.Random(seed)
    seen = {}
    for _ in range(trials):
        om = tuple(Fraction(rng.randint(-magnitude, magnitude)) for _ in range(cay.N))
        try:
            T = regular_triangulation(cay, om)
        except DegenerateWeightError:
            continue
        key = T.simplex_sets()
        if key not in seen:
            seen[key] = (T, WeightVector.make(om))
    return list(seen.values())
