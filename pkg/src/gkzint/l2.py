"""Integrals of squared absolute values of polynomial products over C^n:
series evaluation via the paired-series expansion (unimodular regular
triangulation), an independent adaptive quadrature oracle for n = 1, and the
bilinear period expansion for closed-form homology data."""

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
import numpy as np

from .cayley import CayleyConfig
from .errors import (MalformedInputError, NonConvergenceError, ParameterError)
from .intlinalg import rational_matrix_inverse
from .series import ParameterPoint, psi_sigma, _simplex_data
from .triangulation import regular_triangulation, search_triangulations


@dataclass
class L2IntegralSpec:
    """Data of (i/2)^n Int |h_1|^{-2 g_1} ... |h_k|^{-2 g_k} |x|^{2c} dx/x ^ dxbar/xbar.

    `cayley` and `z` carry the polynomial coefficients; outputs use the
    dtau_1 dtau_2 (real-coordinates) normalization."""

    cayley: CayleyConfig
    z: tuple                     # numeric coefficients per configuration column
    gamma: tuple
    c: tuple
    triangulation: object = None
    K: int = 12

    @property
    def delta(self):
        return ParameterPoint.make(self.gamma, self.c)

    def poly_coeffs(self, l):
        """Dense coefficient list (ascending degree) of h_l, n = 1 only."""
        if self.cayley.n != 1:
            raise MalformedInputError("explicit polynomials only for n = 1")
        cols = self.cayley.group_columns(l)
        degs = [self.cayley.exponent_part(j)[0] for j in cols]
        out = [0.0] * (max(degs) + 1)
        for j, dg in zip(cols, degs):
            out[dg] += float(self.z[j])
        return out


def spec_from_polynomials(coeff_lists, gamma, c, K=12):
    """Build a spec from explicit n=1 polynomial coefficient lists (ascending)."""
    supports = []
    zvals = []
    for coeffs in coeff_lists:
        sup = [(dg,) for dg, v in enumerate(coeffs) if v != 0]
        if not sup:
            raise MalformedInputError("zero polynomial in the product")
        supports.append(sup)
        zvals.extend(v for v in coeffs if v != 0)
    cay = CayleyConfig.from_supports(supports)
    return L2IntegralSpec(cay, tuple(zvals), tuple(Fraction(g) for g in gamma),
                          (Fraction(c),) if not isinstance(c, (tuple, list))
                          else tuple(Fraction(x) for x in c), K=K)


def _pick_triangulation(spec):
    if spec.triangulation is not None:
        return spec.triangulation
    # weight from -log|z| lands in the cone whose series converge at z
    om = []
    for v in spec.z:
        av = abs(complex(v))
        if av == 0:
            raise MalformedInputError("zero coefficient column")
        om.append(Fraction(round(-mp.log(av) * 10 ** 6)) / 10 ** 6)
    try:
        T = regular_triangulation(spec.cayley, om)
        return T
    except Exception:
        for T, _ in search_triangulations(spec.cayley, seed=7):
            return T
        raise


def l2_series_value(spec, prec=50, tail_tol=1e-8):
    """Paired-series value (real) of the spec integral at its coefficients."""
    T = _pick_triangulation(spec)
    cay = spec.cayley
    delta = spec.delta
    dvec = [Fraction(x) for x in delta.delta]
    k, n = cay.k, cay.n
    with mp.workdps(prec):
        pref = mp.mpf(1)
        for g in delta.gamma:
            if g.denominator == 1:
                raise ParameterError("integer exponent gamma (resonant)")
            gm = mp.mpf(g.numerator) / g.denominator
            pref *= mp.gamma(1 - gm) ** 2 * mp.sinpi(gm)
        total = mp.mpf(0)
        zc = [mp.mpmathify(complex(v)) for v in spec.z]
        zbar = [mp.conj(v) for v in zc]
        for s in T.simplices:
            sig, sbar, inv = _simplex_data(cay, s.columns)
            L = [sum(Fraction(inv[t][r]) * dvec[r] for r in range(cay.d))
                 for t in range(cay.d)]
            sinprod = mp.mpf(1)
            absfac = mp.mpf(1)
            for t, j in enumerate(sig):
                x = L[t]
                if x.denominator == 1:
                    raise ParameterError("resonant parameter on simplex frame")
                xf = mp.mpf(x.numerator) / x.denominator
                sinprod *= mp.sinpi(xf)
                absfac *= abs(zc[j]) ** (-2 * xf)
            if sinprod == 0:
                raise ParameterError("vanishing sine factor")
            sA = psi_sigma(cay, delta, sig, spec.K, prec=prec)
            ratio = sA.tail_ratio(zc)
            if ratio > tail_tol:
                raise NonConvergenceError(
                    f"series tail {ratio:.2e} above {tail_tol:.0e}: coefficients "
                    "outside the usable convergence region for this triangulation")
            va = sA.eval(zc)
            vb = sA.eval(zbar)
            total += mp.pi ** (2 * n) / sinprod * absfac * va * vb
        out = pref * total
        if abs(mp.im(out)) > mp.mpf(10) ** (-prec // 2) * (1 + abs(out)):
            raise NonConvergenceError("series value unexpectedly non-real")
        return mp.re(out)


# ---------------------------------------------------------------------------
# quadrature oracle (n = 1)
# ---------------------------------------------------------------------------

def _gl_nodes(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _cluster_roots(roots, tol=1e-8):
    out = []
    for r in roots:
        for grp in out:
            if abs(r - grp[0]) < tol * max(1.0, abs(grp[0])):
                grp.append(r)
                break
        else:
            out.append([r])
    return [(np.mean(g), len(g)) for g in out]


@dataclass
class _SingularPoint:
    center: complex
    radial_exponent: float      # local |x - s|^a behavior of the integrand


def _integrand_factory(coeff_lists, gammas, c):
    polys = [np.array(cl, dtype=complex) for cl in coeff_lists]

    def f(x):
        out = np.abs(x) ** (2 * c - 2)
        for cl, g in zip(polys, gammas):
            vals = np.polynomial.polynomial.polyval(x, cl)
            out = out * np.abs(vals) ** (-2 * g)
        return out

    return f


def quadrature_oracle(spec, rel_tol=1e-4, theta_panels=192, radial_nodes=24,
                      max_refine=4):
    """Adaptive 2D quadrature of the n=1 spec integrand over the plane.

    Decomposition: nearest-singular-point cells in polar coordinates with a
    radial substitution that absorbs each local power singularity, plus an
    inversion map for the neighborhood of infinity.  Returns (value, error
    estimate); raises on non-integrable exponents.
    """
    if spec.cayley.n != 1:
        raise MalformedInputError("quadrature oracle is restricted to n = 1")
    gammas = [float(g) for g in spec.gamma]
    c = float(spec.c[0])
    coeff_lists = [spec.poly_coeffs(l) for l in range(spec.cayley.k)]
    f = _integrand_factory(coeff_lists, gammas, c)

    # singular points and local exponents
    sing = {0.0 + 0.0j: 2 * c - 2}
    for cl, g in zip(coeff_lists, gammas):
        arr = np.array(cl, dtype=complex)
        if len(arr) > 1:
            roots = np.roots(arr[::-1])
            for r, mult in _cluster_roots(roots):
                key = complex(r)
                merged = None
                for s in list(sing):
                    if abs(s - key) < 1e-8 * max(1.0, abs(s)):
                        merged = s
                        break
                if merged is None:
                    sing[key] = sing.get(key, 0.0) - 2 * g * mult
                else:
                    sing[merged] -= 2 * g * mult
    pts = [_SingularPoint(s, a) for s, a in sing.items()]
    for p in pts:
        if p.radial_exponent <= -2:
            raise MalformedInputError(
                f"non-integrable local exponent {p.radial_exponent:.3f} at "
                f"{p.center:.4g}")
    a_inf = 2 * c - 2 - 2 * sum(g * (len(cl) - 1) for g, cl in zip(gammas, coeff_lists))
    if a_inf >= -2:
        raise MalformedInputError(
            f"non-integrable decay at infinity (exponent {a_inf:.3f})")

    R = 2.0 * max([1.0] + [abs(p.center) for p in pts]) + 2.0

    def region_value(center, a_loc, rho_max_fn, panels):
        thetas = np.linspace(0.0, 2 * np.pi, panels + 1)
        xs, ws = _gl_nodes(radial_nodes)
        total = 0.0
        ap2 = a_loc + 2.0
        for t0, t1 in zip(thetas[:-1], thetas[1:]):
            tm, th = 0.5 * (t0 + t1), 0.5 * (t1 - t0)
            tnodes = tm + th * xs
            for tt, tw in zip(tnodes, ws):
                rmax = rho_max_fn(tt)
                if rmax <= 0:
                    continue
                U = rmax ** ap2 / ap2
                unodes = 0.5 * U * (xs + 1.0)
                uw = 0.5 * U * ws
                rho = (ap2 * unodes) ** (1.0 / ap2)
                x = center + rho * np.exp(1j * tt)
                g = f(x) * rho ** (-a_loc)
                total += tw * th * float(np.sum(g * uw))
        return total

    def make_rho_max(center, others):
        oc = [(o, abs(o - center)) for o in others if abs(o - center) > 1e-12]

        def rho_max(theta):
            u = np.exp(1j * theta)
            r = _circle_exit(center, u, R)
            for o, dist in oc:
                d = o - center
                denom = (u.real * d.real + u.imag * d.imag)
                if denom > 1e-14:
                    r = min(r, (dist * dist / 2.0) / denom)
            return r

        return rho_max

    def _circle_exit(center, u, radius):
        # largest rho with |center + rho u| = radius
        b = center.real * u.real + center.imag * u.imag
        disc = b * b - (abs(center) ** 2 - radius ** 2)
        return -b + np.sqrt(max(disc, 0.0))

    centers = [p.center for p in pts]

    def total_with(panels):
        tot = 0.0
        for p in pts:
            rho_max_fn = make_rho_max(p.center, [c2 for c2 in centers if c2 != p.center])
            tot += region_value(p.center, p.radial_exponent, rho_max_fn, panels)
        # exterior via inversion y = 1/x
        def fext(y):
            out = np.empty_like(y, dtype=float)
            mask = np.abs(y) > 0
            out[~mask] = 0.0
            ym = y[mask]
            out[mask] = f(1.0 / ym) * np.abs(ym) ** -4.0
            return out

        a_ext = -a_inf - 4.0
        xs, ws = _gl_nodes(radial_nodes)
        thetas = np.linspace(0.0, 2 * np.pi, panels + 1)
        ap2 = a_ext + 2.0
        rmax = 1.0 / R
        ext = 0.0
        for t0, t1 in zip(thetas[:-1], thetas[1:]):
            tm, th = 0.5 * (t0 + t1), 0.5 * (t1 - t0)
            for tt, tw in zip(tm + th * xs, ws):
                U = rmax ** ap2 / ap2
                unodes = 0.5 * U * (xs + 1.0)
                uw = 0.5 * U * ws
                rho = (ap2 * unodes) ** (1.0 / ap2)
                y = rho * np.exp(1j * tt)
                gv = fext(y) * rho ** (-a_ext)
                ext += tw * th * float(np.sum(gv * uw))
        return tot + ext

    panels = theta_panels
    prev = cur = total_with(panels)
    err = float("inf")
    for _ in range(max_refine):
        panels *= 2
        cur = total_with(panels)
        err = abs(cur - prev) / max(abs(cur), 1e-300)
        if err < rel_tol:
            return cur, err
        prev = cur
    return cur, err


# ---------------------------------------------------------------------------
# bilinear period expansion
# ---------------------------------------------------------------------------

def tpr_expansion(periods, homology_intersections, dual_periods=None, prec=50):
    """Bilinear expansion sum_ij P_i (I_h^{-1})[j][i] conj(P'_j); the wedge
    normalization is converted to the dtau_1 dtau_2 measure by the caller."""
    with mp.workdps(prec):
        r = len(periods)
        M = mp.matrix(r, r)
        for i in range(r):
            for j in range(r):
                M[i, j] = mp.mpmathify(homology_intersections[i][j])
        try:
            Minv = M ** -1
        except ZeroDivisionError:
            raise ParameterError("singular homology intersection matrix")
        dp = periods if dual_periods is None else dual_periods
        tot = mp.mpc(0)
        for i in range(r):
            for j in range(r):
                tot += mp.mpmathify(periods[i]) * Minv[j, i] * \
                    mp.conj(mp.mpmathify(dp[j]))
        return tot


def beta_family_tpr(alpha, beta, prec=50):
    """Squared-modulus Euler beta integral via the period expansion, in the
    dtau_1 dtau_2 normalization (real value)."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    for x in (alpha, beta, alpha + beta):
        if x.denominator == 1:
            raise ParameterError("integer exponent degenerates the local system")
    with mp.workdps(prec):
        af = mp.mpf(alpha.numerator) / alpha.denominator
        bf = mp.mpf(beta.numerator) / beta.denominator
        period = mp.beta(af, bf)

        def e(x):
            return mp.expj(2 * mp.pi * x)

        ih = (1 - e(af + bf)) / ((1 - e(af)) * (1 - e(bf)))
        val = tpr_expansion([period], [[ih]], prec=prec)
        out = val / (-2j)
        if abs(mp.im(out)) > mp.mpf(10) ** (-prec // 2) * (1 + abs(out)):
            raise ParameterError("expansion failed to produce a real value")
        return mp.re(out)
