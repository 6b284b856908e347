"""Truncated Gamma-series solutions attached to simplices, operator action on
truncated series, and the series side of the quadratic relation for cohomology
intersection numbers (numeric, configurable precision)."""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import mpmath as mp

from .errors import MalformedInputError, NonConvergenceError, ParameterError
from .intlinalg import rational_matrix_inverse


@dataclass(frozen=True)
class ParameterPoint:
    """Exponent parameters: gamma per polynomial group, c per torus variable."""

    gamma: tuple
    c: tuple

    @classmethod
    def make(cls, gamma, c):
        return cls(tuple(Fraction(g) for g in gamma), tuple(Fraction(x) for x in c))

    @property
    def delta(self):
        return self.gamma + self.c

    def beta(self):
        return tuple(-x for x in self.delta)

    def shifted(self, v):
        d = [x + y for x, y in zip(self.delta, v)]
        return ParameterPoint(tuple(d[:len(self.gamma)]), tuple(d[len(self.gamma):]))

    def negated(self):
        return ParameterPoint(tuple(-g for g in self.gamma), tuple(-x for x in self.c))

    def is_very_generic(self, cay, sigma, K):
        """All entries of the simplex-frame shifts non-integral up to order K."""
        sig, sbar, inv = _simplex_data(cay, sigma)
        d = cay.d
        dvec = [Fraction(x) for x in self.delta]
        base = [sum(inv[t][r] * dvec[r] for r in range(d)) for t in range(d)]
        mu = [[sum(inv[t][r] * cay.matrix[r, j] for r in range(d)) for t in range(d)]
              for j in sbar]
        for shell in range(K + 1):
            for m in _compositions(shell, len(sbar)):
                for t in range(d):
                    v = base[t] + sum(mu[p][t] * m[p] for p in range(len(sbar)))
                    if v.denominator == 1:
                        return False
        return True


def _simplex_data(cay, sigma):
    sig = tuple(sorted(sigma))
    sbar = tuple(j for j in range(cay.N) if j not in sig)
    Asig = [[cay.matrix[i, j] for j in sig] for i in range(cay.d)]
    inv = rational_matrix_inverse(Asig)
    return sig, sbar, inv


def _check_unimodular_offsets(vals, what):
    out = []
    for v in vals:
        if v.denominator != 1:
            raise MalformedInputError(f"{what}: simplex is not unimodular")
        out.append(int(v))
    return out


@dataclass
class TruncatedSeries:
    """Finite sum  sum_m coeff(m) * z^(base + offset(m))  truncated at |m| <= K.

    `base` is a vector of exact rationals (zero off the simplex); offsets are
    integer vectors.  Coefficients are mpmath complex numbers at the working
    precision used to build the series.
    """

    nvar: int
    base: tuple                  # Fractions, length nvar
    terms: dict                  # offset tuple -> mpc
    K: int
    sigma: tuple = None
    last_shell_mag: float = 0.0
    valid_order: int = field(default=None)

    def eval(self, z):
        """Value at a numeric point (principal branch for fractional powers)."""
        zc = [mp.mpmathify(x) for x in z]
        base_pow = mp.mpf(1)
        for j, e in enumerate(self.base):
            if e:
                base_pow = base_pow * mp.power(zc[j], mp.mpf(e.numerator) / e.denominator)
        tot = mp.mpc(0)
        for off, c in self.terms.items():
            t = c
            for j, e in enumerate(off):
                if e:
                    t = t * zc[j] ** e
            tot += t
        return base_pow * tot

    def norm(self, z):
        return abs(self.eval(z))

    def shell_of(self, off):
        """Total order of a term: sum of offsets over the complement variables."""
        if self.sigma is None:
            return sum(x for x in off if x > 0)
        return sum(off[j] for j in range(self.nvar) if j not in self.sigma)

    def tail_ratio(self, z):
        """|last shell evaluated at z| / |series at z|: truncation-error proxy."""
        zc = [mp.mpmathify(x) for x in z]
        tail = mp.mpf(0)
        for off, c in self.terms.items():
            if self.shell_of(off) == self.K:
                t = abs(c)
                for j, e in enumerate(off):
                    if e:
                        t = t * abs(zc[j]) ** e
                tail += t
        tot = abs(self.eval(z))
        if tot == 0:
            return float(tail)
        return float(tail / tot)


def _gamma_reciprocal_exact_pole_check(args):
    """Reject exact nonpositive-integer arguments (parameter not very generic)."""
    for a in args:
        if a.denominator == 1 and a <= 0:
            return True
    return False


def phi_sigma(cay, delta, sigma, K, z=None, prec=50, with_prefactor=True):
    """Truncated canonical series solution attached to a unimodular simplex.

    Returns (value_at_z, TruncatedSeries) when z is given, else the series.
    The last-shell magnitude is recorded as a truncation-error proxy.
    """
    if not isinstance(delta, ParameterPoint):
        delta = ParameterPoint.make(*delta)
    sig, sbar, inv = _simplex_data(cay, sigma)
    d, N = cay.d, cay.N
    dvec = [Fraction(x) for x in delta.delta]
    base_sig = [-sum(inv[t][r] * dvec[r] for r in range(d)) for t in range(d)]
    mu_cols = []
    for j in sbar:
        col = [sum(inv[t][r] * cay.matrix[r, j] for r in range(d)) for t in range(d)]
        mu_cols.append(_check_unimodular_offsets(col, "phi_sigma"))
    base = [Fraction(0)] * N
    if with_prefactor:
        for t, j in enumerate(sig):
            base[j] = base_sig[t]
    terms = {}
    last_shell = mp.mpf(0)
    with mp.workdps(prec):
        nb = len(sbar)
        for shell in range(K + 1):
            for m in _compositions(shell, nb):
                gargs = []
                for t in range(d):
                    a = Fraction(1) - (-base_sig[t]) - sum(mu_cols[p][t] * m[p]
                                                           for p in range(nb))
                    gargs.append(a)
                if _gamma_reciprocal_exact_pole_check(gargs):
                    raise ParameterError(
                        "parameter vector is not very generic at this truncation "
                        f"(integer entry in simplex frame at m={m})")
                coef = mp.mpf(1)
                for a in gargs:
                    coef *= mp.rgamma(mp.mpf(a.numerator) / a.denominator)
                for x in m:
                    coef /= factorial(x)
                off = [0] * N
                for p, j in enumerate(sbar):
                    off[j] = m[p]
                for t, j in enumerate(sig):
                    off[j] = -sum(mu_cols[p][t] * m[p] for p in range(nb))
                terms[tuple(off)] = mp.mpc(coef)
                if shell == K:
                    last_shell += abs(coef)
        series = TruncatedSeries(N, tuple(base), terms, K, sig,
                                 float(last_shell), valid_order=K)
        if z is None:
            return series
        return series.eval(z), series


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def psi_sigma(cay, delta, sigma, K, z=None, prec=50):
    """Series without the fractional-power prefactor on the simplex variables."""
    out = phi_sigma(cay, delta, sigma, K, z=None, prec=prec, with_prefactor=False)
    if z is None:
        return out
    return out.eval(z), out


def apply_operator_to_series(P, beta_values, s):
    """Apply an operator (parameters substituted to rationals, coefficients
    polynomial in z) to a truncated series, term by term.

    The output truncation order drops by the z-degree of the operator.
    """
    ctx = P.ctx
    op = P.subs_params(beta_values)
    nvar = s.nvar
    out = {}
    zdeg = 0
    for e, c in op.terms.items():
        if c.denom != ctx.ring.one and not c.denom.is_ground:
            raise MalformedInputError("operator must be polynomial in z")
        zdeg = max(zdeg, max((sum(m[ctx.npar:]) for m, _ in c.numer.terms()),
                             default=0))
    for e, c in op.terms.items():
        den = Fraction(c.denom.LC.numerator, c.denom.LC.denominator) \
            if c.denom.is_ground else Fraction(1)
        for mon, cc in c.numer.terms():
            if any(mon[:ctx.npar]):
                raise MalformedInputError("operator still contains parameters")
            zmon = mon[ctx.npar:]
            coeff_q = Fraction(cc.numerator, cc.denominator) / den
            for off, w in s.terms.items():
                # d^e acting on z^(base+off): falling factorials, exact
                fall = Fraction(1)
                expo = [s.base[j] + off[j] for j in range(nvar)]
                ok = True
                for j in range(nvar):
                    for t in range(e[j]):
                        fall *= (expo[j] - t)
                    if fall == 0:
                        ok = False
                        break
                newoff = tuple(off[j] - e[j] + zmon[j] for j in range(nvar))
                if not ok:
                    continue
                val = w * mp.mpf(coeff_q.numerator) / coeff_q.denominator if coeff_q != 1 else w
                val = val * mp.mpf(fall.numerator) / fall.denominator if fall != 1 else val
                prev = out.get(newoff)
                out[newoff] = val if prev is None else prev + val
    out = {k: v for k, v in out.items() if v != 0}
    vo = (s.valid_order if s.valid_order is not None else s.K) - zdeg
    return TruncatedSeries(nvar, s.base, out, s.K, s.sigma, s.last_shell_mag,
                           valid_order=vo)


def _poch_int(v, w):
    """Pochhammer (v)_w for Fraction v and integer w, exact."""
    out = Fraction(1)
    if w >= 0:
        for j in range(w):
            out *= (v + j)
    else:
        for j in range(1, -w + 1):
            den = v - j
            if den == 0:
                raise ParameterError("Pochhammer pole (parameter not generic)")
            out /= den
    return out


def rcin_rhs(cay, delta, T, a, b, a2, b2, K, z, prec=50, tail_tol=1e-8):
    """Series value of the normalized pairing
    <x^a h^b dx/x, x^a' h^b' dx/x>_ch / (2 pi i)^n at a numeric point z.

    Fails with NonConvergenceError when the truncation-tail proxy of any
    simplex series exceeds tail_tol, and with ParameterError on resonance.
    """
    if not isinstance(delta, ParameterPoint):
        delta = ParameterPoint.make(*delta)
    k, n = cay.k, cay.n
    simplex_sets = T.simplex_sets() if hasattr(T, "simplex_sets") else \
        [tuple(sorted(s)) for s in T]
    v1 = tuple(-x for x in b) + tuple(a)
    v2 = tuple(-x for x in b2) + tuple(a2)
    d1 = delta.shifted(v1)
    d2 = delta.negated().shifted(v2)
    with mp.workdps(prec):
        pref = mp.mpf(-1) ** (abs(sum(b) + sum(b2)) % 2)
        for l in range(k):
            g = delta.gamma[l]
            if g.denominator == 1:
                raise ParameterError("integer gamma exponent (resonant)")
            pref *= mp.mpf(g.numerator) / g.denominator
        for l in range(k):
            p1 = _poch_int(delta.gamma[l] - b[l], b[l])
            p2 = _poch_int(-delta.gamma[l] - b2[l], b2[l])
            pref *= mp.mpf((p1 * p2).numerator) / (p1 * p2).denominator
        total = mp.mpc(0)
        dvec = [Fraction(x) for x in delta.delta]
        for sigma in simplex_sets:
            sig, sbar, inv = _simplex_data(cay, sigma)
            L = [sum(inv[t][r] * dvec[r] for r in range(cay.d)) for t in range(cay.d)]
            sinprod = mp.mpf(1)
            for x in L:
                if x.denominator == 1:
                    raise ParameterError("resonant parameter: integer simplex exponent")
                sinprod *= mp.sinpi(mp.mpf(x.numerator) / x.denominator)
            if sinprod == 0:
                raise ParameterError("vanishing sine factor (resonant parameter)")
            va, s1 = phi_sigma(cay, d1, sig, K, z=z, prec=prec)
            vb, s2 = phi_sigma(cay, d2, sig, K, z=z, prec=prec)
            for s in (s1, s2):
                ratio = s.tail_ratio(z)
                if ratio > tail_tol:
                    raise NonConvergenceError(
                        f"series tail proxy {ratio:.2e} above {tail_tol:.0e} for "
                        f"simplex {tuple(x + 1 for x in sig)}; point too far from "
                        "the degeneration center")
            total += mp.pi ** (n + k) / sinprod * va * vb
        return pref * total
