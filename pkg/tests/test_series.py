"""Truncated series solutions: annihilation, prefactor identity, convergence
behavior, and the series side of the quadratic relation."""

from fractions import Fraction as F

import mpmath as mp
import pytest

from gkzint.cayley import CayleyConfig, gauss_2f1
from gkzint.errors import ParameterError
from gkzint.intlinalg import kernel_lattice
from gkzint.series import (ParameterPoint, TruncatedSeries,
                           apply_operator_to_series, phi_sigma, psi_sigma,
                           rcin_rhs)
from gkzint.triangulation import triangulation_from_sets
from gkzint.weyl import WeylOperator, box_operator, euler_operators, parse_operator

BETA = (F(1, 3), F(2, 7), F(3, 11))
DELTA = ParameterPoint.make((-F(1, 3), -F(2, 7)), (-F(3, 11),))
SIGMA = (0, 1, 2)
ZPT = (1.0, 1.0, 1.0, 0.0625)
ZQ = (F(1), F(1), F(1), F(1, 16))


def test_empty_complement_single_term():
    cay = CayleyConfig.from_matrix([[1, 1], [0, 1]], k=1, n=1)
    delta = ParameterPoint.make((F(1, 3),), (F(1, 7),))
    val, ser = phi_sigma(cay, delta, (0, 1), 8, z=(1.0, 1.0))
    assert len(ser.terms) == 1
    # phi = z^{-A^{-1} delta} / Gamma(1 - A^{-1} delta); at z = 1 the prefactor
    # is 1 and A^{-1} delta = (delta1 - delta2, delta2)
    expect = mp.rgamma(1 - (F(1, 3) - F(1, 7))) * mp.rgamma(1 - F(1, 7))
    assert abs(val - expect) < 1e-12
    vpsi = psi_sigma(cay, delta, (0, 1), 8).eval((1.0, 1.0))
    assert abs(vpsi - expect) < 1e-12


def test_prefactor_identity():
    cay = gauss_2f1()
    val, ser = phi_sigma(cay, DELTA, SIGMA, 10, z=ZPT)
    spsi = psi_sigma(cay, DELTA, SIGMA, 10)
    pref = mp.mpf(1)
    for j, e in enumerate(ser.base):
        if e:
            pref *= mp.power(ZPT[j], mp.mpf(e.numerator) / e.denominator)
    assert abs(val - pref * spsi.eval(ZPT)) / abs(val) < 1e-14


def test_truncation_consistency_higher_K_oracle():
    cay = gauss_2f1()
    v12, s12 = phi_sigma(cay, DELTA, SIGMA, 12, z=ZPT)
    v16, s16 = phi_sigma(cay, DELTA, SIGMA, 16, z=ZPT)
    tail = s12.tail_ratio(ZPT)
    assert abs(v12 - v16) / abs(v16) < 10 * tail + 1e-20


def test_tail_decreases_geometrically():
    cay = gauss_2f1()
    tails = []
    for K in range(8, 17, 2):
        _, ser = phi_sigma(cay, DELTA, SIGMA, K, z=ZPT)
        tails.append(ser.tail_ratio(ZPT))
    for a, b in zip(tails, tails[1:]):
        assert b < a


def test_gkz_annihilation():
    cay = gauss_2f1()
    from gkzint.context import SymbolContext
    ctx = SymbolContext(cay.d, cay.N)
    val, ser = phi_sigma(cay, DELTA, SIGMA, 12, z=ZPT)
    gens = euler_operators(cay, ctx) + \
        [box_operator(ctx, u) for u in kernel_lattice(cay.matrix)]
    for g in gens:
        resid = apply_operator_to_series(g, BETA, ser)
        assert abs(resid.eval(ZPT)) / abs(val) < 1e-10


def test_single_term_derivative():
    s = TruncatedSeries(2, (F(1, 2), F(0)), {(0, 0): mp.mpc(1)}, K=0, sigma=(0,))
    from gkzint.context import SymbolContext
    ctx = SymbolContext(1, 2)
    d1 = WeylOperator.partial(ctx, 0)
    out = apply_operator_to_series(d1, (F(1, 5),), s)
    # d/dz1 z1^(1/2) = (1/2) z1^(-1/2)
    assert out.base == (F(1, 2), F(0))
    assert set(out.terms) == {(-1, 0)}
    assert abs(out.terms[(-1, 0)] - mp.mpf(0.5)) < 1e-15


def test_non_very_generic_rejected():
    cay = gauss_2f1()
    # delta1 - delta3 = 1 puts a pole of the reciprocal Gamma factor into the
    # m = 0 term of the simplex {1,2,3}
    bad = ParameterPoint.make((F(8, 11), F(2, 7)), (-F(3, 11),))
    assert not bad.is_very_generic(cay, SIGMA, 4)
    with pytest.raises(ParameterError):
        phi_sigma(cay, bad, SIGMA, 8, z=ZPT)
    assert DELTA.is_very_generic(cay, SIGMA, 12)


def test_rcin_degenerate_limit_matches_exact(gauss_bundle):
    """At z4 -> 0 the series value approaches the exact constant entries."""
    cay = gauss_bundle["system"].cay
    ctx = gauss_bundle["system"].ctx
    T = gauss_bundle["triangulation"]
    res = gauss_bundle["result"]
    for (p, q) in ((0, 0), (0, 1), (1, 1)):
        fp = gauss_bundle["pfaffian"].basis[p]
        fq = gauss_bundle["pfaffian"].basis[q]
        v = rcin_rhs(cay, DELTA, T,
                     a=fp.q_doubleprime, b=tuple(-x for x in fp.q_prime),
                     a2=fq.q_doubleprime, b2=tuple(-x for x in fq.q_prime),
                     K=14, z=(1.0, 1.0, 1.0, 1e-12), prec=60)
        exact = ctx.eval_rational(res.I_ch[p, q], BETA, (F(1), F(1), F(1), ZQ[3]))
        # the exact entry is constant in z4 here, so the tiny-z4 series value
        # must agree with it
        assert abs(v - mp.mpf(exact.numerator) / exact.denominator) / abs(v) < 1e-10
