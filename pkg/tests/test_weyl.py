"""Weyl algebra arithmetic: normal ordering, defining relations, generators."""

import pytest
from hypothesis import given, settings, strategies as st

from gkzint.cayley import gauss_2f1, hyp3f2
from gkzint.context import SymbolContext
from gkzint.errors import MalformedInputError
from gkzint.weyl import (EulerVector, WeylOperator, box_operator,
                         euler_operators, operator_to_string, parse_operator,
                         theta_operator, weyl_mul)


@pytest.fixture(scope="module")
def ctx():
    return SymbolContext(3, 4)


def test_defining_relation(ctx):
    d1 = WeylOperator.partial(ctx, 0)
    z1 = WeylOperator.scalar(ctx, ctx.to_frac(ctx.z[0]))
    prod = weyl_mul(d1, z1)
    assert prod == parse_operator(ctx, "z1*dz1 + 1")


def test_distinct_indices_commute(ctx):
    d1 = WeylOperator.partial(ctx, 0)
    z2 = WeylOperator.scalar(ctx, ctx.to_frac(ctx.z[1]))
    assert weyl_mul(d1, z2) == parse_operator(ctx, "z2*dz1")


def test_theta_product_expansion(ctx):
    # (theta3+theta4)(theta2+theta4) against a term-by-term oracle: the four
    # products normally ordered by hand
    t2, t3, t4 = (theta_operator(ctx, j) for j in (1, 2, 3))
    lhs = weyl_mul(t3 + t4, t2 + t4)
    oracle = (parse_operator(ctx, "z2*z3*dz2*dz3")      # theta3 theta2
              + parse_operator(ctx, "z3*z4*dz3*dz4")    # theta3 theta4
              + parse_operator(ctx, "z2*z4*dz2*dz4")    # theta4 theta2
              + parse_operator(ctx, "z4^2*dz4^2+z4*dz4"))  # theta4^2
    assert lhs == oracle


def test_commutators(ctx):
    for i in range(4):
        di = WeylOperator.partial(ctx, i)
        for j in range(4):
            zj = WeylOperator.scalar(ctx, ctx.to_frac(ctx.z[j]))
            comm = weyl_mul(di, zj) - weyl_mul(zj, di)
            expect = WeylOperator.one(ctx) if i == j else WeylOperator.zero(ctx)
            assert comm == expect


def test_euler_operators_rank2():
    cay = gauss_2f1()
    ctx = SymbolContext(cay.d, cay.N)
    ops = euler_operators(cay, ctx)
    assert ops[0] == parse_operator(ctx, "z1*dz1 + z2*dz2 - b1")
    assert EulerVector.from_cayley(cay).coefficients[0] == (1, 1, 0, 0)


def test_euler_operators_rank3_row4():
    cay = hyp3f2()
    ctx = SymbolContext(cay.d, cay.N)
    ops = euler_operators(cay, ctx)
    assert ops[3] == parse_operator(ctx, "z1*dz1 + z4*dz4 - b4")


def test_euler_operators_commute():
    for cay in (gauss_2f1(), hyp3f2()):
        ctx = SymbolContext(cay.d, cay.N)
        ops = euler_operators(cay, ctx)
        for i in range(len(ops)):
            for j in range(i):
                assert weyl_mul(ops[i], ops[j]) == weyl_mul(ops[j], ops[i])


def test_box_operator_examples(ctx):
    assert box_operator(ctx, (1, -1, -1, 1)) == parse_operator(ctx, "dz1*dz4 - dz2*dz3")
    # orientation: -u gives the same generator
    assert box_operator(ctx, (-1, 1, 1, -1)) == box_operator(ctx, (1, -1, -1, 1))
    ctx2 = SymbolContext(1, 2)
    assert box_operator(ctx2, (1, -1)) == parse_operator(ctx2, "dz1 - dz2")
    ctx3 = SymbolContext(1, 3)
    assert box_operator(ctx3, (2, -1, -1)) == parse_operator(ctx3, "dz1^2 - dz2*dz3")


def test_box_zero_rejected(ctx):
    with pytest.raises(MalformedInputError):
        box_operator(ctx, (0, 0, 0, 0))


def _rand_op(ctx, data):
    nterms = data.draw(st.integers(0, 3))
    op = WeylOperator.zero(ctx)
    for _ in range(nterms):
        e = tuple(data.draw(st.integers(0, 2)) for _ in range(ctx.nvar))
        mon = tuple(data.draw(st.integers(0, 2)) for _ in range(ctx.npar + ctx.nvar))
        c = data.draw(st.integers(-4, 4))
        if c:
            coeff = ctx.to_frac(ctx.ring.from_dict({mon: c}))
            op = op + WeylOperator.monomial(ctx, coeff, e)
    return op


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_associativity(data):
    ctx = SymbolContext(1, 2)
    P, Q, R = (_rand_op(ctx, data) for _ in range(3))
    assert weyl_mul(weyl_mul(P, Q), R) == weyl_mul(P, weyl_mul(Q, R))


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_operator_string_round_trip(data):
    ctx = SymbolContext(1, 2)
    P = _rand_op(ctx, data)
    assert parse_operator(ctx, operator_to_string(P)) == P


def test_operator_grammar_order_sensitive(ctx):
    assert parse_operator(ctx, "dz1*z1") == parse_operator(ctx, "z1*dz1+1")
    with pytest.raises(MalformedInputError):
        parse_operator(ctx, "z1/dz1")
