"""Direction b-functions, contiguity operators, class decompositions, and the
composite operators with their scalar prefactors."""

import pytest

from gkzint.cayley import CayleyConfig, gauss_2f1, hyp3f2
from gkzint.context import SymbolContext
from gkzint.contiguity import (assemble_F, cone_facets, decompose_form_index,
                               decomposition_candidates, direction_contiguity)
from gkzint.groebner import gkz_groebner, normal_form
from gkzint.strings import parse_ratfun
from gkzint.weyl import WeylOperator, parse_operator, weyl_mul


def test_cone_facets_rank2(gauss_system):
    facets = cone_facets(gauss_system.cay)
    assert set(facets) == {(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)}


def test_direction4_fixture(gauss_system):
    ctx = gauss_system.ctx
    cont = gauss_system.contiguity(3)
    assert ctx.to_frac(cont.b_poly) == parse_ratfun(ctx, "b2*b3")
    assert cont.c_op == parse_operator(
        ctx, "z2*z3*dz1+(z2*dz2+z3*dz3+z4*dz4)*z4")
    # certificate
    test = weyl_mul(cont.c_op, WeylOperator.partial(ctx, 3)) - \
        WeylOperator.scalar(ctx, ctx.to_frac(cont.b_poly))
    assert not normal_form(test, gauss_system.gb)


def test_direction1_certified(gauss_system):
    ctx = gauss_system.ctx
    cont = gauss_system.contiguity(0)
    assert ctx.to_frac(cont.b_poly) == parse_ratfun(ctx, "b1*(b1+b2-b3)")
    test = weyl_mul(cont.c_op, WeylOperator.partial(ctx, 0)) - \
        WeylOperator.scalar(ctx, ctx.to_frac(cont.b_poly))
    assert not normal_form(test, gauss_system.gb)


def test_single_column_contiguity():
    cay = CayleyConfig.from_matrix([[1]], k=1, n=0)
    ctx = SymbolContext(1, 1)
    G = gkz_groebner(cay, ctx)
    cont = direction_contiguity(cay, ctx, 0, G)
    assert ctx.to_frac(cont.b_poly) == ctx.fb[0]
    assert cont.c_op == parse_operator(ctx, "z1")


def test_all_directions_certified(hyp3f2_system):
    ctx = hyp3f2_system.ctx
    for i in range(hyp3f2_system.cay.N):
        cont = hyp3f2_system.contiguity(i)
        test = weyl_mul(cont.c_op, WeylOperator.partial(ctx, i)) - \
            WeylOperator.scalar(ctx, ctx.to_frac(cont.b_poly))
        assert not normal_form(test, hyp3f2_system.gb), f"direction {i + 1}"


def test_ansatz_route_agrees_with_facet_route(gauss_system):
    """The linear-ansatz fallback, run directly, certifies the same congruence."""
    from gkzint.contiguity import _ansatz_contiguity
    ctx = gauss_system.ctx
    cand = _ansatz_contiguity(gauss_system.cay, ctx, 3, gauss_system.gb, 3)
    assert cand is not None
    test = weyl_mul(cand.c_op, WeylOperator.partial(ctx, 3)) - \
        WeylOperator.scalar(ctx, ctx.to_frac(cand.b_poly))
    assert not normal_form(test, gauss_system.gb)


# ---------------------------------------------------------------------------
# decompositions
# ---------------------------------------------------------------------------

def test_decompose_columns(gauss_system):
    cay = gauss_system.cay
    f = decompose_form_index(cay, (1, 0), (0,))
    assert f.r == (1, 0, 0, 0)
    f = decompose_form_index(cay, (0, 1), (0,))
    assert f.r == (0, 0, 1, 0)
    f0 = decompose_form_index(cay, (0, 0), (0,))
    assert f0.r == (0, 0, 0, 0)


def test_decompose_always_solves(hyp3f2_system):
    cay = hyp3f2_system.cay
    f = decompose_form_index(cay, (0, 1, 0), (0, 0))
    f.validate(cay)
    assert sum(abs(x) for x in f.r) == 3


# ---------------------------------------------------------------------------
# composite operators
# ---------------------------------------------------------------------------

def test_assemble_rank2_basis(gauss_system):
    ctx = gauss_system.ctx
    for qp, expect_op, expect_pref in (
            ((1, 0), "dz1", "1/b1"),
            ((0, 1), "dz3", "1/b2")):
        form = decompose_form_index(gauss_system.cay, qp, (0,))
        op, pref = assemble_F(gauss_system.cay, ctx, form, {})
        assert op == parse_operator(ctx, expect_op)
        assert pref == parse_ratfun(ctx, expect_pref)


def test_assemble_trivial_class(gauss_system):
    ctx = gauss_system.ctx
    form = decompose_form_index(gauss_system.cay, (0, 0), (0,))
    op, pref = assemble_F(gauss_system.cay, ctx, form, {})
    assert op == WeylOperator.one(ctx)
    assert pref == ctx.fone


def test_assemble_inverse_direction(gauss_system):
    """q = -a(4): one contiguity factor, prefactor from the shifted b-function
    divided by the shifted indicator form."""
    ctx = gauss_system.ctx
    cay = gauss_system.cay
    cont = gauss_system.contiguity(3)
    from gkzint.contiguity import FormIndex
    form = FormIndex((0, -1), (-1,), (0, 0, 0, -1))
    form.validate(cay)
    op, pref = assemble_F(cay, ctx, form, {3: cont})
    assert op == cont.c_op
    # B = b4(b + a(4)) / (a'ـ4 . (b + a(4))) with a(4) = (0,1,1)
    shifted_b = parse_ratfun(ctx, "(b2+1)*(b3+1)")
    indicator = parse_ratfun(ctx, "b2+1")
    assert pref == indicator / shifted_b
    # certificate through the contiguity congruence: C4 realizes the shift
    test = weyl_mul(cont.c_op, WeylOperator.partial(ctx, 3)) - \
        WeylOperator.scalar(ctx, ctx.to_frac(cont.b_poly))
    assert not normal_form(test, gauss_system.gb)


def test_realization_independent_of_decomposition(hyp3f2_system):
    """Both minimal decompositions of the middle class produce the same
    Pfaffian row data: the class realization does not depend on the chosen r
    on this example."""
    from gkzint.pfaffian import GkzSystem
    ctx = hyp3f2_system.ctx
    cay = hyp3f2_system.cay
    cands = decomposition_candidates(cay, (0, 1, 0), (0, 0))
    minimal = [f for f in cands if sum(abs(x) for x in f.r) == 3]
    assert len(minimal) >= 2
    vecs = []
    for f in minimal[:2]:
        _, op, pref = hyp3f2_system.realize(f)
        vecs.append(hyp3f2_system.nf_vector(op, pref))
    assert vecs[0] == vecs[1]
