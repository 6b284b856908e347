"""Named end-to-end pipelines on the bundled example configurations, with the
expected exact results; used by the CLI `verify` command and the test suite."""

from fractions import Fraction

from .cayley import gauss_2f1, gauss_2f1_interleaved, hyp3f2
from .config import DEFAULT
from .intersection import (SecondaryEquationInstance, normalize_intersection,
                           rational_solution_secondary)
from .pfaffian import GkzSystem, full_pfaffian, integrability_check
from .strings import parse_ratfun
from .triangulation import find_weight, in_cone_CT, is_unimodular, \
    triangulation_from_sets
from .weyl import parse_operator


GAUSS_P4_STRINGS = [
    ["(b2*z1)/(z1*z4-z2*z3)", "(-b2*z3)/(z1*z4-z2*z3)"],
    ["(-b1*z1*z2)/(z1*z4^2-z2*z3*z4)",
     "(b3*z1*z4+(b1-b3)*z2*z3)/(z1*z4^2-z2*z3*z4)"],
]

GAUSS_ICH_STRINGS = [
    ["1/b1-1/b3", "-1/b3"],
    ["-1/b3", "1/b2-1/b3"],
]

GAUSS_C4_STRING = "z2*z3*dz1+(z2*dz2+z3*dz3+z4*dz4)*z4"
GAUSS_B4_STRING = "s2*s3"
GAUSS_TORIC_STRING = "dz2*dz3-dz1*dz4"
GAUSS_TRIANGULATION = [(1, 2, 3), (2, 3, 4)]

HYP3F2_P1_STRINGS = [
    ["(b4*z1+b2+b3-b4-b5)/(z1^2-z1)",
     "(b3*(b1+b2-b4))/(b1*z1^2-b1*z1)",
     "(b2*(b2-b4-b5-1))/(b1*z1^2-b1*z1)"],
    ["(b1*(b2+b3-b5))/(b3*z1-b3)",
     "(b1*z1+b2-b4)/(z1^2-z1)",
     "(b2*(b2-b4-b5-1))/(b3*z1^2-b3*z1)"],
    ["(-b1*(b2+b3-b5))/(b2*z1-b2)",
     "(b3*(b4-b1-b2))/(b2*z1-b2)",
     "(-b2+b4+b5+1)/(z1-1)"],
]

HYP3F2_ICH_STRINGS = [
    ["-(((b4*b2+(b4+b5)*b3)*b1+b4*b2^2+(b4*b3-b4^2-b5*b4)*b2+(-b4^2-b5*b4)*b3))"
     "/(b5*b4*b1*(b2-b4-b5)*(b2+b3-b5))",
     "(b4+b5)/((b2-b4-b5)*b5*b4)",
     "(b1*b4*z1+b2*b4*z1-b4^2*z1-b4*b5*z1-b5*b3)/((b2-b4-b5+1)*(b2-b4-b5)*b5*b4)"],
    ["(b4+b5)/((b2-b4-b5)*b5*b4)",
     "-((b1*b2*b5+b1*b3*b4+b1*b3*b5-b1*b4*b5-b1*b5^2+b5*b2^2+b2*b3*b5-b2*b4*b5"
     "-b2*b5^2))/(b3*(b1+b2-b4)*(b2-b4-b5)*b5*b4)",
     "-((b1*b4*z1-b5*b2-b5*b3+b5*b4+b5^2))/((b2-b4-b5+1)*(b2-b4-b5)*b5*b4)"],
    ["(b1*b4*z1+b2*b4*z1-b4^2*z1-b4*b5*z1-b5*b3)/((b2-b4-b5-1)*(b2-b4-b5)*b5*b4)",
     "-((b1*b4*z1-b5*b2-b5*b3+b5*b4+b5^2))/((b2-b4-b5-1)*(b2-b4-b5)*b5*b4)",
     "-((a0*z1^2-2*b1*b3*b4*b5*z1+a2))/((b2-b4-b5-1)*(b2-b4-b5+1)*b2*(b2-b4-b5)"
     "*b5*b4)"],
]

HYP3F2_ALPHA0 = ("b1^2*b2*b4-b1^2*b4*b5+b1*b2^2*b4-b1*b2*b4^2-2*b1*b2*b4*b5"
                 "+b1*b4^2*b5+b1*b4*b5^2")
HYP3F2_ALPHA2 = ("b2^2*b3*b5+b2*b3^2*b5-2*b5*b4*b3*b2-b2*b3*b5^2-b3^2*b4*b5"
                 "+b3*b4^2*b5+b3*b4*b5^2")

HYP3F2_TRIANGULATION = [(2, 3, 4, 5, 6), (1, 2, 4, 5, 6), (1, 2, 3, 4, 6)]
HYP3F2_LINE = {1: Fraction(-1), 2: Fraction(1), 3: Fraction(1),
               4: Fraction(1), 5: Fraction(1)}

INTERLEAVED_TRIANGULATION = [(1, 2, 4), (1, 3, 4)]

GAUSS_BASIS = [((1, 0), (0,)), ((0, 1), (0,))]
HYP3F2_BASIS = [((1, 0, 0), (0, 0)), ((0, 0, 1), (0, 0)), ((0, 1, 0), (0, 0))]


def hyp3f2_ich_fixture(ctx):
    """Parse the printed intersection matrix, expanding the a0/a2 shorthands."""
    a0 = parse_ratfun(ctx, HYP3F2_ALPHA0)
    a2 = parse_ratfun(ctx, HYP3F2_ALPHA2)
    out = []
    for row in HYP3F2_ICH_STRINGS:
        out.append([])
        for s in row:
            if "a0" in s:
                den = parse_ratfun(
                    ctx, "(b2-b4-b5-1)*(b2-b4-b5+1)*b2*(b2-b4-b5)*b5*b4")
                z1 = ctx.fz[0]
                b1, b3, b4, b5 = ctx.fb[0], ctx.fb[2], ctx.fb[3], ctx.fb[4]
                out[-1].append(-(a0 * z1 ** 2 - 2 * b1 * b3 * b4 * b5 * z1 + a2) / den)
            else:
                out[-1].append(parse_ratfun(ctx, s))
    return out


def gauss_pipeline(cfg=None, directions=None):
    """Full pipeline on the rank-2 example: Pfaffian system, secondary
    equation, normalized intersection matrix."""
    cfg = cfg or DEFAULT
    cay = gauss_2f1()
    system = GkzSystem(cay, cfg=cfg)
    psys = full_pfaffian(system, GAUSS_BASIS, directions=directions)
    inst = SecondaryEquationInstance.from_pfaffian(psys, system.ctx)
    I_raw, dim = rational_solution_secondary(
        inst, degree_bound=cfg.ansatz_degree,
        denominator_power=cfg.denominator_power)
    T = triangulation_from_sets(cay, GAUSS_TRIANGULATION)
    result = normalize_intersection(inst, I_raw, T)
    result.solution_dimension = dim
    return {
        "system": system, "pfaffian": psys, "instance": inst,
        "triangulation": T, "result": result,
    }


def hyp3f2_pipeline(cfg=None):
    """Full pipeline on the rank-3 example, restricted to the standard line
    (one free coordinate, the others frozen at +-1)."""
    cfg = cfg or DEFAULT
    cay = hyp3f2()
    system = GkzSystem(cay, cfg=cfg)
    psys = full_pfaffian(system, HYP3F2_BASIS, directions=[0])
    inst = SecondaryEquationInstance.from_pfaffian(psys, system.ctx,
                                                   fix=HYP3F2_LINE)
    I_raw, dim = rational_solution_secondary(
        inst, degree_bound=cfg.ansatz_degree,
        denominator_power=cfg.denominator_power)
    T = triangulation_from_sets(cay, HYP3F2_TRIANGULATION)
    result = normalize_intersection(inst, I_raw, T)
    result.solution_dimension = dim
    return {
        "system": system, "pfaffian": psys, "instance": inst,
        "triangulation": T, "result": result,
    }


def verify_triangulations():
    """Recover the three named regular unimodular triangulations by exact
    feasibility search; returns the found weights."""
    out = {}
    for name, cay, sets in (
            ("rank2", gauss_2f1(), GAUSS_TRIANGULATION),
            ("interleaved", gauss_2f1_interleaved(), INTERLEAVED_TRIANGULATION),
            ("rank3", hyp3f2(), HYP3F2_TRIANGULATION)):
        T = triangulation_from_sets(cay, sets)
        om = find_weight(cay, T)
        assert is_unimodular(T)
        assert in_cone_CT(cay, om.omega, T)
        out[name] = (cay, T, om)
    return out
