"""Command-line interface: JSON in, JSON out, deterministic given the seed.

Subcommands: basis, pfaffian, intersect, triangulate, series, rcin, l2, verify.
Matrices and simplices use 1-based column indices in all JSON payloads.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .cayley import CayleyConfig
from .config import ToolConfig
from .errors import GkzError, MalformedInputError
from .groebner import standard_monomials, toric_groebner
from .intersection import (SecondaryEquationInstance, normalize_intersection,
                           rational_solution_secondary)
from .l2 import l2_series_value, quadrature_oracle, spec_from_polynomials
from .pfaffian import GkzSystem, full_pfaffian
from .series import ParameterPoint, phi_sigma, psi_sigma, rcin_rhs
from .strings import _Parser, ratfun_to_string, tokenize
from .triangulation import (find_weight, is_unimodular, regular_triangulation,
                            triangulation_from_sets)
from .weyl import operator_to_string


@dataclass
class JobSpec:
    command: str
    input_path: str = None
    output_path: str = None
    overrides: dict = field(default_factory=dict)
    target: str = None


def _fraction(v):
    if isinstance(v, bool):
        raise MalformedInputError("boolean is not a number")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(str(v))
    raise MalformedInputError(f"cannot interpret {v!r} as a rational number")


def _cayley_from(payload):
    try:
        A = payload["A"]
        k = payload["k"]
        n = payload["n"]
    except KeyError as e:
        raise MalformedInputError(f"missing field {e}")
    return CayleyConfig.from_matrix(A, k=k, n=n)


def _basis_from(payload):
    out = []
    for item in payload.get("basis", []):
        out.append((tuple(item["q_prime"]), tuple(item["q_doubleprime"])))
    if not out:
        raise MalformedInputError("empty basis")
    return out


def _delta_from(payload):
    d = payload.get("delta")
    if d is None:
        raise MalformedInputError("missing delta")
    return ParameterPoint.make([_fraction(x) for x in d["gamma"]],
                               [_fraction(x) for x in d["c"]])


def _num(x, digits):
    return mp.nstr(mp.mpf(x) if not isinstance(x, mp.mpc) else x, digits)


def _complex_pair(v, digits):
    v = mp.mpmathify(v)
    return [mp.nstr(mp.re(v), digits), mp.nstr(mp.im(v), digits)]


# ---------------------------------------------------------------------------
# polynomial-in-x parsing for the l2 command
# ---------------------------------------------------------------------------

def _parse_h_poly(text, zval):
    """Parse a univariate polynomial string in x (placeholder z allowed) into
    an ascending coefficient list."""

    def lift(c):
        return {0: c}

    def add(a, b):
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0.0) + v
        return {k: v for k, v in out.items() if v != 0}

    def mul(a, b):
        out = {}
        for i, u in a.items():
            for j, v in b.items():
                out[i + j] = out.get(i + j, 0.0) + u * v
        return {k: v for k, v in out.items() if v != 0}

    def atom_name(s):
        if s == "x":
            return {1: 1.0}
        if s == "z":
            if zval is None:
                raise MalformedInputError("polynomial uses z but no z value given")
            return lift(float(zval))
        raise MalformedInputError(f"unknown symbol {s!r} in polynomial")

    def div(a, b):
        if set(b) - {0}:
            raise MalformedInputError("division by non-constant polynomial")
        return {k: v / b[0] for k, v in a.items()}

    def powr(a, e):
        if e < 0:
            raise MalformedInputError("negative power in polynomial")
        out = lift(1.0)
        for _ in range(e):
            out = mul(out, a)
        return out

    p = _Parser(tokenize(text), atom_num=lambda v: lift(float(v)),
                atom_name=atom_name, mul=mul, div=div, add=add,
                sub=lambda a, b: add(a, {k: -v for k, v in b.items()}),
                neg=lambda a: {k: -v for k, v in a.items()}, powr=powr)
    d = p.parse()
    deg = max(d) if d else 0
    return [d.get(i, 0.0) for i in range(deg + 1)]


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------

def _cmd_basis(payload, cfg):
    cay = _cayley_from(payload)
    system = GkzSystem(cay, cfg=cfg)
    ctx = system.ctx
    toric = toric_groebner(cay, ctx, step_limit=cfg.buchberger_step_limit)
    S = system.stdmons

    def mono_str(e):
        if not any(e):
            return "1"
        return "*".join(f"dz{j + 1}^{x}" if x > 1 else f"dz{j + 1}"
                        for j, x in enumerate(e) if x)

    return {
        "A": cay.matrix.tolist(),
        "order": "grevlex",
        "toric_generators": [operator_to_string(g) for g in toric.generators],
        "generators": [operator_to_string(g) for g in system.gb.generators],
        "standard_monomials": [mono_str(e) for e in S.monomials],
        "rank": len(S),
    }


def _specialize_from(payload, cay):
    sp = payload.get("specialize")
    if not sp:
        return None
    subs = [None] * cay.N
    for key, v in sp.items():
        j = int(key) - 1
        if not 0 <= j < cay.N:
            raise MalformedInputError(f"specialize index {key} out of range")
        subs[j] = _fraction(v)
    return subs


def _cmd_pfaffian(payload, cfg):
    cay = _cayley_from(payload)
    system = GkzSystem(cay, cfg=cfg)
    basis = _basis_from(payload)
    dirs = payload.get("directions")
    dirs = [int(i) - 1 for i in dirs] if dirs else None
    subs = _specialize_from(payload, cay)
    psys = full_pfaffian(system, basis, directions=dirs, specialize=subs)
    out = {
        "A": cay.matrix.tolist(),
        "basis": [{"q_prime": list(f.q_prime), "q_doubleprime": list(f.q_doubleprime),
                   "r": list(f.r)} for f in psys.basis],
        "standard_monomials": len(psys.standard_monomials),
        "pfaffian": {str(i + 1): psys.matrices[i].to_strings()
                     for i in sorted(psys.matrices)},
        "dual_pfaffian": {str(i + 1): psys.dual_matrices[i].to_strings()
                          for i in sorted(psys.dual_matrices)},
    }
    return out


def _cmd_intersect(payload, cfg):
    cay = _cayley_from(payload)
    system = GkzSystem(cay, cfg=cfg)
    basis = _basis_from(payload)
    fix = {int(k) - 1: _fraction(v) for k, v in (payload.get("fix") or {}).items()}
    dirs = payload.get("directions")
    if dirs is not None:
        dirs = [int(i) - 1 for i in dirs]
    else:
        dirs = [j for j in range(cay.N) if j not in fix]
    psys = full_pfaffian(system, basis, directions=dirs)
    inst = SecondaryEquationInstance.from_pfaffian(psys, system.ctx, fix=fix)
    I_raw, dim = rational_solution_secondary(
        inst, degree_bound=cfg.ansatz_degree,
        denominator_power=cfg.denominator_power)
    tri = payload.get("triangulation")
    if tri:
        T = triangulation_from_sets(cay, [tuple(s) for s in tri])
    else:
        from .triangulation import search_triangulations
        cands = search_triangulations(cay, seed=cfg.seed)
        uni = [t for t, _ in cands if is_unimodular(t)]
        if not uni:
            raise MalformedInputError("no unimodular regular triangulation found")
        T = uni[0]
    signs = {int(k) - 1: int(v) for k, v in (payload.get("center_signs") or {}).items()}
    res = normalize_intersection(inst, I_raw, T, center_signs=signs)
    res.solution_dimension = dim
    ctx = system.ctx
    return {
        "I_ch_over_(2pii)^n": res.I_ch.to_strings(),
        "I_raw": res.I_raw.to_strings(),
        "C": ratfun_to_string(ctx, res.C),
        "n": res.two_pi_i_power,
        "z0": res.normalization_point,
        "solution_dimension": res.solution_dimension,
        "basis": [{"q_prime": list(f.q_prime), "q_doubleprime": list(f.q_doubleprime),
                   "r": list(f.r)} for f in psys.basis],
    }


def _cmd_triangulate(payload, cfg):
    cay = _cayley_from(payload)
    if "omega" in payload:
        om = [_fraction(x) for x in payload["omega"]]
        T = regular_triangulation(cay, om)
    elif "simplices" in payload:
        T = triangulation_from_sets(cay, [tuple(s) for s in payload["simplices"]])
        om = find_weight(cay, T).omega
    else:
        raise MalformedInputError("triangulate needs 'omega' or 'simplices'")
    return {
        "omega": [str(x) for x in om],
        "simplices": [list(s) for s in T.simplex_sets_1based()],
        "unimodular": is_unimodular(T),
        "normalized_volume": T.normalized_volume(),
    }


def _cmd_series(payload, cfg):
    cay = _cayley_from(payload)
    delta = _delta_from(payload)
    sigma = tuple(int(j) - 1 for j in payload["sigma"])
    K = int(payload.get("K", cfg.truncation_K))
    z = [float(x) for x in payload["z"]]
    kind = payload.get("kind", "phi")
    with mp.workdps(cfg.precision_digits):
        if kind == "phi":
            val, ser = phi_sigma(cay, delta, sigma, K, z=z, prec=cfg.precision_digits)
        elif kind == "psi":
            val, ser = psi_sigma(cay, delta, sigma, K, z=z, prec=cfg.precision_digits)
        else:
            raise MalformedInputError("kind must be 'phi' or 'psi'")
        return {
            "value": _complex_pair(val, 17),
            "tail_ratio": _num(ser.tail_ratio(z), 5),
            "K": K,
        }


def _cmd_rcin(payload, cfg):
    cay = _cayley_from(payload)
    delta = _delta_from(payload)
    T = triangulation_from_sets(cay, [tuple(s) for s in payload["triangulation"]])
    K = int(payload.get("K", cfg.truncation_K))
    z = [float(x) for x in payload["z"]]
    val = rcin_rhs(cay, delta, T,
                   a=tuple(payload["a"]), b=tuple(payload["b"]),
                   a2=tuple(payload["a_dual"]), b2=tuple(payload["b_dual"]),
                   K=K, z=z, prec=cfg.precision_digits)
    return {"value": _complex_pair(val, 17), "K": K}


def _cmd_l2(payload, cfg):
    zval = payload.get("z")
    hs = payload.get("h")
    if not hs:
        raise MalformedInputError("l2 needs polynomial list 'h'")
    coeffs = [_parse_h_poly(s, zval) for s in hs]
    gamma = [_fraction(g) for g in payload["gamma"]]
    cpar = payload["c"]
    cpar = [_fraction(x) for x in cpar] if isinstance(cpar, list) else _fraction(cpar)
    spec = spec_from_polynomials(coeffs, gamma, cpar,
                                 K=int(payload.get("K", cfg.truncation_K)))
    method = payload.get("method", "both")
    out = {"method": method}
    if method in ("series", "both"):
        out["series"] = _num(l2_series_value(spec, prec=cfg.precision_digits), 15)
    if method in ("quadrature", "both"):
        qv, qe = quadrature_oracle(spec)
        out["quadrature"] = _num(qv, 15)
        out["quadrature_error_estimate"] = _num(qe, 3)
    return out


def _cmd_verify(target, cfg):
    from . import presets
    from .strings import parse_ratfun

    checks = {}

    def run_gauss():
        out = presets.gauss_pipeline(cfg)
        ctx = out["system"].ctx
        fixture = [[parse_ratfun(ctx, s) for s in row]
                   for row in presets.GAUSS_P4_STRINGS]
        checks["pfaffian_direction4"] = out["pfaffian"].matrices[3].rows == fixture
        cont = out["system"].contiguity(3)
        from .weyl import parse_operator, weyl_mul, WeylOperator
        cfix = parse_operator(ctx, presets.GAUSS_C4_STRING)
        checks["contiguity_C4"] = cont.c_op == cfix
        bfix = parse_ratfun(ctx, presets.GAUSS_B4_STRING.replace("s", "b"))
        checks["contiguity_b4"] = ctx.to_frac(cont.b_poly) == bfix
        ich = out["result"].I_ch.subs_z([1, 1, 1, None])
        fixture2 = [[parse_ratfun(ctx, s) for s in row]
                    for row in presets.GAUSS_ICH_STRINGS]
        checks["intersection_matrix"] = ich.rows == fixture2
        checks["solution_dimension_1"] = out["result"].solution_dimension == 1
        checks["secondary_residual"] = out["instance"].residuals_vanish(
            out["result"].I_ch)

    def run_3f2():
        out = presets.hyp3f2_pipeline(cfg)
        ctx = out["system"].ctx
        line = [None, -1, 1, 1, 1, 1]
        p1 = out["pfaffian"].matrices[0].subs_z(line)
        fixture = [[parse_ratfun(ctx, s) for s in row]
                   for row in presets.HYP3F2_P1_STRINGS]
        checks["pfaffian_direction1"] = p1.rows == fixture
        checks["intersection_matrix"] = \
            out["result"].I_ch.rows == presets.hyp3f2_ich_fixture(ctx)
        checks["solution_dimension_1"] = out["result"].solution_dimension == 1
        checks["secondary_residual"] = out["instance"].residuals_vanish(
            out["result"].I_ch)

    def run_triangulations():
        found = presets.verify_triangulations()
        for name, (cay, T, om) in found.items():
            checks[f"triangulation_{name}"] = True

    if target in ("gauss", "all"):
        run_gauss()
    if target in ("3f2", "all"):
        run_3f2()
    if target in ("triangulations", "all"):
        run_triangulations()
    if not checks:
        raise MalformedInputError(f"unknown verify target {target!r}")
    return {"target": target, "checks": checks, "passed": all(checks.values())}


_COMMANDS = {
    "basis": _cmd_basis,
    "pfaffian": _cmd_pfaffian,
    "intersect": _cmd_intersect,
    "triangulate": _cmd_triangulate,
    "series": _cmd_series,
    "rcin": _cmd_rcin,
    "l2": _cmd_l2,
}


def run(job):
    """Execute a JobSpec; returns (exit_code, output dict)."""
    try:
        cfg = ToolConfig.from_env(**job.overrides)
    except (KeyError, ValueError) as e:
        raise MalformedInputError(str(e))
    if job.command == "verify":
        out = _cmd_verify(job.target or "all", cfg)
        return (0 if out["passed"] else 1), out
    fn = _COMMANDS.get(job.command)
    if fn is None:
        raise MalformedInputError(f"unknown command {job.command!r}")
    if job.input_path:
        try:
            with open(job.input_path) as f:
                payload = json.load(f)
        except json.JSONDecodeError as e:
            raise MalformedInputError(f"bad JSON input: {e}")
    else:
        try:
            payload = json.load(sys.stdin)
        except json.JSONDecodeError as e:
            raise MalformedInputError(f"bad JSON input: {e}")
    out = fn(payload, cfg)
    return 0, out


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="gkzint",
        description="Exact cohomology intersection matrices of GKZ systems: "
                    "Groebner bases, Pfaffian systems, secondary equation, "
                    "series and quadrature checks.")
    ap.add_argument("command", choices=sorted(_COMMANDS) + ["verify"])
    ap.add_argument("target", nargs="?", default=None,
                    help="verify target: gauss | 3f2 | triangulations | all")
    ap.add_argument("--input", dest="input_path", default=None)
    ap.add_argument("--output", dest="output_path", default=None)
    ap.add_argument("--set", dest="overrides", action="append", default=[],
                    metavar="KEY=VALUE")
    args = ap.parse_args(argv)
    overrides = {}
    for kv in args.overrides:
        if "=" not in kv:
            print(f"bad --set {kv!r}", file=sys.stderr)
            return 2
        k, v = kv.split("=", 1)
        overrides[k] = v
    job = JobSpec(command=args.command, input_path=args.input_path,
                  output_path=args.output_path, overrides=overrides,
                  target=args.target)
    try:
        code, out = run(job)
    except GkzError as e:
        print(f"error[{type(e).__name__}]: {e}", file=sys.stderr)
        return e.exit_code
    text = json.dumps(out, sort_keys=True, indent=2) + "\n"
    if job.output_path:
        with open(job.output_path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
