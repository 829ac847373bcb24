"""Command-line front end: ``acs <command> ...``.

Exit codes: 0 success, 1 usage or input error, 2 precondition failure,
3 low-confidence verdict under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import catalog
from .acstruct import ChartStructure, StructureError, parse_point, point_to_real, validate
from .expr import ExprError
from .nijenhuis import (
    LOW_CONFIDENCE,
    PointTensor,
    PreconditionError,
    classify,
    nijenhuis_at,
    realize_dim4,
)

SCHEMA_VERSION = "1"

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_LOW_CONFIDENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # prefix matching would make --s ambiguous with --strict/--samples/--seed
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ---------------------------------------------------------------------
# input resolution
# ---------------------------------------------------------------------


def load_model(ref: str):
    if ref.startswith("models:"):
        try:
            return catalog.resolve(ref)
        except KeyError as e:
            raise UsageError(str(e.args[0])) from None
    p = Path(ref)
    if not p.exists():
        raise UsageError(f"no such model or file: {ref}")
    data = json.loads(p.read_text())
    if "coords" in data:
        return ChartStructure.from_json(data)
    if "N" in data:
        return PointTensor.from_json(data)
    raise UsageError(f"{ref}: neither a chart (coords/J) nor a tensor (complex_dim/N) file")


def tensor_of(model, point_text: str | None):
    """Point tensor (adapted basis) of a chart at a point, or the tensor itself."""
    if isinstance(model, PointTensor):
        return model, None
    pt = parse_point(point_text, model.vars)
    q = point_to_real(model.vars, pt)
    N = nijenhuis_at(model.jet(q))
    return PointTensor.from_map(N, model.name), N


def _require_chart(model):
    if isinstance(model, PointTensor):
        raise UsageError("this command needs a chart model")
    return model


# ---------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, Fraction):
        return str(x)
    return x


def emit(args, command: str, payload: dict, text: str) -> None:
    if args.json:
        out = {"schema_version": SCHEMA_VERSION, "command": command}
        out.update(_jsonable(payload))
        print(json.dumps(out, ensure_ascii=False, indent=2))
    else:
        print(text)


def _fmt_c(v: complex) -> str:
    v = complex(v)
    re, im = round(v.real, 10) + 0.0, round(v.imag, 10) + 0.0
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return f"{im:g}i"
    return f"{re:g}{im:+g}i"


def tensor_text(pt: PointTensor) -> str:
    lines = []
    for i in range(pt.n):
        for j in range(i + 1, pt.n):
            terms = [f"({_fmt_c(pt.c[i, j, k])})X{k + 1}" for k in range(pt.n) if abs(pt.c[i, j, k]) > 1e-12]
            if terms:
                lines.append(f"N(X{i + 1},X{j + 1}) = " + " + ".join(terms))
    return "\n".join(lines) if lines else "N = 0"


# ---------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------


def cmd_validate(args) -> int:
    model = load_model(args.model)
    if isinstance(model, PointTensor):
        emit(args, "validate", {"valid": True, "violations": []}, "ok (point tensor)")
        return EXIT_OK
    v = validate(model, samples=args.samples, seed=args.seed, tol=args.tol)
    emit(args, "validate", {"valid": not v, "violations": v}, "ok" if not v else "\n".join(v))
    return EXIT_OK if not v else EXIT_PRECONDITION


def cmd_nijenhuis(args) -> int:
    model = load_model(args.model)
    pt, N = tensor_of(model, args.point)
    payload = {"tensor": pt.to_json()}
    if N is not None:
        payload["real_components"] = N.values
        payload["residuals"] = N.residuals()
    emit(args, "nijenhuis", payload, tensor_text(pt))
    return EXIT_OK


def cmd_classify(args) -> int:
    model = load_model(args.model)
    pt, _ = tensor_of(model, args.point)
    rep = classify(pt, tol=args.tol)
    text = rep.summary()
    for f in rep.fixed_points:
        text += f"\n  fixed {f.kind}: incident={f.incident} transversal={f.transversal}"
    if rep.flags:
        text += "\n  flags: " + ", ".join(rep.flags)
    emit(args, "classify", rep.to_json(), text)
    return EXIT_LOW_CONFIDENCE if args.strict and rep.low_confidence else EXIT_OK


def cmd_symbol(args) -> int:
    from .symbol import symbol_tower

    model = load_model(args.model)
    pt, _ = tensor_of(model, args.point)
    tower = symbol_tower(pt, args.max_order, tol=args.tol)
    text = f"gamma dims: {tower.dims}\nfinite type: {tower.finite_type}"
    emit(args, "symbol", tower.to_json(), text)
    return EXIT_OK


def cmd_charvar(args) -> int:
    from .symbol import char_variety

    model = load_model(args.model)
    pt, _ = tensor_of(model, args.point)
    rep = char_variety(pt, samples=args.samples, seed=args.seed, tol=args.tol)
    text = (
        f"p_complex={rep.p_complex} kernel_rank_complex={rep.kernel_rank_complex} "
        f"zeta_real={rep.zeta_real}\n{rep.phrase}"
    )
    if rep.flags:
        text += "\nflags: " + ", ".join(rep.flags)
    emit(args, "charvar", rep.to_json(), text)
    return EXIT_LOW_CONFIDENCE if args.strict and LOW_CONFIDENCE in rep.flags else EXIT_OK


def cmd_estructure(args) -> int:
    from .dim4 import e_structure

    model = _require_chart(load_model(args.model))
    pt = parse_point(args.point, model.vars)
    e = e_structure(model, point_to_real(model.vars, pt), seed=args.seed)
    text = "\n".join(f"xi{k + 1} = {np.round(e.frame[k], 10).tolist()}" for k in range(4))
    text += "\nresiduals: " + ", ".join(f"{k}={v:.3e}" for k, v in e.residuals.items())
    emit(args, "estructure", e.to_json(), text)
    return EXIT_OK


def cmd_realize(args) -> int:
    from .acstruct import VarTable

    vt = VarTable(("z", "w"))
    point = parse_point(args.point, vt)
    r = realize_dim4(args.A, args.B, point)
    text = (
        f"alpha = {r.alpha_exact if r.alpha_exact is not None else _fmt_c(r.alpha)}\n"
        f"beta = {r.beta_exact if r.beta_exact is not None else _fmt_c(r.beta)}\n"
        f"principal angle = {r.angle:.3e}"
    )
    emit(args, "realize", r.to_json(), text)
    return EXIT_OK


def cmd_obstruct(args) -> int:
    from . import obstruct as ob

    kind = args.kind
    if kind == "dim4":
        rep = ob.dim4_check(args.chi, args.tau)
    elif kind == "cp2sum":
        rep = ob.cp2sum_check(args.r, args.s)
    elif kind == "typeii":
        rep = ob.typeii_check(args.m, args.n)
    elif kind == "dim6":
        rep = ob.dim6_check(args.c1_torsion3, args.c1_squared_zero, args.c1c2)
    elif kind == "cp3":
        rep = ob.cp3_check(args.r)
    else:
        rep = ob.dim8_check(
            args.c1_4, args.c1_2c2, args.c1c3, args.c2_2, args.c4, args.mode, not args.torsion, args.q4
        )
    emit(args, "obstruct", rep.to_json(), rep.text())
    return EXIT_OK


def cmd_liealg(args) -> int:
    from . import g2lab

    k = Fraction(args.k) if args.k is not None else None
    A = g2lab.build_algebra(args.case, k)
    rep = g2lab.jacobi_check(A)
    payload = rep.to_json()
    text = f"{args.case} k={A.k}: Jacobi {'pass' if rep.passed else 'FAIL'} ({rep.checked - len(rep.failures)}/{rep.checked})"
    for lab, res in rep.complex_failures:
        text += f"\n  {lab}: {res}"
    if rep.passed:
        K = g2lab.killing_form(A)
        payload["killing"] = K.to_json()
        text += f"\nKilling form signature {K.signature}, rank {K.rank}"
    if args.solve_k:
        sol = g2lab.solve_k(args.case, g2lab.pattern_triples(1, 2))
        allsol = g2lab.solve_k(args.case)
        payload["k_from_112"] = sol
        payload["k_all_triples"] = allsol
        text += f"\nk from (1,1,2): {sol}\nk from all triples: {allsol}"
    emit(args, "liealg", payload, text)
    return EXIT_OK


def cmd_hermitian(args) -> int:
    from .g2lab import hermitian_data

    model = load_model(args.model)
    pt, _ = tensor_of(model, args.point)
    H = hermitian_data(pt)
    text = f"signature {H.signature}\nscale {H.scale:g}\nomega^3/3 = {H.omega_vol:g} vol"
    if H.sigma_vol is not None:
        text += f"\n(i/4) sigma^sigmabar = {_fmt_c(H.sigma_vol)} vol (residual {H.identity_residual:.3e})"
    emit(args, "hermitian", H.to_json(), text)
    return EXIT_OK


def cmd_models(args) -> int:
    names = catalog.model_names()
    problems = catalog.self_test() if args.self_test else []
    payload = {
        "charts": {n: catalog.CHART_LABELS[n] for n in names["charts"]},
        "tensors": {n: catalog.TENSOR_LABELS[n] for n in names["tensors"]},
        "self_test": problems,
    }
    lines = ["charts:"] + [f"  models:{n}  {catalog.CHART_LABELS[n]}" for n in names["charts"]]
    lines += ["tensors:"] + [f"  models:{n}  {catalog.TENSOR_LABELS[n]}" for n in names["tensors"]]
    if args.self_test:
        lines.append("self-test: " + ("ok" if not problems else "; ".join(problems)))
    emit(args, "models", payload, "\n".join(lines))
    return EXIT_OK if not problems else EXIT_PRECONDITION


def cmd_nofor(args) -> int:
    from .involutive import ResidualCase, nofor_residual

    case = ResidualCase.from_strings(args.Z, args.Xi, args.W, args.c)
    res = nofor_residual(case)
    ok = all(e.is_zero() for _, e in res)
    payload = {"symmetry": ok, "residuals": {name: str(e) for name, e in res}}
    text = "\n".join(f"{name}: {e}" for name, e in res) + f"\nsymmetry: {ok}"
    emit(args, "nofor-residual", payload, text)
    return EXIT_OK


# ---------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--strict", action="store_true", help="exit 3 on LOW_CONFIDENCE")
    common.add_argument("--tol", type=float, default=1e-9, help="relative rank threshold")
    common.add_argument("--samples", type=int, default=20)
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="acs", description="Local invariants of almost complex structures.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model_cmd(name, func, help_, point=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("model", help="models:<name> or a JSON file")
        if point:
            sp.add_argument("--point", default=None, help='e.g. "z=0.1+0.2i,w=0" (default: origin)')
        sp.set_defaults(func=func)
        return sp

    model_cmd("validate", cmd_validate, "check J^2 = -1", point=False)
    model_cmd("nijenhuis", cmd_nijenhuis, "Nijenhuis tensor at a point")
    model_cmd("classify", cmd_classify, "pointwise type of N")
    sp = model_cmd("symbol", cmd_symbol, "dimensions of gamma_k")
    sp.add_argument("--max-order", type=int, default=4)
    model_cmd("charvar", cmd_charvar, "characteristic variety and functional rank")
    model_cmd("estructure", cmd_estructure, "canonical frame in dimension 4")
    model_cmd("hermitian", cmd_hermitian, "Hermitian data in dimension 6")

    sp = sub.add_parser("realize", parents=[common], help="J with prescribed Im N in dimension 4")
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    sp.add_argument("--point", default=None)
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("obstruct", parents=[common], help="topological obstruction arithmetic")
    osub = sp.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    o = osub.add_parser("dim4", parents=[common])
    o.add_argument("--chi", type=int, required=True)
    o.add_argument("--tau", type=int, required=True)
    o = osub.add_parser("cp2sum", parents=[common])
    o.add_argument("--r", type=int, required=True)
    o.add_argument("--s", type=int, required=True)
    o = osub.add_parser("typeii", parents=[common])
    o.add_argument("--m", type=int, required=True)
    o.add_argument("--n", type=int, required=True)
    o = osub.add_parser("dim6", parents=[common])
    o.add_argument("--c1-torsion3", action="store_true")
    o.add_argument("--c1-squared-zero", action="store_true")
    o.add_argument("--c1c2", type=int, required=True)
    o = osub.add_parser("cp3", parents=[common])
    o.add_argument("--r", type=int, required=True)
    o = osub.add_parser("dim8", parents=[common])
    for flag in ("--c1-4", "--c1-2c2", "--c1c3", "--c2-2", "--c4"):
        o.add_argument(flag, type=int, default=0)
    o.add_argument("--mode", choices=("general", "transversal", "strong"), default="general")
    o.add_argument("--torsion", action="store_true", help="cohomology has torsion")
    o.add_argument("--q4", type=int, default=None)
    sp.set_defaults(func=cmd_obstruct)

    sp = sub.add_parser("liealg", parents=[common], help="14-dimensional bracket construction")
    sp.add_argument("--case", choices=("su3", "su21"), required=True)
    sp.add_argument("--k", default=None)
    sp.add_argument("--solve-k", action="store_true")
    sp.set_defaults(func=cmd_liealg)

    sp = sub.add_parser("models", parents=[common], help="list catalog models")
    sp.add_argument("--self-test", action="store_true")
    sp.set_defaults(func=cmd_models)

    sp = sub.add_parser("nofor-residual", parents=[common], help="symmetry residuals of the DG2(2) model")
    sp.add_argument("--Z", required=True)
    sp.add_argument("--Xi", required=True)
    sp.add_argument("--W", required=True)
    sp.add_argument("--c", default="1")
    sp.set_defaults(func=cmd_nofor)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ExprError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, StructureError) as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
