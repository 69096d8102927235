"""Command-line front end: ``python3 -m bakerforge <command> ...``.

Every command writes one report (JSON by default, with ``"schema": "baker-forge/1"``).
Exit status: 0 when every asserted check passed, 1 when one failed, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath
from mpmath import iv

from .enclosure import DEFAULT_PREC, PREC_CAP, ComplexBall, iv_json, ivprec, to_iv
from .field import FieldElement, parse_alpha_list, parse_field
from .invariants import AlphaVector

SCHEMA = "baker-forge/1"


class UsageError(Exception):
    pass


# -- serialisation ---------------------------------------------------------------


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, iv.mpf):
        return iv_json(x)
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 20)
    if isinstance(x, (FieldElement,)):
        return str(x)
    if isinstance(x, ComplexBall):
        return x.to_json()
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    return str(x)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and all(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj if not isinstance(obj, list) else json.dumps(obj)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    if fmt == "csv":
        rows = report.get("table")
        w = csv.writer(buf, lineterminator="\n")
        if rows:
            keys = sorted({k for r in rows for k, _ in _flatten(r)})
            w.writerow(keys)
            for r in rows:
                d = dict(_flatten(r))
                w.writerow([d.get(k, "") for k in keys])
        else:
            w.writerow(["key", "value"])
            for k, v in _flatten(report):
                w.writerow([k, v])
        return buf.getvalue()
    for k, v in _flatten(report):
        buf.write(f"{k}: {v}\n")
    return buf.getvalue()


def _all_true(d) -> bool:
    """Every boolean leaf is True (None counts as not asserted)."""
    if isinstance(d, dict):
        return all(_all_true(v) for v in d.values())
    if isinstance(d, (list, tuple)):
        return all(_all_true(v) for v in d)
    if isinstance(d, bool):
        return d
    return True


# -- input parsing -----------------------------------------------------------------


def _alpha(args) -> AlphaVector:
    try:
        return AlphaVector.parse(args.alpha, args.field)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _real(text: str, precision: int):
    """A real given as a decimal, a fraction, or exp(<decimal>)."""
    t = text.strip().replace(" ", "")
    with ivprec(precision):
        try:
            if t.startswith("exp(") and t.endswith(")"):
                return iv.exp(_real(t[4:-1], precision))
            if "/" in t:
                q = Fraction(t)
                return iv.mpf(q.numerator) / q.denominator
            return to_iv(t, precision)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"cannot read number {text!r}") from exc


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


# -- commands -------------------------------------------------------------------------


def cmd_constants(args) -> dict:
    from .invariants import compute_base_constants, compute_g, compute_gamma_H0, invariants_report

    alpha = _alpha(args)
    rep = invariants_report(alpha, args.precision)
    if args.mode == "axiomatic":
        g = compute_g(alpha)
        base = compute_base_constants(g, args.precision)
        rep["gamma_H0_axiomatic"] = compute_gamma_H0(base, alpha.m, alpha.field, "axiomatic").to_json()
    ok = all(rep["g_chain"].values()) and rep["e1_inequality"]["holds"] is True and rep["S2"]["log_gamma_ge_log_S2"] is True
    return {"report": rep, "ok": ok}


def cmd_z_of(args) -> dict:
    from .nestedlog import epsilon_upper_chain, z_inverse, z_iterates

    y = _real(args.y, args.precision)
    try:
        res = z_inverse(y, tol=args.tol, precision=args.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    its = z_iterates(y, args.iterates, args.precision)
    with ivprec(args.precision):
        residual = res.z * iv.log(res.z) - y
    rep = {"y": iv_json(y), "z": res.to_json(), "residual": iv_json(residual), "iterates": [iv_json(z) for z in its]}
    ok = res.converged
    if args.log_H:
        lg = _real(args.log_gamma, args.precision) if args.log_gamma else None
        chain = epsilon_upper_chain(_real(args.log_H, args.precision), lg, args.precision)
        rep["upper_chain"] = chain
        ok = ok and chain["z_lt_z2"] is True
    return {"report": rep, "ok": ok}


def cmd_siegel(args) -> dict:
    from .siegel import LinearSystem, siegel_constants, solve_small_system, verify_solution

    field = parse_field(args.field)
    obj = _load_json(args.matrix)
    try:
        lin = LinearSystem.from_json(field, obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad matrix: {exc}") from exc
    consts = siegel_constants(field, asymptotic=args.asymptotic, precision=args.precision)
    sol = solve_small_system(lin, consts, args.strategy, args.precision)
    ok_solution = verify_solution(lin, sol.z)
    rep = {"system": lin.to_json(), "constants": consts.to_json(), "solution": sol.to_json(), "verified": ok_solution}
    return {"report": rep, "ok": ok_solution and sol.bound_met}


def _build_pade(args):
    from .pade import construct_pade

    alpha = _alpha(args)
    l = _int_list(args.l)
    nu = _int_list(args.nu) if args.nu else None
    try:
        return construct_pade(alpha, l, args.strategy, nu, args.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_pade(args) -> dict:
    from .pade import derive_family, determinant_factorization

    sys_ = _build_pade(args)
    fam = derive_family(sys_)
    rep = {"system": sys_.to_json(), "family": fam.to_json()}
    ok = sys_.bound_met and all(sys_.checks["order"]) and sys_.checks["integral"] and fam.selected is not None
    ok = ok and all(fam.checks.values()) if isinstance(fam.checks, dict) else ok
    if sys_.alpha.m == 2 and sys_.params.L <= 8 and fam.selected is not None:
        det = determinant_factorization(sys_, fam)
        rep["determinant"] = det
        ok = ok and det.get("order_ok") is True and det.get("h_degree_ok") is True
    return {"report": rep, "ok": bool(ok)}


def cmd_forms(args) -> dict:
    from .forms import check_qr_bounds, check_raw_bounds, evaluate_forms
    from .invariants import compute_base_constants, compute_gamma_H0
    from .pade import derive_family, pade_from_json

    if args.system:
        try:
            obj = _load_json(args.system)
            if "schema" in obj:
                obj = obj["report"]["system"]
            sys_ = pade_from_json(obj, args.precision)
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad system file: {exc}") from exc
    elif args.alpha and args.l:
        sys_ = _build_pade(args)
    else:
        raise UsageError("forms eval needs --system or --alpha with --l")
    fam = derive_family(sys_)
    if fam.selected is None:
        return {"report": {"error": "no index selection with nonzero determinant"}, "ok": False}
    forms = evaluate_forms(sys_, fam, args.precision)
    raw = check_raw_bounds(sys_, fam, forms, args.precision)
    base = compute_base_constants(sys_.g, args.precision)
    gh = compute_gamma_H0(base, sys_.alpha.m, sys_.field)
    qr = check_qr_bounds(sys_, forms, base, gh.log_gamma)
    rep = {"forms": forms.to_json(), "raw_bounds": raw, "qr_bounds": qr}
    ok = all(forms.checks.values()) and raw["all"]
    return {"report": rep, "ok": ok}


def cmd_bound(args) -> dict:
    from . import bounds

    if args.which in ("thm", "cor22"):
        alpha = _alpha(args)
        if args.log_H:
            h = bounds.HSpec.from_log_H(_real(args.log_H, args.precision), precision=args.precision)
        elif args.H:
            hs = [_real(t, args.precision) for t in args.H.split(",")]
            try:
                h = bounds.HSpec.from_heights(hs, alpha.m, precision=args.precision)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        else:
            raise UsageError("bound thm/cor22 needs --H or --log-H")
        fn = bounds.theorem_bound if args.which == "thm" else bounds.corollary22_bound
        rep = fn(alpha, h, args.precision)
        out = rep.to_json()
        out["H"] = h.to_json()
        ok = rep.checks.get("log_identity", True) is not False and rep.checks.get("weaker_than_theorem") is not False
        return {"report": out, "ok": ok}
    if args.which == "cor23":
        rep = bounds.corollary23_Ahat(_alpha(args), args.precision)
        return {"report": bounds._ahat_json(rep), "ok": rep["side_condition"] is not False}
    if args.which == "cor24":
        text = args.gamma or args.alpha
        if not text:
            raise UsageError("bound cor24 needs --gamma")
        try:
            gam = [Fraction(t) for t in text.split(",")]
            rep = bounds.corollary24_Bhat(gam, args.precision)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        ok = rep["shift_bounds_ok"] and rep["mean_value_ok"] is not False
        if rep["cap_asserted"]:
            ok = ok and rep["cap_ok"] is True
        return {"report": bounds._bhat_json(rep), "ok": bool(ok)}
    raise UsageError(f"unknown bound {args.which!r}")


def cmd_compare(args) -> dict:
    from . import bounds

    alpha = _alpha(args)
    try:
        rep = bounds.public(bounds.compare_prior(alpha, args.precision))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    corpus = bounds.dominance_corpus(args.corpus, args.seed) if args.corpus else None
    if corpus is not None:
        rep["corpus"] = corpus
    ok = rep["dominance"]["akt_le_sa"] and all(rep["dominance"]["am_gm_chain"].values())
    ok = ok and (corpus is None or corpus["all_dominated"])
    return {"report": rep, "ok": bool(ok)}


def cmd_example(args) -> dict:
    from . import bounds

    try:
        rep = bounds.example_presets(args.name, m=args.m, r=args.r, precision=args.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return {"report": rep, "ok": _all_true(rep.get("checks", {}))}


def cmd_check(args) -> dict:
    from .bounds import empirical_check

    alpha_vals = [p.value for p in parse_alpha_list(parse_field(args.field), args.alpha)]
    try:
        rep = empirical_check(alpha_vals, args.box, args.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = rep.pop("rows")
    rep["table"] = rows
    return {"report": rep, "ok": rep["all_nonzero"] and rep["violations"] == 0}


def cmd_selftest(args) -> dict:
    from . import selftest

    rep = selftest.run(seed=args.seed, precision=args.precision, quick=args.quick)
    timings = rep.pop("_timings")
    print("selftest timings: " + ", ".join(f"{k} {v:.1f}s" for k, v in timings.items()), file=sys.stderr)
    return {"report": rep, "ok": rep["ok"]}


# -- parser -------------------------------------------------------------------------------


def _precision(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"precision must be an integer, got {text!r}")
    if not 32 <= p <= PREC_CAP:
        raise argparse.ArgumentTypeError(f"precision must lie in [32, {PREC_CAP}]")
    return p


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_precision, default=DEFAULT_PREC, help="working precision in bits")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--seed", type=int, default=0, help="seed for random corpora")

    alpha_opts = argparse.ArgumentParser(add_help=False)
    alpha_opts.add_argument("--alpha", help="comma-separated points, alpha_0 = 0 first")
    alpha_opts.add_argument("--field", default="Q", help="Q, Q(i) or Q(sqrt(-D))")

    p = _Parser(prog="baker-forge", description="Explicit Baker-type bounds for linear forms in exponentials.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("constants", parents=[common, alpha_opts], help="g-invariants and theorem constants")
    s.add_argument("--mode", choices=("exponential", "axiomatic"), default="exponential")
    s.set_defaults(func=cmd_constants, need_alpha=True)

    s = sub.add_parser("z-of", parents=[common], help="inverse of y = z log z")
    s.add_argument("--y", required=True)
    s.add_argument("--tol", type=float, default=1e-15)
    s.add_argument("--iterates", type=int, default=4)
    s.add_argument("--log-H", dest="log_H")
    s.add_argument("--log-gamma", dest="log_gamma")
    s.set_defaults(func=cmd_z_of)

    s = sub.add_parser("siegel", parents=[common], help="small solutions of homogeneous systems")
    s.add_argument("action", choices=("solve",))
    s.add_argument("--field", default="Q")
    s.add_argument("--matrix", required=True, help="JSON file, row-major QuadInt objects")
    s.add_argument("--strategy", choices=("exhaustive", "kernel_reduce", "auto"), default="exhaustive")
    s.add_argument("--asymptotic", action="store_true")
    s.set_defaults(func=cmd_siegel)

    pade_opts = argparse.ArgumentParser(add_help=False)
    pade_opts.add_argument("--l", help="comma-separated l_j")
    pade_opts.add_argument("--nu", help="override nu_j")
    pade_opts.add_argument("--strategy", choices=("exhaustive", "kernel_reduce", "auto"), default="exhaustive")

    s = sub.add_parser("pade", parents=[common, alpha_opts, pade_opts], help="build a Pade system")
    s.add_argument("action", choices=("build",))
    s.set_defaults(func=cmd_pade, need_alpha=True, need_l=True)

    s = sub.add_parser("forms", parents=[common, alpha_opts, pade_opts], help="evaluate the numerical forms")
    s.add_argument("action", choices=("eval",))
    s.add_argument("--system", help="system JSON written by 'pade build'")
    s.set_defaults(func=cmd_forms)

    s = sub.add_parser("bound", parents=[common, alpha_opts], help="theorem and corollary bounds")
    s.add_argument("which", choices=("thm", "cor22", "cor23", "cor24"))
    s.add_argument("--H", help="comma-separated heights H_1..H_m")
    s.add_argument("--log-H", dest="log_H", help="log H directly, e.g. exp(442)")
    s.add_argument("--gamma", help="cor24: comma-separated distinct rationals")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("compare", parents=[common, alpha_opts], help="prior-work comparison")
    s.add_argument("--corpus", type=int, default=0, help="also check dominance on this many random vectors")
    s.set_defaults(func=cmd_compare, need_alpha=True)

    s = sub.add_parser("example", parents=[common], help="worked example presets")
    s.add_argument("name", choices=("integers", "harmonic", "gaussian_disk"))
    s.add_argument("--m", type=int)
    s.add_argument("--r", help="gaussian_disk radius, e.g. sqrt(2)")
    s.set_defaults(func=cmd_example)

    s = sub.add_parser("check", parents=[common, alpha_opts], help="empirical table over a box of beta")
    s.add_argument("--box", type=int, default=1)
    s.set_defaults(func=cmd_check, need_alpha=True)

    s = sub.add_parser("selftest", parents=[common], help="property suite on the built-in corpus")
    s.add_argument("--quick", action="store_true")
    s.set_defaults(func=cmd_selftest)
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "need_alpha", False) and not args.alpha:
            raise UsageError("--alpha is required")
        if getattr(args, "need_l", False) and not args.l:
            raise UsageError("--l is required")
        result = args.func(args)
    except UsageError as exc:
        print(f"baker-forge: error: {exc}", file=sys.stderr)
        return 2
    report = {
        "schema": SCHEMA,
        "command": args.command,
        "precision": args.precision,
        "ok": bool(result["ok"]),
        "report": jsonable(result["report"]),
    }
    if args.format == "csv" and isinstance(report["report"], dict) and "table" in report["report"]:
        text = render({"table": report["report"]["table"]}, "csv")
    else:
        text = render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if result["ok"] else 1


def main(argv=None) -> int:
    return dispatch(argv)
