"""Command-line entry point: ``prymtheta <verb> [options]``.

Exit status is 0 when every computed check passes, 1 when a check fails
and 2 for usage or validation errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import List, Optional

from . import __version__
from .cyclic import (CyclicCurveConfig, GluingData, ShapeParseError, format_shape,
                     h0_combinatorial, h0_exact, h0_generic, martens_witness, parse_shape,
                     section_decomposition, sing_k_strata, sing_strata)
from .intersection import CaseTag, chern_mather_theta_pipeline, gauss_degree, mather_closed_form
from .local import (blowup_local_type, cc_cycle, diagonal_determinant, hessian_determinant,
                    milnor_parity, ramification_hessian)
from .verify import SCHEMA_VERSION, report_json, run_all

OUT_DIR_ENV = "PRYMTHETA_OUT_DIR"


class UsageError(Exception):
    pass


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_rationals(text: str) -> List[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational list {text!r}: {exc}") from None


def _parse_ints(text: str) -> tuple:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"bad integer list {text!r}") from None


def _require_g(g: Optional[int], least: int = 3) -> int:
    if g is None:
        raise UsageError("--g is required")
    if g < least:
        raise UsageError(f"--g must be >= {least}, got {g}")
    return g


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _table(rows: List[List[str]], header: List[str]) -> str:
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(lines) + "\n"


def _csv(rows: List[List[str]], header: List[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- verbs --------------------------------------------------------------------

def cmd_mather(args) -> int:
    g = _require_g(args.g)
    case = CaseTag.parse(args.case)
    rep = chern_mather_theta_pipeline(g, case)
    ok = rep.match and all(c == mather_closed_form(g, r) for r, c in rep.mather_coefficients)
    rows = [[str(r), _frac(c), _frac(mather_closed_form(g, r)), str(c == mather_closed_form(g, r)).lower()]
            for r, c in rep.mather_coefficients]
    header = ["r", "coefficient", "binomial", "agrees"]
    if args.format == "json":
        text = json.dumps({"schema_version": SCHEMA_VERSION, **rep.to_dict()}, indent=2) + "\n"
    elif args.format == "csv":
        text = _csv(rows, header)
    else:
        text = (f"g={g} case={case.value} match={str(rep.match).lower()} (modulo h'^2)\n"
                f"c_M,r = coefficient * h^r xi^(g-r)\n" + _table(rows, header))
    _emit(text, args.out)
    return 0 if ok else 1


def cmd_gauss(args) -> int:
    g = _require_g(args.g)
    case = CaseTag.parse(args.case)
    deg = gauss_degree(g, case)
    expected = comb(2 * g - 2, g - 1)
    if args.format == "json":
        text = json.dumps({"schema_version": SCHEMA_VERSION, "g": g, "case": case.value,
                           "gauss_degree": deg, "binomial": expected}) + "\n"
    elif args.format == "csv":
        text = _csv([[str(g), case.value, str(deg), str(expected)]], ["g", "case", "gauss_degree", "binomial"])
    else:
        text = f"gauss degree at g={g}: {deg} (C({2 * g - 2},{g - 1}) = {expected})\n"
    _emit(text, args.out)
    return 0 if deg == expected else 1


def cmd_h0(args) -> int:
    try:
        cfg, shape = parse_shape(args.shape)
    except ShapeParseError as exc:
        raise UsageError(f"shape parse error: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"invalid shape: {exc}") from None
    if args.gluing is not None:
        lams = _parse_rationals(args.gluing)
        if len(lams) != cfg.n:
            raise UsageError(f"need {cfg.n} gluing scalars, got {len(lams)}")
        try:
            glue = GluingData(tuple(lams))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        value = h0_exact(cfg, shape, glue)
        mode = "exact"
        count = h0_combinatorial(cfg, shape, glue.product == 1)
    else:
        value = h0_generic(cfg, shape)
        mode = "generic"
        count = h0_combinatorial(cfg, shape, False)
    dec = section_decomposition(cfg, shape)
    if args.format == "json":
        text = json.dumps({
            "schema_version": SCHEMA_VERSION,
            "shape": format_shape(cfg, shape),
            "mode": mode,
            "h0": value,
            "combinatorial": count,
            "single_component": {str(k): v for k, v in dec["single"].items()},
            "segments": [list(s) for s in dec["segments"]],
            "whole_cycle_candidate": dec["whole_cycle"],
        }) + "\n"
    elif args.format == "csv":
        text = _csv([[format_shape(cfg, shape), mode, str(value), str(count)]],
                    ["shape", "mode", "h0", "combinatorial"])
    else:
        lines = [f"h0 ({mode}) = {value}"]
        for i, v in dec["single"].items():
            lines.append(f"  component {i}: {v} section(s) vanishing at both nodes")
        for i, j in dec["segments"]:
            lines.append(f"  segment {i} -> {j}: 1 section")
        if dec["whole_cycle"]:
            lines.append("  whole cycle: 1 section iff the gluing product is 1")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if value == count else 1


def _config(args) -> CyclicCurveConfig:
    if args.d:
        try:
            return CyclicCurveConfig(_parse_ints(args.d))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    g = _require_g(args.g, 1)
    case = CaseTag.parse(args.case)
    return CyclicCurveConfig((g,) if case is CaseTag.D_G else (1, g - 1))


def cmd_martens(args) -> int:
    cfg = _config(args)
    rs = [args.r] if args.r is not None else list(range(1, cfg.g // 2 + 1))
    if not rs:
        raise UsageError(f"no r with 0 < 2r <= {cfg.g}")
    rows, ok = [], True
    for r in rs:
        try:
            dim, shape, special = martens_witness(cfg, r)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        expected = cfg.g - 2 * r - 1
        ok &= dim == expected
        rows.append([str(r), str(dim), str(expected),
                     format_shape(cfg, shape) if shape else "-",
                     "-" if special is None else ("special" if special else "generic")])
    header = ["r", "dim", "d-2r-1", "witness", "gluing"]
    if args.format == "json":
        text = json.dumps({"schema_version": SCHEMA_VERSION, "d": list(cfg.d),
                           "rows": [dict(zip(header, r)) for r in rows]}, indent=2) + "\n"
    elif args.format == "csv":
        text = _csv(rows, header)
    else:
        text = f"d={cfg.d} (dim -1 means empty)\n" + _table(rows, header)
    _emit(text, args.out)
    return 0 if ok else 1


def cmd_strata(args) -> int:
    if args.k is not None:
        g = _require_g(args.g)
        strata = sing_k_strata(g, CaseTag.parse(args.case), args.k)
    else:
        strata = sing_strata(_config(args))
    header = ["family", "indices", "dim_picN", "dim_picC", "exceptional", "label"]
    rows = [[s.family, ",".join(map(str, s.indices)), str(s.dim_picN), str(s.dim_picC),
             str(s.exceptional).lower(), s.label] for s in strata]
    if args.format == "json":
        text = json.dumps([s.to_dict() for s in strata], indent=2) + "\n"
    elif args.format == "csv":
        text = _csv(rows, header)
    else:
        text = _table(rows, header) if rows else "no strata\n"
    _emit(text, args.out)
    return 0


def cmd_local(args) -> int:
    g = _require_g(args.g, 1)
    q = _parse_rationals(args.q) if args.q else [Fraction(i) for i in range(1, g + 1)]
    if len(q) != g:
        raise UsageError(f"--q needs {g} values")
    H = ramification_hessian(q)
    det = hessian_determinant(H)
    out = {
        "schema_version": SCHEMA_VERSION,
        "g": g,
        "hessian_diagonal": [_frac(H[i][i]) for i in range(g)],
        "hessian_determinant": _frac(det),
        "expected_determinant": _frac(diagonal_determinant(q)),
        "milnor_parity": milnor_parity(g),
    }
    ok = det == diagonal_determinant(q)
    if g >= 4:
        cc = cc_cycle(g, ["x"])
        out["cc_point_multiplicity"] = cc.point_contributions[0][1]
        ok &= cc.point_contributions[0][1] == 1 + milnor_parity(g)
    if args.zero is not None or args.infty is not None:
        try:
            t = blowup_local_type(args.zero or 0, args.infty or 0, args.lambda_zero, args.mu_zero)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out["local_type"] = {"k": t.k, "l": t.l, "smooth": t.is_smooth, "on_blowup": t.on_blowup}
    if args.format == "json":
        text = json.dumps(out, indent=2) + "\n"
    elif args.format == "csv":
        keys = [k for k in out if not isinstance(out[k], (list, dict))]
        text = _csv([[str(out[k]) for k in keys]], keys)
    else:
        text = "".join(f"{k}: {v}\n" for k, v in out.items() if k != "schema_version")
    _emit(text, args.out)
    return 0 if ok else 1


def cmd_verify_all(args) -> int:
    max_g = args.max_g
    if max_g < 4:
        raise UsageError("--max-g must be >= 4")
    results = run_all(max_g, args.seed)
    blob = report_json(results, max_g, args.seed, timings=args.timings)
    target = args.out
    if target is None and os.environ.get(OUT_DIR_ENV):
        target = str(Path(os.environ[OUT_DIR_ENV]) / "verify-report.json")
    if target:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        Path(target).write_text(blob)
    if args.format == "json":
        if not target:
            sys.stdout.write(blob)
    else:
        rows = [[s.name, c.name, "pass" if c.ok else "FAIL", c.detail] for s in results for c in s.checks]
        if args.format == "csv":
            sys.stdout.write(_csv(rows, ["suite", "check", "status", "detail"]))
        else:
            sys.stdout.write(_table(rows, ["suite", "check", "status", "detail"]))
            overall = all(s.ok for s in results)
            sys.stdout.write(f"overall: {'pass' if overall else 'FAIL'}\n")
    return 0 if all(s.ok for s in results) else 1


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prymtheta", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, default_format="text"):
        sp.add_argument("--format", choices=("json", "csv", "text"), default=default_format)
        sp.add_argument("--out", metavar="FILE")

    sp = sub.add_parser("mather", help="Chern-Mather coefficients of the Prym theta divisor")
    sp.add_argument("--g", type=int)
    sp.add_argument("--case", default="g", choices=("g", "1g-1"))
    common(sp)
    sp.set_defaults(func=cmd_mather)

    sp = sub.add_parser("gauss-degree", help="degree of the Gauss map")
    sp.add_argument("--g", type=int)
    sp.add_argument("--case", default="g", choices=("g", "1g-1"))
    common(sp)
    sp.set_defaults(func=cmd_gauss)

    sp = sub.add_parser("h0", help="sections of a line bundle given by its shape")
    sp.add_argument("shape", help='e.g. "n=2; d=1,1; comp1: k=0,a0=1,ainf=0; comp2: k=0,a0=0,ainf=1"')
    sp.add_argument("--gluing", help="comma separated nonzero rationals, one per node")
    common(sp)
    sp.set_defaults(func=cmd_h0)

    sp = sub.add_parser("martens", help="dimension of W^r by stratum enumeration")
    sp.add_argument("--d", help="multidegree, e.g. 1,4")
    sp.add_argument("--g", type=int)
    sp.add_argument("--case", default="g", choices=("g", "1g-1"))
    sp.add_argument("--r", type=int)
    common(sp)
    sp.set_defaults(func=cmd_martens)

    sp = sub.add_parser("strata", help="singular-locus families")
    sp.add_argument("--d", help="multidegree, e.g. 2,2,2")
    sp.add_argument("--g", type=int)
    sp.add_argument("--case", default="g", choices=("g", "1g-1"))
    sp.add_argument("--k", type=int, help="list Sing_k components instead")
    common(sp)
    sp.set_defaults(func=cmd_strata)

    sp = sub.add_parser("local", help="Hessian, CC parity and blowup local types")
    sp.add_argument("--g", type=int)
    sp.add_argument("--q", help="branch values Q_i, comma separated")
    sp.add_argument("--zero", type=int, help="number of P_i^0 in the divisor")
    sp.add_argument("--infty", type=int, help="number of P_i^inf in the divisor")
    sp.add_argument("--lambda-zero", action="store_true")
    sp.add_argument("--mu-zero", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_local)

    sp = sub.add_parser("verify-all", help="run every verification suite")
    sp.add_argument("--max-g", type=int, default=10)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--timings", action="store_true", help="include per-suite timings in the report")
    common(sp)
    sp.set_defaults(func=cmd_verify_all)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"prymtheta {args.verb}: error: {exc}", file=sys.stderr)
        return 2
