"""Command-line front end.

Every artifact embeds the full run configuration and the library version.
Floats are written with 12 significant digits and infinities as ``"inf"``,
so identical configurations give byte-identical files.

Exit status: 0 on success, 1 when a verification finds a counterexample,
2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .closedform import cmo_diversity, hk_diversity, mixed_upper_bounds, tian_diversity
from .finitesnr import QuadratureError, build_ladder, fit_diversity, parse_snr_range
from .model import OperatingPoint, ParameterError, SplitParams
from .oracle import OracleConfig, diversity_pair
from .regions import CMO, HK, TIAN, MixedCmoHk, TimeShareHK, parse_scheme
from .tradeoff import Envelope, classify_mgr, full_envelope, sweep_dgr
from .timeshare import (
    DEFAULT_TOL,
    timeshare_equivalent_split,
    verify_mixed_dominance,
    verify_timeshare_dominance,
)

OUT_DIR_ENV = "ZICDGR_OUT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ORACLE_TOL = 3e-3

_SCHEME_FLAGS = {
    "hk": ("t2", "b"),
    "cmo": (),
    "tian": (),
    "timeshare": ("lam", "b1", "b2", "t21"),
    "mixed": ("lam", "b", "t21", "t22"),
}


class UsageError(Exception):
    pass


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def _clean(obj):
    """Recursively round floats to 12 significant digits for JSON output."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if x == 0.0 else (fmt_float(x) if not math.isfinite(x) else float(fmt_float(x)))
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    return obj


def _run_config(args: argparse.Namespace) -> dict:
    skip = {"out", "func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _json_doc(args, results, counterexamples=(), tolerances=None) -> str:
    doc = {
        "config": _run_config(args),
        "results": results,
        "counterexamples": list(counterexamples),
        "tolerances": tolerances or {},
        "version": __version__,
    }
    return json.dumps(_clean(doc), indent=2) + "\n"


def _csv_doc(args, header: list, rows: list) -> str:
    buf = io.StringIO()
    buf.write(f"# zicdgr {__version__}\n")
    buf.write("# config: " + json.dumps(_clean(_run_config(args)), separators=(",", ":")) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _emit(args, text: str) -> None:
    target = args.out
    if target is None:
        out_dir = os.environ.get(OUT_DIR_ENV)
        if out_dir:
            target = str(Path(out_dir) / f"{args.command}.{args.format}")
    if target is None:
        sys.stdout.write(text)
        return
    path = Path(target)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _op(args) -> OperatingPoint:
    return OperatingPoint(args.r1, args.r2, args.beta)


def _scheme(args, op):
    need = _SCHEME_FLAGS[args.scheme]
    missing = [f"--{n}" for n in need if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"scheme {args.scheme!r} requires {', '.join(missing)}")
    return parse_scheme(args.scheme, op, **{n: getattr(args, n) for n in need})


def _json_only(args) -> None:
    if args.format != "json":
        raise UsageError(f"--format {args.format} is not available for {args.command}; reports are JSON only")


# --- commands ----------------------------------------------------------------


def cmd_diversity(args) -> int:
    _json_only(args)
    op = _op(args)
    scheme = _scheme(args, op)
    if isinstance(scheme, HK):
        results = hk_diversity(op, scheme.split).as_dict()
    elif isinstance(scheme, CMO):
        results = dict(zip(("d1", "d2"), cmo_diversity(op).as_tuple()))
    elif isinstance(scheme, TIAN):
        results = dict(zip(("d1", "d2"), tian_diversity(op).as_tuple()))
    elif isinstance(scheme, TimeShareHK):
        sp = timeshare_equivalent_split(scheme.params, op)
        results = {"t_c": sp.t2, "b_c": sp.b, **hk_diversity(op, sp).as_dict()}
    else:
        ub = mixed_upper_bounds(op, scheme.params)
        results = {**ub.extra, "d1_bound": ub.d1, "d2_bound": ub.d2}
    tol = {}
    if args.method == "oracle":
        cfg = OracleConfig.for_point(op, grid_step=args.resolution)
        pair = diversity_pair(op, scheme, cfg)
        results["oracle_d1"], results["oracle_d2"] = pair.as_tuple()
        tol = {"oracle": 3.0 * cfg.grid_step}
    _emit(args, _json_doc(args, results, tolerances=tol))
    return EXIT_OK


def cmd_curve(args) -> int:
    op = _op(args)
    curve = sweep_dgr(op, args.resolution) if args.kind == "sweep" else full_envelope(op, args.resolution)
    rows = [(p.d1, p.d2, p.t2, p.b, p.segment) for p in curve.points]
    if args.format == "csv":
        _emit(args, _csv_doc(args, ["d1", "d2", "t2", "b", "segment"], rows))
    else:
        results = {
            "breakpoints": curve.breakpoints,
            "points": [dict(zip(("d1", "d2", "t2", "b", "segment"), r)) for r in rows],
        }
        _emit(args, _json_doc(args, results))
    return EXIT_OK


def cmd_classify(args) -> int:
    _json_only(args)
    case = classify_mgr(_op(args))
    results = {"case": case.tag, "feasible_region": case.description}
    _emit(args, _json_doc(args, results))
    if args.out is not None or os.environ.get(OUT_DIR_ENV):
        print(case.tag)
    return EXIT_OK


def cmd_verify_oracle(args) -> int:
    _json_only(args)
    rng = np.random.Generator(np.random.Philox(key=args.seed))
    bad = []
    worst = 0.0
    for i in range(args.samples):
        u = rng.random(5)
        op = OperatingPoint(u[0], u[1], u[2])
        sp = SplitParams(op, u[3] * op.r2, u[4] * (op.beta + op.r1 + op.r2 + 1.0))
        cfg = OracleConfig.for_point(op, grid_step=args.resolution)
        hk = hk_diversity(op, sp)
        for name, scheme, ref in (
            ("hk", HK(sp), (hk.d1, hk.d2)),
            ("cmo", CMO(), cmo_diversity(op).as_tuple()),
            ("tian", TIAN(), tian_diversity(op).as_tuple()),
        ):
            got = diversity_pair(op, scheme, cfg).as_tuple()
            err = max(abs(got[0] - ref[0]), abs(got[1] - ref[1]))
            worst = max(worst, err)
            if err > ORACLE_TOL:
                bad.append({"index": i, "scheme": name, "op": op.as_dict(),
                            "t2": sp.t2, "b": sp.b, "closed_form": ref, "oracle": got})
    results = {"samples": args.samples, "max_abs_error": worst, "passed": not bad}
    _emit(args, _json_doc(args, results, bad, {"abs": ORACLE_TOL}))
    return EXIT_FAIL if bad else EXIT_OK


def _cmd_dominance(args, verify) -> int:
    _json_only(args)
    op = _op(args)
    env = Envelope(op)
    rep = verify(op, args.samples, args.seed, OracleConfig.for_point(op), env, DEFAULT_TOL)
    results = {
        "kind": rep.kind, "op": op.as_dict(), "samples": rep.samples, "seed": rep.seed,
        "passed": rep.passed, "n_counterexamples": len(rep.counterexamples),
        "n_mismatches": len(rep.mismatches), "max_excess": rep.max_excess,
        "mismatches": rep.mismatches,
    }
    _emit(args, _json_doc(args, results, rep.counterexamples, {"dominance": DEFAULT_TOL}))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify_timeshare(args) -> int:
    return _cmd_dominance(args, verify_timeshare_dominance)


def cmd_verify_mixed(args) -> int:
    return _cmd_dominance(args, verify_mixed_dominance)


def cmd_ladder(args) -> int:
    op = _op(args)
    scheme = _scheme(args, op)
    pts = parse_snr_range(args.snr_db)
    try:
        lad = build_ladder(op, scheme, pts, args.method, (1, 2), args.trials, args.seed, args.tol)
    except QuadratureError as exc:
        raise UsageError(f"quadrature failed: {exc}") from exc
    rows = [(s, lad.probs[1][i], lad.probs[2][i], args.method) for i, s in enumerate(lad.points_db)]
    if args.format == "csv":
        _emit(args, _csv_doc(args, ["snr_db", "p_out_rx1", "p_out_rx2", "method"], rows))
        return EXIT_OK
    fits = {}
    for rx in (1, 2):
        try:
            d_hat, res = fit_diversity(lad, rx)
            fits[f"rx{rx}"] = {"d_hat": d_hat, "residual": res}
        except ParameterError as exc:
            fits[f"rx{rx}"] = {"error": str(exc)}
    results = {
        "points": [dict(zip(("snr_db", "p_out_rx1", "p_out_rx2", "method"), r)) for r in rows],
        "fit": fits,
    }
    if lad.half_widths:
        results["half_widths"] = {f"rx{rx}": hw for rx, hw in lad.half_widths.items()}
    _emit(args, _json_doc(args, results))
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0.0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be a finite value > 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zicdgr", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"zicdgr {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="json", op=True):
        if op:
            sp.add_argument("--r1", type=float, required=True)
            sp.add_argument("--r2", type=float, required=True)
            sp.add_argument("--beta", type=float, required=True)
        sp.add_argument("--out", default=None, help=f"output file (default: ${OUT_DIR_ENV}/<command>.<format> or stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default=fmt_default)

    def scheme_flags(sp):
        sp.add_argument("--scheme", choices=tuple(_SCHEME_FLAGS), required=True)
        for name in ("t2", "b", "lam", "b1", "b2", "t21", "t22"):
            sp.add_argument(f"--{name}", type=float, default=None)

    s = sub.add_parser("diversity", help="closed-form (and optionally oracle) diversities")
    common(s)
    scheme_flags(s)
    s.add_argument("--method", choices=("closed", "oracle"), default="closed")
    s.add_argument("--resolution", type=_positive_float, default=1e-3)
    s.set_defaults(func=cmd_diversity)

    s = sub.add_parser("curve", help="optimal tradeoff curve or raw sweep")
    common(s, "csv")
    s.add_argument("--resolution", type=_positive_float, default=1e-3)
    s.add_argument("--kind", choices=("envelope", "sweep"), default="envelope")
    s.set_defaults(func=cmd_curve)

    s = sub.add_parser("classify", help="rate-region case of an operating point")
    common(s)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("verify-oracle", help="random closed-form vs oracle comparison")
    common(s, op=False)
    s.add_argument("--samples", type=_positive_int, default=200)
    s.add_argument("--seed", type=_u64, default=0)
    s.add_argument("--resolution", type=_positive_float, default=1e-3)
    s.set_defaults(func=cmd_verify_oracle)

    for name, fn in (("verify-timeshare", cmd_verify_timeshare), ("verify-mixed", cmd_verify_mixed)):
        s = sub.add_parser(name, help="random dominance check against the fixed-split envelope")
        common(s)
        s.add_argument("--samples", type=_positive_int, default=1000)
        s.add_argument("--seed", type=_u64, default=0)
        s.set_defaults(func=fn)

    s = sub.add_parser("ladder", help="finite-SNR outage probabilities and fitted slopes")
    common(s, "csv")
    scheme_flags(s)
    s.add_argument("--snr-db", required=True, help="start:step:stop in dB, inclusive")
    s.add_argument("--method", choices=("quadrature", "montecarlo"), default="quadrature")
    s.add_argument("--trials", type=_positive_int, default=10**6)
    s.add_argument("--seed", type=_u64, default=0)
    s.add_argument("--tol", type=_positive_float, default=1e-12)
    s.set_defaults(func=cmd_ladder)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParameterError) as exc:
        print(f"zicdgr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
