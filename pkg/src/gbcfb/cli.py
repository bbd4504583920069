"""Command-line front end.

Subcommands: region, threshold, map, rates, verify, search, simulate.
CSV outputs use 12 significant digits, '.' decimals, LF line endings; JSON
outputs carry {"tool_version", "seed", "tolerances"} provenance.  Exit codes:
0 success (all applicable inequality steps pass for `verify`), 1 verification
failure, 2 usage error, 3 IO/parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .channels import ScalarChannel, load_channel
from .regions import boundary
from .schemes import (build_joint_cov, build_vector_joint_cov, evaluate,
                      scheme_from_obj, simulate_paths,
                      verify_scalar_converse, verify_vector_converse)
from .search import SearchConfig, certify, search
from .threshold import BadGridSpec, phase_map, threshold

DEFAULT_TOL = 1e-9


class UsageError(ValueError):
    """Flag combination or value outside the supported domain."""


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _write_text(out: str, text: str) -> None:
    if out == "stdout" or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _emit_json(out: str, payload: dict, seed, tol) -> None:
    doc = {"tool_version": __version__, "seed": seed, "tolerances": {"tol": tol}}
    doc.update(payload)
    _write_text(out, json.dumps(doc, indent=2) + "\n")


def _json_real(v):
    if v is None:
        return None
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _load_scheme(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return scheme_from_obj(json.load(fh))


def _cmd_region(args) -> int:
    ch = load_channel(args.channel)
    if args.points < 2:
        raise UsageError(f"--points must be >= 2, got {args.points}")
    pts = boundary(ch, args.points)
    lines = ["theta,r1_bits,r2_bits"]
    lines += [f"{_fmt(pt.theta)},{_fmt(pt.rates.r1_bits)},{_fmt(pt.rates.r2_bits)}"
              for pt in pts]
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.fig:
        from .plots import render_region_figure
        render_region_figure(pts, args.fig)
    return 0


def _cmd_threshold(args) -> int:
    ch = load_channel(args.channel)
    if not isinstance(ch, ScalarChannel):
        raise ValueError("threshold analysis needs a scalar channel")
    rep = threshold(ch)
    payload = {
        "applies": {"in_class": rep.applies.in_class, "reason": rep.applies.reason},
        "threshold_sigma_fb_sq": _json_real(rep.threshold_sigma_fb_sq),
        "alpha": "perfect_feedback" if (rep.applies.in_class and rep.alpha is None)
                 else _json_real(rep.alpha),
        "residual_var": _json_real(rep.residual_var),
        "verdict": rep.verdict.value,
    }
    _emit_json(args.out, payload, None, args.tol)
    return 0


def _cmd_map(args) -> int:
    try:
        rows = phase_map(args.xmax, args.ymax, args.step)
    except BadGridSpec as exc:
        raise UsageError(str(exc)) from exc
    lines = ["x,y,useless"]
    lines += [f"{_fmt(r.x)},{_fmt(r.y)},{1 if r.useless else 0}" for r in rows]
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.fig:
        from .plots import render_phase_map_figure
        render_phase_map_figure(rows, args.fig)
    return 0


def _cmd_rates(args) -> int:
    ch = load_channel(args.channel)
    s = _load_scheme(args.scheme)
    ev = evaluate(s, ch)
    payload = {"rates": {"r1_bits": ev.rates.r1_bits, "r2_bits": ev.rates.r2_bits},
               "avg_power": ev.avg_power, "n": s.horizon_n}
    _emit_json(args.out, payload, None, args.tol)
    return 0


def _cmd_verify(args) -> int:
    ch = load_channel(args.channel)
    s = _load_scheme(args.scheme)
    if isinstance(ch, ScalarChannel):
        rep = verify_scalar_converse(s, ch, tol=args.tol)
    else:
        rep = verify_vector_converse(s, ch, tol=args.tol)
    _emit_json(args.out, rep.to_obj(), None, args.tol)
    return 0 if rep.all_applicable_pass else 1


def _cmd_search(args) -> int:
    ch = load_channel(args.channel)
    cfg = SearchConfig(horizon_n=args.n, mu=args.mu, budget=args.budget,
                       seed=args.seed, tol=args.tol)
    res = certify(search(ch, cfg), ch)
    _emit_json(args.out, res.to_obj(), args.seed, args.tol)
    return 0


def _cmd_simulate(args) -> int:
    ch = load_channel(args.channel)
    s = _load_scheme(args.scheme)
    if args.samples < 1:
        raise UsageError(f"--samples must be >= 1, got {args.samples}")
    sim = simulate_paths(s, ch, args.samples, args.seed)
    if isinstance(ch, ScalarChannel):
        analytic = build_joint_cov(s, ch)
    else:
        analytic = build_vector_joint_cov(s, ch)
    diff = sim.cov - analytic.entries
    denom = float((analytic.entries ** 2).sum()) ** 0.5
    rel = float((diff ** 2).sum()) ** 0.5 / denom if denom > 0 else float("nan")
    ev = evaluate(s, ch)
    payload = {"samples": args.samples,
               "rel_frobenius_error": rel,
               "avg_power_empirical": sim.avg_power,
               "avg_power_analytic": ev.avg_power}
    _emit_json(args.out, payload, args.seed, args.tol)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbcfb",
        description="Gaussian broadcast channel with passive feedback: regions, "
                    "thresholds, linear-scheme rates, converse verification, and search.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, channel=False, scheme=False, seeded=False):
        if channel:
            p.add_argument("--channel", required=True, help="channel JSON path")
        if scheme:
            p.add_argument("--scheme", required=True, help="scheme JSON path")
        if seeded:
            p.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                       help="inequality pass tolerance in nats")
        p.add_argument("--out", default="stdout", help="output path or 'stdout'")

    p = sub.add_parser("region", help="no-feedback region boundary CSV")
    add_common(p, channel=True)
    p.add_argument("--points", type=int, default=101, help="number of theta samples")
    p.add_argument("--fig", default=None, help="also render the boundary figure to this path")
    p.set_defaults(func=_cmd_region)

    p = sub.add_parser("threshold", help="feedback-noise threshold report JSON")
    add_common(p, channel=True)
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("map", help="feedback-useless phase map CSV (rho = 0)")
    add_common(p)
    p.add_argument("--xmax", type=float, default=5.2)
    p.add_argument("--ymax", type=float, default=5.2)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--fig", default=None, help="also render the phase map figure to this path")
    p.set_defaults(func=_cmd_map)

    p = sub.add_parser("rates", help="exact rate proxies of a scheme, JSON")
    add_common(p, channel=True, scheme=True)
    p.set_defaults(func=_cmd_rates)

    p = sub.add_parser("verify", help="converse chain verification report JSON")
    add_common(p, channel=True, scheme=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("search", help="randomized boundary probing, JSON result")
    add_common(p, channel=True, seeded=True)
    p.add_argument("--n", type=int, default=8, help="scheme horizon")
    p.add_argument("--mu", type=float, default=0.5, help="objective weight on R1")
    p.add_argument("--budget", type=int, default=1000, help="evaluate() call budget")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("simulate", help="Monte-Carlo vs analytic covariance comparison JSON")
    add_common(p, channel=True, scheme=True, seeded=True)
    p.add_argument("--samples", type=int, default=100000)
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
