"""Command-line front end.

Subcommands map one-to-one onto the experiment classes: EB checks,
SDP bounds, optimal-input searches, parameter sweeps, strategy
comparison, the two conjecture testers and the transpose-simulator
finder.  Tabular results are emitted as CSV (or JSON carrying the same
rows); scalar results as JSON.  Identical argv + seed produce
byte-identical output regardless of --workers.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from . import analysis, sdp
from .channels import find_transpose_simulator, is_eb, choi, parse_channel_spec
from .entanglement import StateForm

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def fmt(x) -> str:
    """12 significant digits, shortest round-trip not required."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _json_value(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, float):
        return float(f"{x:.12g}") if math.isfinite(x) else None
    if isinstance(x, np.ndarray):
        return [[[v.real, v.imag] for v in row] for row in x]
    return x


def parse_grid(spec: str) -> list[float]:
    """Parse ``lo:hi:step`` into an inclusive ascending grid."""
    try:
        lo, hi, step = (float(t) for t in spec.split(":"))
    except ValueError:
        raise ValueError(f"malformed grid spec '{spec}', expected lo:hi:step") from None
    if step <= 0 or hi < lo:
        raise ValueError(f"grid spec '{spec}' must be ascending with step > 0")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [lo + i * step for i in range(n + 1)]


def _write(out_path, text):
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_table(header, rows, args, summary=None):
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
        _write(args.out, buf.getvalue())
    else:
        payload = dict(summary or {})
        payload["rows"] = [
            {k: _json_value(v) for k, v in zip(header, row)} for row in rows
        ]
        _write(args.out, json.dumps(payload, indent=2) + "\n")


def _emit_json(obj, args):
    _write(args.out, json.dumps({k: _json_value(v) for k, v in obj.items()}, indent=2) + "\n")


def _parallel_map(fn, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (8 * workers))))


# --- subcommand handlers ---------------------------------------------------


def cmd_eb_check(args):
    ch = parse_channel_spec(args.channel)
    flag, lam = is_eb(choi(ch))
    _emit_json({"eb": flag, "lambda_min": lam}, args)
    return EXIT_OK


def cmd_sdp_bound(args):
    res = sdp.solve(sdp.build_problem(parse_channel_spec(args.left), parse_channel_spec(args.right)))
    if res.status is sdp.SolveStatus.FAILED:
        print("error: SDP solver failed", file=sys.stderr)
        return EXIT_SOLVER
    _emit_json({"bound": res.bound, "status": res.status.value, "solver_gap": res.solver_gap}, args)
    return EXIT_OK


def cmd_optimal_input(args):
    form = StateForm(args.form)
    best, value = analysis.optimal_input_search(
        parse_channel_spec(args.left), parse_channel_spec(args.right), args.grid_step, form
    )
    _emit_json({"c": best.c, "s1": best.s1, "s2": best.s2, "value": value}, args)
    return EXIT_OK


def _sweep_cell(point, args):
    v1, v2 = point
    form = StateForm(args.form) if args.form else None
    return analysis.sweep_point(args.family1, args.family2, v1, v2, args.grid_step, form)


def cmd_sweep(args):
    grid1 = parse_grid(args.grid1)
    grid2 = parse_grid(args.grid2)
    points = [(v1, v2) for v1 in grid1 for v2 in grid2]
    records = _parallel_map(partial(_sweep_cell, args=args), points, args.workers)
    header = [
        "param1", "param2", "grid_min_pt_eig", "sdp_bound",
        "opt_c", "opt_s1", "opt_s2", "tight", "is_ea",
    ]
    rows = [
        [
            r.params["param1"], r.params["param2"], r.grid_min_pt_eig, r.sdp_bound,
            r.optimal_input.c, r.optimal_input.s1, r.optimal_input.s2, r.tight, r.is_ea,
        ]
        for r in records
    ]
    _emit_table(header, rows, args)
    return EXIT_OK


def cmd_compare(args):
    rec = analysis.strategy_compare(parse_channel_spec(args.left), parse_channel_spec(args.right))
    if math.isnan(rec.midway_bound):
        print("error: SDP solver failed", file=sys.stderr)
        return EXIT_SOLVER
    _emit_json(
        {
            "edge_eb": rec.edge_eb,
            "edge_lambda": rec.edge_lambda,
            "midway_bound": rec.midway_bound,
            "midway_ea_consistent": rec.midway_ea_consistent,
        },
        args,
    )
    return EXIT_OK


def cmd_conjecture1(args):
    seeds = [args.seed + i for i in range(args.trials)]
    trials = _parallel_map(analysis.conjecture1_trial, seeds, args.workers)
    trials.sort(key=lambda t: t.seed)
    header = ["seed", "lhs", "rhs", "holds"]
    rows = [[t.seed, t.lhs, t.rhs, t.holds] for t in trials]
    conclusive = [t for t in trials if not t.inconclusive]
    summary = {
        "trials": len(trials),
        "violations": sum(1 for t in conclusive if not t.holds),
        "inconclusive": len(trials) - len(conclusive),
    }
    _emit_table(header, rows, args, summary=summary)
    return EXIT_OK


def cmd_conjecture2(args):
    scan = analysis.conjecture2_scan(args.n_step)
    if any(math.isnan(b) for _, _, b in scan):
        print("error: SDP solver failed during scan", file=sys.stderr)
        return EXIT_SOLVER
    _emit_table(["n", "gamma", "sdp_bound"], [list(row) for row in scan], args)
    return EXIT_OK


def cmd_transpose_sim(args):
    ch = parse_channel_spec(args.channel)
    sim = find_transpose_simulator(ch)
    _emit_json(
        {"a": sim.a, "b": sim.b, "residual": sim.residual, "success": sim.success},
        args,
    )
    return EXIT_OK


# --- argument plumbing -----------------------------------------------------


def _load_config(argv):
    if "--config" not in argv:
        return {}
    path = argv[argv.index("--config") + 1]
    config = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            config[key.strip().replace("-", "_")] = value.strip()
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entdist", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tabular=False):
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"),
                       default="csv" if tabular else "json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        p.add_argument("--config", default=None, help="flat key = value defaults file")

    p = sub.add_parser("eb-check", help="PPT test on a channel's Choi matrix")
    p.add_argument("--channel", required=True)
    common(p)
    p.set_defaults(fn=cmd_eb_check)

    for alias in ("ea-sdp", "sdp-bound"):
        p = sub.add_parser(alias, help="SDP lower bound for a channel pair")
        p.add_argument("--left", required=True)
        p.add_argument("--right", required=True)
        common(p)
        p.set_defaults(fn=cmd_sdp_bound)

    p = sub.add_parser("optimal-input", help="grid search for the best input state")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--grid-step", type=float, default=0.01)
    p.add_argument("--form", choices=[f.value for f in StateForm],
                   default=StateForm.SCHMIDT_S1.value)
    common(p)
    p.set_defaults(fn=cmd_optimal_input)

    p = sub.add_parser("sweep", help="grid sweep over two channel parameters")
    p.add_argument("--family1", required=True)
    p.add_argument("--grid1", required=True, help="lo:hi:step")
    p.add_argument("--family2", required=True)
    p.add_argument("--grid2", required=True, help="lo:hi:step")
    p.add_argument("--grid-step", type=float, default=0.01)
    p.add_argument("--form", choices=[f.value for f in StateForm], default=None)
    common(p, tabular=True)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("compare", help="edge vs midway source placement")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    common(p)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("conjecture1", help="random-channel inequality trials")
    p.add_argument("--trials", type=int, default=10_000)
    common(p, tabular=True)
    p.set_defaults(fn=cmd_conjecture1)

    p = sub.add_parser("conjecture2", help="SDP scan along the GAD boundary curve")
    p.add_argument("--n-step", type=float, default=0.001)
    common(p, tabular=True)
    p.set_defaults(fn=cmd_conjecture2)

    p = sub.add_parser("transpose-sim", help="numerical transpose simulator search")
    p.add_argument("--channel", required=True)
    common(p)
    p.set_defaults(fn=cmd_transpose_sim)

    return parser


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        config = _load_config(argv)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for key, value in config.items():
        if hasattr(args, key) and f"--{key.replace('_', '-')}" not in argv:
            current = getattr(args, key)
            if isinstance(current, int) and not isinstance(current, bool):
                value = int(value)
            elif isinstance(current, float):
                value = float(value)
            setattr(args, key, value)
    try:
        return args.fn(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
