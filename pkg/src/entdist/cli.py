"""Command-line front end emitting plot-ready CSV/JSON.

Every subcommand is deterministic: identical invocations produce
byte-identical output.  Grids are given as ``min:max:points``.  Defaults
can be overridden with the environment variables ``ENTDIST_GRID_POINTS``
(grid density where a command has a default grid) and ``ENTDIST_OUTDIR``
(directory prepended to relative output paths).
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import chain, codes, convergence, decoder, efficiency, hybrid, purify
from ._output import emit, write_table

__all__ = ["main", "build_parser"]


def _env_points(default: int) -> int:
    value = os.environ.get("ENTDIST_GRID_POINTS")
    if value is None:
        return default
    try:
        points = int(value)
        if points < 1:
            raise ValueError
    except ValueError:
        raise SystemExit(f"ENTDIST_GRID_POINTS must be a positive integer, got {value!r}")
    return points


def _parse_grid(spec: str):
    parts = spec.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"grid must be 'min:max:points', got {spec!r}"
        )
    try:
        lo, hi = float(parts[0]), float(parts[1])
        points = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed grid {spec!r}") from None
    if points < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad grid range {spec!r}")
    return np.linspace(lo, hi, points)


def _out_path(arg: str | None) -> Path | None:
    if arg is None:
        return None
    path = Path(arg)
    outdir = os.environ.get("ENTDIST_OUTDIR")
    if outdir and not path.is_absolute():
        path = Path(outdir) / path
    return path


def _chunks(seq, n_chunks):
    size = max(1, (len(seq) + n_chunks - 1) // n_chunks)
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def _purify_rows_chunk(args):
    grid_chunk, protocol, twirled, rounds = args
    rows = []
    for f in grid_chunk:
        trace = purify.run_rounds(protocol, rounds, f_in=float(f), twirled=twirled)
        rows.extend(_trace_rows(float(f), trace))
    return rows


def _trace_rows(f_label, trace):
    rows = []
    for i, rec in enumerate(trace.rounds, start=1):
        d = rec.dist
        rows.append(
            [f_label, i, d.p_i, d.p_x, d.p_y, d.p_z, rec.p_discard, rec.p_total_discard, rec.rate]
        )
    return rows


def _scan_chunk(args):
    grid_chunk, code_name, max_rounds, baseline_d = args
    return hybrid.checkpoint_scan(
        code_name, grid_chunk, max_rounds=max_rounds, baseline_min_d=baseline_d
    )


def _pmap(func, work_items, jobs: int):
    """Order-preserving map over work chunks, optionally across processes."""
    if jobs <= 1 or len(work_items) <= 1:
        return [func(item) for item in work_items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, work_items))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_codes(args) -> int:
    if args.action == "list":
        rows = []
        for name in codes.builtin_names():
            c = codes.builtin_code(name)
            rows.append([c.name, c.n, c.k, c.d, len(c.stabilizers)])
        emit(["name", "n", "k", "d", "stabilizers"], rows, _out_path(args.output), args.format)
        return 0
    # validate
    names = args.names or list(codes.builtin_names())
    rows = []
    all_ok = True
    for name in names:
        code = codes.load_code(name) if os.path.exists(name) else codes.builtin_code(name)
        report = codes.validate_code(code, check_distance=args.distance)
        for check in report.checks:
            rows.append([code.name, check.name, "pass" if check.passed else "fail", check.detail])
            all_ok = all_ok and check.passed
    emit(["code", "check", "result", "detail"], rows, _out_path(args.output), args.format)
    return 0 if all_ok else 1


def _cmd_map(args) -> int:
    if args.target == "qec":
        poly = decoder.builtin_polynomial(args.code)
        if args.counts:
            rows = decoder.polynomial_rows(poly)
            emit(["weight", "count"], rows, _out_path(args.output), args.format)
            return 0
        grid = args.grid if args.grid is not None else np.linspace(0.0, 1.0, _env_points(1000))
        rows = decoder.map_rows(poly, grid)
        emit(["f_in", "f_out"], rows, _out_path(args.output), args.format)
        return 0
    # chain
    plan = chain.ChainPlan(args.repeaters, _parse_rounds(args.rounds))
    grid = args.grid if args.grid is not None else np.linspace(0.0, 1.0, _env_points(1000))
    f_out = chain.run_chain(plan, grid)
    rows = list(zip((float(f) for f in grid), (float(v) for v in np.atleast_1d(f_out))))
    emit(["f_in", "f_out"], rows, _out_path(args.output), args.format)
    return 0


def _parse_rounds(spec: str):
    entries = spec.split(",")
    if len(entries) != 3:
        raise SystemExit(f"--rounds must name exactly 3 rounds, got {spec!r}")
    return tuple(chain.SKIP if e.lower() == "skip" else e for e in entries)


def _cmd_efficiency(args) -> int:
    labels = [lab.strip().upper() for lab in args.protocols.split(",")]
    grid = args.grid if args.grid is not None else efficiency.default_grid(_env_points(2000))
    curves = efficiency.protocol_curves(args.repeaters, grid, labels)
    columns = ["f_in"] + [f"E_{c.label}" for c in curves]
    data = [list(pair) for pair in zip(grid, *(c.values for c in curves))]
    if args.envelope:
        env_values, env_labels = efficiency.optimal_envelope(curves)
        columns += ["E_envelope", "active_plan"]
        for row, v, lab in zip(data, env_values, env_labels):
            row.extend([v, lab])
    out = _out_path(args.output)
    emit(columns, data, out, args.format)
    if args.switchpoints:
        points = efficiency.switching_points(curves)
        by_pair = {(p.from_plan, p.to_plan): p.fidelity for p in points}
        sp_columns = ["n_repeaters"]
        sp_row = [args.repeaters]
        for cur, nxt in zip(curves, curves[1:]):
            sp_columns.append(f"f_sw_{cur.label}_to_{nxt.label}")
            sp_row.append(by_pair.get((cur.label, nxt.label)))
        if out is not None:
            sp_path = out.with_name(out.stem + "_switchpoints" + out.suffix)
            write_table(sp_path, sp_columns, [sp_row], args.format)
        else:
            sys.stdout.write("\n")
            emit(sp_columns, [sp_row], None, args.format)
    return 0


def _cmd_purify(args) -> int:
    twirled = args.twirl
    if twirled is None:
        # protocol convention: BBPSSW twirls between rounds, DEJMPS does not
        twirled = args.protocol == "bbpssw"
    if args.input_dist is not None:
        if len(args.input_dist) != 4:
            raise ValueError("--input-dist needs exactly 4 probabilities: PI,PX,PY,PZ")
        dist = purify.PauliDistribution(*args.input_dist).validate()
        trace = purify.run_rounds(args.protocol, args.rounds, dist=dist, twirled=twirled)
        rows = _trace_rows(dist.p_i, trace)
    else:
        grid = args.grid if args.grid is not None else np.linspace(0.0, 1.0, _env_points(10000))
        chunks = _chunks(list(grid), max(args.jobs, 1) * 4)
        work = [(chunk, args.protocol, twirled, args.rounds) for chunk in chunks]
        rows = [row for part in _pmap(_purify_rows_chunk, work, args.jobs) for row in part]
    columns = ["f_in", "round", "p_i", "p_x", "p_y", "p_z", "p_discard", "p_total_discard", "rate"]
    emit(columns, rows, _out_path(args.output), args.format)
    return 0


def _cmd_hybrid(args) -> int:
    if args.grid is not None:
        grid = args.grid
    else:
        grid = hybrid.default_scan_grid(_env_points(10000))
    chunks = _chunks(list(grid), max(args.jobs, 1) * 4)
    work = [(chunk, args.code, args.max_rounds, args.baseline_d) for chunk in chunks]
    scan = [p for part in _pmap(_scan_chunk, work, args.jobs) for p in part]
    columns = [
        "f_in", "i_pre", "i_match", "f_out_dejmps", "f_out_hybrid",
        "rate_dejmps", "rate_hybrid", "E_dejmps", "E_hybrid", "winner",
    ]
    rows = [
        [p.f_in, p.i_pre, p.i_match, p.f_out_dejmps, p.f_out_hybrid,
         p.rate_dejmps, p.rate_hybrid, p.eff_dejmps, p.eff_hybrid, p.winner]
        for p in scan
    ]
    emit(columns, rows, _out_path(args.output), args.format)
    return 0


def _cmd_converge(args) -> int:
    start = args.start
    trace = convergence.iterate(args.protocol, start, args.n)
    rows = [
        [n, trace.a[n], trace.b[n], trace.c[n], trace.d[n], trace.u[n], trace.r[n], trace.q[n]]
        for n in range(len(trace))
    ]
    emit(["n", "a", "b", "c", "d", "u", "r", "q"], rows, _out_path(args.output), args.format)
    report = convergence.check_identities(trace)
    sys.stderr.write(f"identities: {'ok' if report.ok else 'FAILED'} ({report})\n")
    return 0 if report.ok else 1


def _cmd_repro(args) -> int:
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    outdir = _out_path(args.outdir if args.outdir else f"entdist_repro_{stamp}")
    outdir.mkdir(parents=True, exist_ok=True)
    outdir = outdir.resolve()  # keep nested --output paths out of the env prefixing
    fmt = args.format
    ext = "csv" if fmt == "csv" else "json"
    manifest = []

    def run(name, argv):
        path = outdir / f"{name}.{ext}"
        code = main(argv + ["--output", str(path), "--format", fmt])
        if code != 0:
            raise SystemExit(f"repro step {name} failed with exit code {code}")
        manifest.append({"file": path.name, "argv": argv})

    run("codes_validation", ["codes", "validate", "--distance"])
    for code_name in codes.builtin_names():
        run(f"qec_map_{code_name}", ["map", "qec", "--code", code_name])
        run(f"qec_counts_{code_name}", ["map", "qec", "--code", code_name, "--counts"])
    for cfg, rounds in [
        ("CXX", "513,skip,skip"), ("CCX", "513,713,skip"),
        ("CXC", "513,skip,713"), ("CCC", "513,713,713"),
    ]:
        run(f"rounds_study_{cfg}", ["map", "chain", "--repeaters", "3", "--rounds", rounds])
    for lab, rounds in efficiency.PROTOCOL_SEQUENCES.items():
        run(f"chain_1R_{lab}", ["map", "chain", "--repeaters", "1", "--rounds", ",".join(rounds)])
    for reps in ("1", "3", "5"):
        run(
            f"efficiency_{reps}R",
            ["efficiency", "--repeaters", reps, "--envelope", "--switchpoints"],
        )
    run("purify_dejmps", ["purify", "--protocol", "dejmps", "--rounds", "5"])
    run("purify_bbpssw", ["purify", "--protocol", "bbpssw", "--rounds", "5"])
    run("hybrid_933", ["hybrid", "--code", "933"])
    run("converge_bbpssw", ["converge", "--protocol", "bbpssw", "--start", "0.6,0.1333,0.1333,0.1334", "--n", "50"])
    run("converge_dejmps", ["converge", "--protocol", "dejmps", "--start", "0.6,0.1333,0.1333,0.1334", "--n", "50"])

    import json

    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    sys.stderr.write(f"wrote {len(manifest)} tables to {outdir}\n")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _comma_floats(spec: str):
    try:
        values = tuple(float(v) for v in spec.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {spec!r}")
    return values


def _add_common(sub):
    sub.add_argument("--output", "-o", help="output file (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--jobs", type=int, default=1, help="worker processes for grid sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entdist",
        description="Exact simulator for adaptive entanglement distillation in repeater chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codes", help="list or validate the stabilizer code registry")
    p.add_argument("action", choices=("list", "validate"))
    p.add_argument("names", nargs="*", help="code names or code files (default: all builtin)")
    p.add_argument("--distance", action="store_true", help="verify stored d exhaustively")
    _add_common(p)
    p.set_defaults(func=_cmd_codes)

    p = sub.add_parser("map", help="single-code or full-chain fidelity maps")
    p.add_argument("target", choices=("qec", "chain"))
    p.add_argument("--code", default="933", help="code name for 'qec'")
    p.add_argument("--counts", action="store_true", help="emit (weight, count) rows instead of the map")
    p.add_argument("--repeaters", type=int, default=1, help="repeater count for 'chain'")
    p.add_argument("--rounds", default="913,923,933", help="3 comma-separated code names or 'skip'")
    p.add_argument("--grid", type=_parse_grid, help="fidelity grid min:max:points")
    _add_common(p)
    p.set_defaults(func=_cmd_map)

    p = sub.add_parser("efficiency", help="protocol efficiency curves, envelope, switching points")
    p.add_argument("--repeaters", type=int, default=1)
    p.add_argument("--protocols", default="P1,P2,P3,P4")
    p.add_argument("--envelope", action="store_true")
    p.add_argument("--switchpoints", action="store_true")
    p.add_argument("--grid", type=_parse_grid)
    _add_common(p)
    p.set_defaults(func=_cmd_efficiency)

    p = sub.add_parser("purify", help="recurrence purification sweeps")
    p.add_argument("--protocol", choices=purify.PROTOCOLS, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--twirl", dest="twirl", action="store_true", default=None)
    group.add_argument("--no-twirl", dest="twirl", action="store_false")
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--grid", type=_parse_grid)
    p.add_argument("--input-dist", type=_comma_floats, metavar="PI,PX,PY,PZ",
                   help="explicit start distribution instead of a fidelity grid")
    _add_common(p)
    p.set_defaults(func=_cmd_purify)

    p = sub.add_parser("hybrid", help="purify-then-encode scan and refined efficiency")
    p.add_argument("--code", default="933")
    p.add_argument("--grid", type=_parse_grid)
    p.add_argument("--max-rounds", type=int, default=40)
    p.add_argument("--baseline-d", type=float, default=hybrid.DEFAULT_BASELINE_D)
    _add_common(p)
    p.set_defaults(func=_cmd_hybrid)

    p = sub.add_parser("converge", help="no-twirl recursion traces and identity checks")
    p.add_argument("--protocol", choices=purify.PROTOCOLS, required=True)
    p.add_argument("--start", type=_comma_floats, required=True, metavar="A,B,C,D")
    p.add_argument("--n", type=int, default=50)
    _add_common(p)
    p.set_defaults(func=_cmd_converge)

    p = sub.add_parser("repro", help="write the full reproduction suite to a directory")
    p.add_argument("--outdir", help="target directory (default: timestamped)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_repro)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
