"""Command-line interface.

Every subcommand reads matrices in the portable text format and emits
reproducible output: all randomness flows from --seed, and CSV outputs embed
a '#'-prefixed run manifest (parameters, seed, input digests, version).

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .circuit import MeasurementSchedule
from .decoder import (
    PreconditionError,
    build_truncated_decoder,
    build_untruncated_decoder,
    verify_fault_tolerance,
    write_decoder_table,
)
from .distance import (
    circuit_distance,
    dcirc_upper_bound,
    ft_precondition,
    prop1_bound,
    repeat_schedule,
    thm2_expectation_bound,
)
from .gf2 import BitMatrix, LinearCode, min_distance, parse_matrix_text
from .search import SearchConfig, search
from .storage import (
    NoiseParams,
    average_lifetime,
    pseudo_threshold,
    unencoded_baseline,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2


def _sci(x: float) -> str:
    """Scientific notation with six significant digits."""
    return f"{x:.5e}"


class _CliError(Exception):
    """Usage-level failure: bad file, bad dimensions."""


def _read_matrix(path: str) -> BitMatrix:
    p = Path(path)
    if not p.is_file():
        raise _CliError(f"file not found: {path}")
    return parse_matrix_text(p.read_text(), source=path)


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]


def _load_schedule(args) -> MeasurementSchedule:
    h_d = _read_matrix(args.code)
    h_m = _read_matrix(args.meas)
    if h_m.ncols != h_d.ncols:
        raise _CliError(
            f"schedule rows have length {h_m.ncols}, data code has length {h_d.ncols}"
        )
    origin = None
    if getattr(args, "gm", None):
        origin = _read_matrix(args.gm)
    if origin is not None:
        sched = MeasurementSchedule(h_d, h_m.rows, origin=origin.transpose()
                                    if origin.nrows != h_d.nrows else origin)
    else:
        sched = MeasurementSchedule(h_d, h_m.rows)
    return sched


def _manifest_lines(args, seed: Optional[int], elapsed: float) -> List[str]:
    items: Dict[str, str] = {"subcommand": args.command, "version": __version__}
    for key, value in sorted(vars(args).items()):
        if key in ("command", "func") or value is None:
            continue
        items[key] = str(value)
    if seed is not None:
        items["master_seed"] = str(seed)
    for key in ("code", "meas", "gm"):
        path = getattr(args, key, None)
        if path:
            items[f"sha256_{key}"] = _digest(path)
    items["elapsed_s"] = f"{elapsed:.3f}"
    return [f"# {k} = {v}" for k, v in items.items()]


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    seed = int(np.random.SeedSequence().entropy % (2**31))
    print(f"# generated seed: {seed} (pass --seed {seed} to replay)")
    return seed


def _write_csv(path: Optional[str], header_lines: List[str], columns: str, rows: List[str]):
    text = "\n".join(header_lines + [columns] + rows) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# Subcommand implementations -------------------------------------------------


def _cmd_distance(args) -> int:
    sched = _load_schedule(args)
    report = circuit_distance(sched, args.d, time_budget=args.time_budget)
    print(f"d_circ = {report.d_circ}")
    print(report)
    if report.witness is not None:
        for i, level in enumerate(report.witness.e):
            if level:
                from .gf2 import word_to_string

                print(f"  witness e^{i} = {word_to_string(level, sched.n_d)}")
        if report.witness.f:
            from .gf2 import word_to_string

            print(f"  witness f   = {word_to_string(report.witness.f, sched.n_m)}")
    return EXIT_OK if report.complete else EXIT_VERIFY_FAIL


def _cmd_regions(args) -> int:
    sched = _load_schedule(args)
    report = ft_precondition(sched, args.d)
    print(f"S_in  = {sorted(report.s_in.vertices)}")
    print(f"S_out = {sorted(report.s_out.vertices)}")
    print(f"(V_in u S_in) n S_out = {sorted(report.overlap)}")
    return EXIT_OK


def _cmd_verify_precondition(args) -> int:
    sched = _load_schedule(args)
    report = ft_precondition(sched, args.d)
    if report.ok:
        print("PASS: (V_in u S_in) and S_out do not overlap")
        return EXIT_OK
    print(f"FAIL: overlap at vertices {sorted(report.overlap)}")
    return EXIT_VERIFY_FAIL


def _cmd_verify_ft(args) -> int:
    sched = _load_schedule(args)
    repeats = 1
    while True:
        try:
            if args.untruncated:
                dec = build_untruncated_decoder(sched)
            else:
                dec = build_truncated_decoder(sched, args.d)
            break
        except PreconditionError:
            if not args.auto_repeat or repeats >= args.max_repeats:
                print("FAIL: truncation precondition does not hold")
                return EXIT_VERIFY_FAIL
            repeats += 1
            sched = repeat_schedule(_load_schedule(args), repeats)
            print(f"# precondition failed; retrying with {repeats} repetitions")
    report = verify_fault_tolerance(sched, dec, args.d)
    print(report)
    print("weight,count")
    for w, c in sorted(report.counts_per_weight.items()):
        print(f"{w},{c}")
    return EXIT_OK if report.ok else EXIT_VERIFY_FAIL


def _cmd_table(args) -> int:
    sched = _load_schedule(args)
    dec = build_truncated_decoder(sched, args.d, force=args.force)
    text = write_decoder_table(dec)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {1 << sched.n_m} outcomes to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_search(args) -> int:
    t0 = time.monotonic()
    h_d = _read_matrix(args.code)
    seed = _resolve_seed(args)
    config = SearchConfig(
        min_length=args.nm_min,
        max_length=args.nm_max,
        attempts_per_length=args.attempts,
        seed=seed,
        time_budget=args.time_budget,
    )
    result = search(h_d, args.d, config)
    bound = thm2_expectation_bound(h_d.ncols, args.nm_max, args.d)
    print(f"# attempts: {result.num_attempts}, elapsed {result.elapsed:.1f}s")
    print(f"# expected low-weight propagating errors at n_M={args.nm_max}: {_sci(bound)}")
    if result.schedule is None:
        print("no schedule found")
        return EXIT_VERIFY_FAIL
    sched = result.schedule
    from .gf2 import word_to_string

    lines = [
        f"# found by randomized search: seed = {seed}",
        f"# length = {sched.n_m}, d_circ = {result.d_circ}, attempts = {result.num_attempts}",
        f"# elapsed = {time.monotonic() - t0:.1f}s",
    ]
    lines += [word_to_string(c, sched.n_d) for c in sched.checks]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote schedule to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _build_decoder_for_sim(args, sched: MeasurementSchedule):
    code_d = LinearCode.from_parity_checks(_read_matrix(args.code), d=args.d)
    dec = build_truncated_decoder(sched, args.d, force=args.force)
    return code_d, dec


def _cmd_simulate(args) -> int:
    t0 = time.monotonic()
    sched = _load_schedule(args)
    seed = _resolve_seed(args)
    code_d, dec = _build_decoder_for_sim(args, sched)
    noise = NoiseParams(args.p_s, args.p_m, args.p_f)
    stats = average_lifetime(
        code_d, dec, noise, args.trials, args.t_max, seed, workers=args.threads
    )
    base = unencoded_baseline(noise.p_s) if noise.p_s > 0 else float("inf")
    k_loss = 1.0 - (1.0 - noise.p_s) ** code_d.k if noise.p_s > 0 else 0.0
    base_k = 1.0 / k_loss if k_loss > 0 else float("inf")
    row = ",".join(
        [
            _sci(noise.p_s),
            _sci(noise.p_m),
            _sci(noise.p_f),
            str(stats.trials),
            str(stats.t_max),
            f"{stats.mean:.6f}",
            f"{stats.stderr:.6f}",
            str(stats.censored),
            f"{base:.6f}",
            f"{base_k:.6f}",
        ]
    )
    _write_csv(
        args.out,
        _manifest_lines(args, seed, time.monotonic() - t0),
        "p_s,p_m,p_f,trials,t_max,mean_lifetime,stderr,censored,baseline,baseline_k",
        [row],
    )
    return EXIT_OK


def _cmd_sweep(args) -> int:
    t0 = time.monotonic()
    sched = _load_schedule(args)
    seed = _resolve_seed(args)
    code_d, dec = _build_decoder_for_sim(args, sched)
    points = [float(x) for x in args.p.split(",")]
    rows = []
    for idx, p in enumerate(points):
        noise = NoiseParams(
            p if "s" in args.vary else args.p_s,
            p if "m" in args.vary else args.p_m,
            p if "f" in args.vary else args.p_f,
        )
        t_max = args.t_max if args.t_max else max(100, int(30.0 / max(p, 1e-12)))
        stats = average_lifetime(
            code_d, dec, noise, args.trials, t_max, seed + idx, workers=args.threads
        )
        base = unencoded_baseline(noise.p_s) if noise.p_s > 0 else float("inf")
        k_loss = 1.0 - (1.0 - noise.p_s) ** code_d.k if noise.p_s > 0 else 0.0
        base_k = 1.0 / k_loss if k_loss > 0 else float("inf")
        rows.append(
            ",".join(
                [
                    _sci(noise.p_s),
                    _sci(noise.p_m),
                    _sci(noise.p_f),
                    str(stats.trials),
                    str(stats.t_max),
                    f"{stats.mean:.6f}",
                    f"{stats.stderr:.6f}",
                    str(stats.censored),
                    f"{base:.6f}",
                    f"{base_k:.6f}",
                ]
            )
        )
    _write_csv(
        args.out,
        _manifest_lines(args, seed, time.monotonic() - t0),
        "p_s,p_m,p_f,trials,t_max,mean_lifetime,stderr,censored,baseline,baseline_k",
        [rows_line for rows_line in rows],
    )
    return EXIT_OK


def _cmd_threshold(args) -> int:
    sched = _load_schedule(args)
    seed = _resolve_seed(args)
    code_d, dec = _build_decoder_for_sim(args, sched)
    result = pseudo_threshold(
        code_d,
        dec,
        trials=args.trials,
        master_seed=seed,
        p_lo=args.p_lo,
        p_hi=args.p_hi,
        iterations=args.iterations,
        workers=args.threads,
    )
    for p, mean, se in result.evaluations:
        print(f"# p = {_sci(p)}  mean = {mean:.2f} +- {se:.2f}  1/p = {1.0/p:.2f}")
    if not result.crossing_found:
        print("no crossing in the given range")
        return EXIT_VERIFY_FAIL
    lo, hi = result.bracket
    print(f"p_th = {_sci(result.p_th)} (bracket [{_sci(lo)}, {_sci(hi)}])")
    return EXIT_OK


def _cmd_bound(args) -> int:
    if args.which == "prop1":
        val = prop1_bound(args.n_d, args.n_m, args.d, args.p, args.rounds)
        import math

        log10 = math.log10(val) if val > 0 else float("-inf")
        print(f"prop1 bound = {_sci(val)} (log10 = {log10:.3f})")
    elif args.which == "thm2":
        val = thm2_expectation_bound(args.n_d, args.n_m, args.d)
        import math

        log10 = math.log10(val) if val > 0 else float("-inf")
        print(f"thm2 expectation bound = {_sci(val)} (log10 = {log10:.3f})")
    else:
        print(f"d_circ <= {dcirc_upper_bound(args.d, args.n_d, args.d_m)}")
    return EXIT_OK


# Parser ---------------------------------------------------------------------


def _add_schedule_args(p, need_d=True):
    p.add_argument("--code", required=True, help="data-code parity-check matrix file")
    p.add_argument("--meas", required=True, help="measurement schedule H_m file")
    p.add_argument("--gm", help="optional companion G_M file (cross-validated)")
    if need_d:
        p.add_argument("--d", type=int, required=True, help="data-code distance d_D")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftec",
        description="Fault-tolerant error correction for classical linear codes",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="exact circuit distance")
    _add_schedule_args(p)
    p.add_argument("--time-budget", type=float, help="seconds before giving up")
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("regions", help="truncation regions S_in and S_out")
    _add_schedule_args(p)
    p.set_defaults(func=_cmd_regions)

    p = sub.add_parser("verify-precondition", help="check the truncation overlap condition")
    _add_schedule_args(p)
    p.set_defaults(func=_cmd_verify_precondition)

    p = sub.add_parser("verify-ft", help="exhaustive fault-tolerance verification")
    _add_schedule_args(p)
    p.add_argument("--auto-repeat", action="store_true",
                   help="repeat the schedule when the precondition fails")
    p.add_argument("--max-repeats", type=int, default=3)
    p.add_argument("--untruncated", action="store_true",
                   help="verify the plain MWE decoder instead")
    p.set_defaults(func=_cmd_verify_ft)

    p = sub.add_parser("table", help="export the decoder lookup table")
    _add_schedule_args(p)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--force", action="store_true",
                   help="build even when the precondition fails")
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("search", help="randomized search for a short schedule")
    p.add_argument("--code", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--nm-min", type=int, required=True)
    p.add_argument("--nm-max", type=int, required=True)
    p.add_argument("--attempts", type=int, default=200)
    p.add_argument("--seed", type=int)
    p.add_argument("--time-budget", type=float)
    p.add_argument("--out", help="write the winning schedule here")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("simulate", help="Monte-Carlo storage lifetime")
    _add_schedule_args(p)
    p.add_argument("--p-s", type=float, required=True)
    p.add_argument("--p-m", type=float, required=True)
    p.add_argument("--p-f", type=float, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--t-max", type=int, default=1_000_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--force", action="store_true")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="lifetime over a grid of noise points")
    _add_schedule_args(p)
    p.add_argument("--p", required=True, help="comma-separated probability list")
    p.add_argument("--vary", default="smf",
                   help="which of s,m,f follow the swept p (default all)")
    p.add_argument("--p-s", type=float, default=0.0)
    p.add_argument("--p-m", type=float, default=0.0)
    p.add_argument("--p-f", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--t-max", type=int, default=0, help="0 = adaptive")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--force", action="store_true")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("threshold", help="pseudo-threshold by bisection")
    _add_schedule_args(p)
    p.add_argument("--p-lo", type=float, required=True)
    p.add_argument("--p-hi", type=float, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--iterations", type=int, default=8)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("bound", help="analytic bounds")
    p.add_argument("--which", choices=["prop1", "thm2", "dcirc"], required=True)
    p.add_argument("--n-d", type=int, required=True)
    p.add_argument("--n-m", type=int, default=0)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--d-m", type=int, default=0)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--rounds", type=int, default=1)
    p.set_defaults(func=_cmd_bound)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
