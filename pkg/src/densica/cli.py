"""Command-line interface.

Commands::

    run CONFIG            classify a ring given as a digit string
    run-d                 classify a grid from a file or inline rows
    verify                exhaustive (or sampled) ring verification
    verify-d              exhaustive grid verification / mode comparison
    props                 counting-invariant and phase-count suites
    alphabet              print the symbol table

Exit status: 0 on success and clean verification, 1 when a run hit the
sweep budget or verification/properties found failures, 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .alphabet import enumerate_alphabet, format_symbol
from .engine1d import OutcomeKind, RingConfiguration, run
from .multidim import CuboidConfiguration, MemoryMode, parse_grid, run_d
from .trace import emit_events, emit_records, render_panels, render_spacetime
from .verifier import (
    VerifyOptions,
    check_properties,
    compare_modes_d,
    verify_exhaustive,
    verify_exhaustive_d,
    verify_sample,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="densica",
        description="Sequential density classification: run, verify, inspect.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="classify a ring configuration")
    p.add_argument("config", help="digit string, cell 0 first, e.g. 0001010")
    p.add_argument("--alphabet-size", type=int, default=2)
    p.add_argument("--max-sweeps", type=int, default=None)
    p.add_argument("--trace", action="store_true", help="print the space-time table")
    p.add_argument("--records", default=None, help="write per-update records (- for stdout)")
    p.add_argument("--events", default=None, help="write the event/outcome stream (- for stdout)")

    p = sub.add_parser("run-d", help="classify a grid configuration")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", help="grid file (dims/alphabet header plus digit rows)")
    src.add_argument("--rows", help="inline 2-D rows, e.g. 010/122/220")
    p.add_argument("--alphabet-size", type=int, default=None, help="with --rows; default 2")
    p.add_argument(
        "--mode",
        choices=[m.value for m in MemoryMode],
        default=MemoryMode.COUNTER_FILTERED.value,
    )
    p.add_argument("--max-sweeps", type=int, default=None)
    p.add_argument("--trace", action="store_true", help="print the panel sequence")
    p.add_argument("--records", default=None, help="write per-update records (- for stdout)")
    p.add_argument("--events", default=None, help="write the event/outcome stream (- for stdout)")

    p = sub.add_parser("verify", help="verify rings against the counting oracle")
    p.add_argument("--n", required=True, help="ring length or range, e.g. 7 or 1..14")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--sample", type=int, default=None, help="sampled inputs instead of exhaustive")
    p.add_argument("--seed", type=int, default=0, help="seed for --sample")
    p.add_argument("--max-sweeps", type=int, default=None)
    p.add_argument("--cap", type=int, default=None, help="raise the exhaustive length cap")
    p.add_argument("--failure-cap", type=int, default=100)
    p.add_argument("--report", default=None, help="also write the report as JSON")

    p = sub.add_parser("verify-d", help="verify grids against the counting oracle")
    p.add_argument("--dims", required=True, help="e.g. 3x3 or 2x3x2")
    p.add_argument("--alphabet-size", type=int, default=2)
    p.add_argument(
        "--mode",
        choices=[m.value for m in MemoryMode] + ["compare"],
        default=MemoryMode.COUNTER_FILTERED.value,
        help="reconstruction policy, or 'compare' to diff both",
    )
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-sweeps", type=int, default=None)
    p.add_argument("--grid-cap", type=int, default=None, help="raise the grid-count cap")
    p.add_argument("--failure-cap", type=int, default=100)
    p.add_argument("--report", default=None, help="also write the report as JSON")

    p = sub.add_parser("props", help="run the counting-invariant property suites")
    p.add_argument("--n", type=int, default=12, help="exhaustive up to this ring length")
    p.add_argument(
        "--samples",
        default=None,
        help="sampled sizes as length:count pairs, e.g. 50:1000,200:1000",
    )
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--report", default=None, help="also write the report as JSON")

    p = sub.add_parser("alphabet", help="print the symbol table")
    p.add_argument("--k", type=int, default=2, help="alphabet size")

    return parser


def _write_report(path: str | None, payload: dict) -> None:
    if path:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def _write_stream(target: str, text: str) -> None:
    if target == "-":
        sys.stdout.write(text)
    else:
        with open(target, "w") as fh:
            fh.write(text)


def _emit_run_output(result, args) -> int:
    if args.records:
        _write_stream(args.records, emit_records(result.trace))
    if args.events:
        _write_stream(args.events, emit_events(result))
    if args.trace:
        renderer = render_spacetime if len(result.trace.dims) == 1 else render_panels
        sys.stdout.write(renderer(result.trace))
    print(result.outcome.describe())
    return 1 if result.outcome.kind is OutcomeKind.BUDGET_EXCEEDED else 0


def _cmd_run(args) -> int:
    config = RingConfiguration.from_string(args.config, args.alphabet_size)
    capture = args.trace or bool(args.records)
    result = run(config, args.max_sweeps, capture_trace=capture)
    return _emit_run_output(result, args)


def _cmd_run_d(args) -> int:
    if args.file:
        if args.alphabet_size is not None:
            raise ValueError("--alphabet-size comes from the grid file header")
        with open(args.file) as fh:
            config = parse_grid(fh.read())
    else:
        rows = args.rows.split("/")
        config = CuboidConfiguration.from_rows(rows, args.alphabet_size or 2)
    capture = args.trace or bool(args.records)
    result = run_d(
        config, args.max_sweeps, MemoryMode(args.mode), capture_trace=capture
    )
    return _emit_run_output(result, args)


def _parse_length_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo_txt, hi_txt = text.split("..", 1)
        return int(lo_txt), int(hi_txt)
    n = int(text)
    return n, n


def _cmd_verify(args) -> int:
    n_min, n_max = _parse_length_range(args.n)
    options = VerifyOptions(
        max_sweeps=args.max_sweeps,
        failure_cap=args.failure_cap,
        exhaustive_cap_n=args.cap if args.cap else VerifyOptions().exhaustive_cap_n,
    )
    if args.sample:
        if n_min != n_max:
            raise ValueError("--sample verifies a single length, not a range")
        report = verify_sample(n_min, args.sample, args.seed, args.workers, options)
        print(report.to_text())
        _write_report(args.report, report.to_dict())
        return 0 if report.clean else 1
    report = verify_exhaustive(n_min, n_max, args.workers, options)
    print(report.to_text())
    _write_report(args.report, report.to_dict())
    return 0 if report.clean else 1


def _parse_dims(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split("x"))


def _cmd_verify_d(args) -> int:
    dims = _parse_dims(args.dims)
    options = VerifyOptions(
        max_sweeps=args.max_sweeps,
        failure_cap=args.failure_cap,
        grid_cap=args.grid_cap if args.grid_cap else VerifyOptions().grid_cap,
    )
    if args.mode == "compare":
        report = compare_modes_d(dims, args.alphabet_size, args.workers, options)
        print(report.to_text())
        _write_report(args.report, report.to_dict())
        return 0
    report = verify_exhaustive_d(
        dims, args.alphabet_size, MemoryMode(args.mode), args.workers, options
    )
    print(report.to_text())
    _write_report(args.report, report.to_dict())
    return 0 if report.clean else 1


def _parse_samples(text: str | None) -> dict[int, int]:
    if not text:
        return {}
    out = {}
    for pair in text.split(","):
        length, count = pair.split(":", 1)
        out[int(length)] = int(count)
    return out


def _cmd_props(args) -> int:
    kwargs = {}
    if args.seed is not None:
        kwargs["seed"] = args.seed
    report = check_properties(
        n_max_exhaustive=args.n,
        samples=_parse_samples(args.samples),
        workers=args.workers,
        **kwargs,
    )
    print(report.to_text())
    _write_report(args.report, report.to_dict())
    return 0 if report.clean else 1


def _cmd_alphabet(args) -> int:
    symbols = enumerate_alphabet(args.k)
    for i, sym in enumerate(symbols):
        print(f"{i:3d}  {format_symbol(sym)}")
    print(f"total {len(symbols)} symbols ({len(symbols) - args.k} intermediate)")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "run-d": _cmd_run_d,
    "verify": _cmd_verify,
    "verify-d": _cmd_verify_d,
    "props": _cmd_props,
    "alphabet": _cmd_alphabet,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
