"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 infeasible single point,
4 TBS table validation failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .grid import (
    REPETITIONS,
    REPETITIONS_TABLE1,
    TableError,
    TransmissionConfig,
    bandwidth_config,
    default_table_path,
    load_tbs_table,
)
from .sweeps import (
    MCL_SWEEP_COLUMNS,
    TBS_SWEEP_COLUMNS,
    SweepSpec,
    run_mcl_sweep,
    run_single,
    run_tbs_sweep,
    to_csv,
    to_json,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_TABLE = 4


def _mcl_range(text: str) -> tuple[float, float, float]:
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"empty or non-increasing range {text!r}")
    return start, stop, step


def _payloads(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("payload sizes must be positive")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tbs-table", type=Path, default=None,
                        help="TBS table file (default: $NBIOT_TBS_TABLE or the bundled table)")
    common.add_argument("--strict-table1-repetitions", action="store_true",
                        help="drop R=64 from the repetition set")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", type=Path, default=None, help="write here instead of stdout")

    parser = argparse.ArgumentParser(prog="nbiot-ul", description="NB-IoT uplink link analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    single = sub.add_parser("single", parents=[common], help="evaluate one point")
    single.add_argument("--payload-bits", type=int, required=True)
    single.add_argument("--mcl-db", type=float, required=True)
    single.add_argument("--power-mode", choices=("unconstrained", "3gpp"), default="3gpp")
    single.add_argument("--config", type=int, choices=range(1, 6), default=None,
                        help="bandwidth config id; with --i-mcs/--i-ru/--repetitions skips adaptation")
    single.add_argument("--i-mcs", type=int, default=0)
    single.add_argument("--i-ru", type=int, default=0)
    single.add_argument("--repetitions", type=int, default=1)

    tbs = sub.add_parser("tbs-sweep", parents=[common], help="compare coverage approaches over TBS")
    tbs.add_argument("--approach", choices=("ru", "bandwidth", "repetition"), required=True)
    tbs.add_argument("--power-mode", choices=("unconstrained",), default="unconstrained")
    tbs.add_argument("--mcl-db", type=float, default=100.0, help="path loss in dB (default 100)")

    mcl = sub.add_parser("mcl-sweep", parents=[common], help="run link adaptation over MCL")
    mcl.add_argument("--payload-bits", type=_payloads, default=(160, 1600),
                     help="comma-separated payload sizes in bits (default 160,1600)")
    mcl.add_argument("--mcl-range", type=_mcl_range, default=(100.0, 170.0, 0.5),
                     help="start:stop:step in dB (default 100:170:0.5)")
    mcl.add_argument("--power-mode", choices=("3gpp",), default="3gpp")

    val = sub.add_parser("validate-table", help="check a TBS table file")
    val.add_argument("--tbs-table", type=Path, default=None)
    return parser


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def _format_single(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {k}: {v}" for k, v in value.items())
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "validate-table":
        path = args.tbs_table or default_table_path()
        try:
            table = load_tbs_table(path)
        except (TableError, OSError) as exc:
            print(f"invalid TBS table {path}: {exc}", file=sys.stderr)
            return EXIT_TABLE
        print(f"ok: {path} ({table.n_mcs} x {len(table.ru_counts)}, max TBS {table.max_tbs} bits)")
        return EXIT_OK

    try:
        table = load_tbs_table(args.tbs_table)
    except (TableError, OSError) as exc:
        print(f"invalid TBS table: {exc}", file=sys.stderr)
        return EXIT_TABLE
    reps = REPETITIONS_TABLE1 if args.strict_table1_repetitions else REPETITIONS

    if args.command == "single":
        config = None
        if args.config is not None:
            try:
                config = TransmissionConfig(bandwidth_config(args.config), args.i_mcs, args.i_ru, args.repetitions)
            except ValueError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_USAGE
            if args.repetitions not in reps:
                print(f"error: repetitions {args.repetitions} not in {reps}", file=sys.stderr)
                return EXIT_USAGE
        if args.payload_bits <= 0:
            print("error: --payload-bits must be positive", file=sys.stderr)
            return EXIT_USAGE
        report = run_single(args.payload_bits, args.mcl_db, table, args.power_mode, config, reps)
        _emit(to_json(report) if args.format == "json" else _format_single(report), args.output)
        return EXIT_OK if report["feasible"] else EXIT_INFEASIBLE

    if args.command == "tbs-sweep":
        spec = SweepSpec("tbs-sweep", approach=args.approach, power_mode="unconstrained",
                         repetitions=reps, path_loss_db=args.mcl_db, output_format=args.format)
        rows = run_tbs_sweep(spec, table)
        columns = TBS_SWEEP_COLUMNS
    else:
        spec = SweepSpec("mcl-sweep", payload_bits_list=args.payload_bits, mcl_range=args.mcl_range,
                         power_mode="3gpp", repetitions=reps, output_format=args.format)
        rows = run_mcl_sweep(spec, table)
        columns = MCL_SWEEP_COLUMNS
    _emit(to_json(rows) if args.format == "json" else to_csv(rows, columns), args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
