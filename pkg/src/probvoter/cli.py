"""Command-line front end.

Subcommands:

  profile    print a function's output-symbol counts and error rates
  synth      synthesize a voter; print its table, threshold and SOP forms
  simulate   seeded Monte Carlo fault-injection sweep -> CSV
  analytic   exact availability sweep -> CSV, plus a crossover report
  plot       turn a results CSV into a gnuplot script and data file

Exit codes: 0 success, 2 usage or configuration error, 3 input parse error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .analytic import (
    SystemModel,
    compare_and_crossover,
    expected_errors,
    module_availability,
)
from .logic import ExpressionError, TableFormatError, parse_expression, parse_table_file
from .sim import SimConfig, run_sweep
from .voter import (
    emit_minterm_sop,
    emit_threshold_sop,
    error_profile,
    render_generic_table,
    synthesize_majority,
    synthesize_probabilistic,
)

CSV_HEADER = "pe,module_avail,majority_avail,prob_avail,majority_errors,prob_errors,trials"

DEFAULT_PE = tuple(
    Fraction(text)
    for text in (
        "0.001", "0.002", "0.005", "0.01", "0.02", "0.05", "0.1", "0.15",
        "0.2", "0.25", "0.3", "0.35", "0.4", "0.45", "0.5",
    )
)

DEFAULT_TRIALS = 5000
DEFAULT_SEED = 0xC0FFEE

EXIT_CONFIG = 2
EXIT_PARSE = 3


class _CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _integer(text: str) -> int:
    return int(text, 0)


def _format_exact(x: Fraction) -> str:
    """Exact decimal string when the denominator is 2^a * 5^b, else float repr."""
    if x < 0:
        return "-" + _format_exact(-x)
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return repr(float(x))
    places = max(twos, fives)
    scaled = x.numerator * 2 ** (places - twos) * 5 ** (places - fives)
    if places == 0:
        return str(scaled)
    digits = str(scaled).rjust(places + 1, "0")
    whole, fractional = digits[:-places], digits[-places:].rstrip("0")
    return whole if not fractional else f"{whole}.{fractional}"


def _parse_pe_grid(entries: list[str] | None) -> tuple[Fraction, ...]:
    if entries is None:
        return DEFAULT_PE
    values = []
    for entry in entries:
        for part in entry.split(","):
            part = part.strip()
            if not part:
                raise _CliError("empty value in --pe list", EXIT_CONFIG)
            try:
                value = Fraction(part)
            except (ValueError, ZeroDivisionError):
                raise _CliError(f"cannot parse probability {part!r}", EXIT_CONFIG) from None
            if not 0 <= value <= 1:
                raise _CliError(f"probability {part} is outside [0, 1]", EXIT_CONFIG)
            values.append(value)
    return tuple(values)


def _load_function(args):
    """Resolve --table/--expr into a truth table plus manifest source info."""
    if args.table and args.expr:
        raise _CliError("give exactly one of --table or --expr, not both", EXIT_CONFIG)
    if args.vars is not None and not args.expr:
        raise _CliError("--vars only makes sense with --expr", EXIT_CONFIG)
    if args.table:
        try:
            data = Path(args.table).read_bytes()
        except OSError as exc:
            raise _CliError(f"cannot read {args.table}: {exc}", EXIT_PARSE) from exc
        try:
            table = parse_table_file(data)
        except TableFormatError as exc:
            raise _CliError(f"{args.table}: {exc}", EXIT_PARSE) from exc
        return table, {"kind": "table", "path": str(args.table)}
    if args.expr:
        names = None
        if args.vars is not None:
            names = tuple(part.strip() for part in args.vars.split(","))
        try:
            table = parse_expression(args.expr, names)
        except ExpressionError as exc:
            raise _CliError(f"expression: {exc}", EXIT_PARSE) from exc
        except ValueError as exc:
            raise _CliError(f"--vars: {exc}", EXIT_CONFIG) from exc
        return table, {
            "kind": "expr",
            "text": args.expr,
            "vars": list(names) if names is not None else None,
        }
    raise _CliError("a function is required: --table PATH or --expr TEXT", EXIT_CONFIG)


def _build_voters(profile, k: int, tie_policy: int | None):
    try:
        majority = synthesize_majority(k, tie_policy)
        prob = synthesize_probabilistic(profile, k)
    except ValueError as exc:
        raise _CliError(str(exc), EXIT_CONFIG) from exc
    return majority, prob


def _function_manifest(table, source) -> dict:
    return {
        "variables": list(table.variables),
        "outputs": "".join(map(str, table.outputs)),
        "source": source,
    }


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_bytes(text.encode("utf-8"))
    except OSError as exc:
        raise _CliError(f"cannot write {path}: {exc}", EXIT_CONFIG) from exc


def _write_manifest(out_path: str, payload: dict) -> None:
    payload = dict(payload, version=__version__)
    _write_text(
        str(out_path) + ".manifest.json",
        json.dumps(payload, indent=2, sort_keys=True) + "\n",
    )


# --- subcommands --------------------------------------------------------------


def cmd_profile(args) -> int:
    table, _ = _load_function(args)
    n0, n1 = table.symbol_counts()
    size = 1 << table.arity
    print(f"N0={n0} N1={n1} E0={n1}/{size} E1={n0}/{size}")
    return 0


def cmd_synth(args) -> int:
    table, _ = _load_function(args)
    profile = error_profile(table)
    k = args.replicas
    try:
        if args.kind == "prob":
            voter = synthesize_probabilistic(profile, k)
        else:
            voter = synthesize_majority(k, args.tie_policy)
    except ValueError as exc:
        raise _CliError(str(exc), EXIT_CONFIG) from exc
    print(" ".join(f"y{i}" for i in range(1, k + 1)))
    print("".join(map(str, voter.decisions)))
    print(f"t={voter.threshold}")
    print(f"minterm_sop={emit_minterm_sop(voter)}")
    expression, metrics = emit_threshold_sop(voter)
    print(f"threshold_sop={expression}")
    print(f"terms={metrics.terms} literals={metrics.literals}")
    if args.dump_generic:
        print()
        print(render_generic_table(k))
    return 0


def cmd_simulate(args) -> int:
    table, source = _load_function(args)
    profile = error_profile(table)
    grid = _parse_pe_grid(args.pe)
    majority, prob = _build_voters(profile, args.replicas, args.tie_policy)
    try:
        config = SimConfig(
            function=table,
            k=args.replicas,
            voters=(("majority", majority), ("prob", prob)),
            pe_values=grid,
            trials=args.trials,
            master_seed=args.seed,
        )
    except ValueError as exc:
        raise _CliError(str(exc), EXIT_CONFIG) from exc
    records = run_sweep(config)
    lines = [CSV_HEADER]
    for rec in records:
        lines.append(
            ",".join(
                (
                    _format_exact(rec.pe),
                    repr(float(rec.module_availability)),
                    repr(float(rec.availability("majority"))),
                    repr(float(rec.availability("prob"))),
                    str(rec.errors("majority")),
                    str(rec.errors("prob")),
                    str(rec.trials),
                )
            )
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    _write_manifest(
        args.out,
        {
            "command": "simulate",
            "function": _function_manifest(table, source),
            "k": args.replicas,
            "tie_policy": args.tie_policy,
            "pe": [str(pe) for pe in grid],
            "trials": args.trials,
            "seed": args.seed,
            "out": str(args.out),
        },
    )
    print(f"wrote {args.out} ({len(records)} rows)")
    return 0


def cmd_analytic(args) -> int:
    table, source = _load_function(args)
    profile = error_profile(table)
    grid = _parse_pe_grid(args.pe)
    majority, prob = _build_voters(profile, args.replicas, args.tie_policy)
    if args.trials < 0:
        raise _CliError(f"trial count must be non-negative, got {args.trials}", EXIT_CONFIG)
    try:
        comparison = compare_and_crossover(profile, args.replicas, grid, args.tie_policy)
    except ValueError as exc:
        raise _CliError(str(exc), EXIT_CONFIG) from exc
    lines = [CSV_HEADER]
    for point in comparison.points:
        err_majority = expected_errors(SystemModel(profile, majority, point.p), args.trials)
        err_prob = expected_errors(SystemModel(profile, prob, point.p), args.trials)
        lines.append(
            ",".join(
                (
                    _format_exact(point.p),
                    _format_exact(module_availability(point.p)),
                    _format_exact(point.majority_availability),
                    _format_exact(point.prob_availability),
                    _format_exact(err_majority),
                    _format_exact(err_prob),
                    "0",
                )
            )
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    _write_manifest(
        args.out,
        {
            "command": "analytic",
            "function": _function_manifest(table, source),
            "k": args.replicas,
            "tie_policy": args.tie_policy,
            "pe": [str(pe) for pe in grid],
            "trials": args.trials,
            "out": str(args.out),
        },
    )
    for low, high in comparison.crossovers:
        print(f"crossover: pe in ({_format_exact(low)}, {_format_exact(high)})")
    if not comparison.crossovers:
        print("crossover: none")
    print(f"wrote {args.out} ({len(comparison.points)} rows)")
    return 0


_PLOT_SCRIPT = """\
# generated by probvoter plot; run with: gnuplot {script}
set terminal svg size 820,560 dynamic
set xlabel "per-replica flip probability"
set key bottom left

set output "{stem}_availability.svg"
set ylabel "availability"
plot "{data}" using 1:2 with linespoints lw 2 title "module (no voting)", \\
     "{data}" using 1:3 with linespoints lw 2 title "majority voter", \\
     "{data}" using 1:4 with linespoints lw 2 title "probabilistic voter"

set output "{stem}_errors.svg"
set ylabel "wrong outputs"
plot "{data}" using 1:5 with linespoints lw 2 title "majority voter", \\
     "{data}" using 1:6 with linespoints lw 2 title "probabilistic voter"
"""


def cmd_plot(args) -> int:
    try:
        text = Path(args.csv).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot read {args.csv}: {exc}", EXIT_PARSE) from exc
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise _CliError(f"{args.csv}: unexpected CSV header", EXIT_PARSE)
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 7:
            raise _CliError(f"{args.csv}: expected 7 columns, got {len(parts)}", EXIT_PARSE)
        try:
            for part in parts:
                float(part)
        except ValueError:
            raise _CliError(f"{args.csv}: malformed row {line!r}", EXIT_PARSE) from None
        rows.append(parts)
    if not rows:
        raise _CliError(f"{args.csv}: no data rows", EXIT_PARSE)
    out = Path(args.out)
    data_path = out.with_suffix(".dat")
    if data_path == out:
        raise _CliError("--out must not itself end in .dat", EXIT_CONFIG)
    data_lines = ["# " + CSV_HEADER.replace(",", " ")]
    data_lines.extend(" ".join(parts) for parts in rows)
    _write_text(str(data_path), "\n".join(data_lines) + "\n")
    script = _PLOT_SCRIPT.format(script=out.name, stem=out.stem, data=data_path.name)
    _write_text(str(out), script)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    _write_manifest(
        str(out),
        {
            "command": "plot",
            "csv": str(args.csv),
            "csv_sha256": digest,
            "out": str(args.out),
        },
    )
    print(f"wrote {out} and {data_path}")
    return 0


# --- parser -------------------------------------------------------------------


def _add_function_arguments(parser) -> None:
    group = parser.add_argument_group("function source (exactly one)")
    group.add_argument("--table", metavar="PATH", help="truth-table file: a line of variable names, then 2^n output bits")
    group.add_argument("--expr", metavar="TEXT", help="boolean expression over !~ & * . + | ( ) 0 1")
    group.add_argument("--vars", metavar="A,B,...", help="explicit variable order for --expr (first name = MSB of the row index)")


def _add_sweep_arguments(parser) -> None:
    parser.add_argument("--pe", action="append", metavar="P[,P...]", help="flip probabilities (decimals or fractions); repeatable or comma-separated; default is a 15-point grid from 0.001 to 0.5")
    parser.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="inputs per probability (default %(default)s)")
    parser.add_argument("--out", required=True, metavar="PATH", help="CSV output path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probvoter",
        description="Synthesize function-aware probabilistic voters and measure how much better they mask replica faults than plain majority voting.",
        epilog="exit codes: 0 success, 2 usage/configuration error, 3 input parse error",
    )
    parser.add_argument("--version", action="version", version=f"probvoter {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    profile = sub.add_parser("profile", help="print symbol counts and error rates")
    _add_function_arguments(profile)
    profile.set_defaults(func=cmd_profile)

    synth = sub.add_parser("synth", help="synthesize a voter table")
    _add_function_arguments(synth)
    synth.add_argument("-k", "--replicas", type=int, default=3, help="replica count (default %(default)s)")
    synth.add_argument("--kind", choices=("prob", "majority"), default="prob", help="voter flavour (default %(default)s)")
    synth.add_argument("--tie-policy", type=int, choices=(0, 1), default=None, help="which symbol wins an even split (required for even k)")
    synth.add_argument("--dump-generic", action="store_true", help="also print the symbolic cost table for k replicas")
    synth.set_defaults(func=cmd_synth)

    simulate = sub.add_parser("simulate", help="Monte Carlo fault-injection sweep")
    _add_function_arguments(simulate)
    simulate.add_argument("-k", "--replicas", type=int, default=3, help="replica count (default %(default)s)")
    simulate.add_argument("--tie-policy", type=int, choices=(0, 1), default=None, help="which symbol wins an even split (required for even k)")
    _add_sweep_arguments(simulate)
    simulate.add_argument("--seed", type=_integer, default=DEFAULT_SEED, help="64-bit master seed, decimal or 0x-hex (default 0xC0FFEE)")
    simulate.set_defaults(func=cmd_simulate)

    analytic = sub.add_parser("analytic", help="exact availability sweep")
    _add_function_arguments(analytic)
    analytic.add_argument("-k", "--replicas", type=int, default=3, help="replica count (default %(default)s)")
    analytic.add_argument("--tie-policy", type=int, choices=(0, 1), default=None, help="which symbol wins an even split (required for even k)")
    _add_sweep_arguments(analytic)
    analytic.set_defaults(func=cmd_analytic)

    plot = sub.add_parser("plot", help="emit a gnuplot script for a results CSV")
    plot.add_argument("csv", metavar="CSV", help="results file from simulate or analytic")
    plot.add_argument("--out", required=True, metavar="PATH", help="gnuplot script path (data file lands next to it)")
    plot.set_defaults(func=cmd_plot)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"probvoter: {exc}", file=sys.stderr)
        return exc.code


def app() -> None:
    raise SystemExit(main())
