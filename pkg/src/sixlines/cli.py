"""Command-line frontend for the counting pipeline.

Subcommands::

    validate     parse and validate a surface description
    bad-primes   print the primes of bad reduction
    init         build and save a sign-class trace table
    count        one exact point count
    count-range  bulk counts to CSV or JSON lines
    verify       sweep the pipeline against the enumeration oracle
    selftest     run the lattice or Brauer-structure batteries

A surface argument is either a JSON file (same shape as the bundled
``fixtures/s*.json``) or one of the short names ``s1`` .. ``s5``.

Environment knobs: ``SIXLINES_PRECISION`` (lattice working precision),
``SIXLINES_SIEVE_SEGMENT`` (prime sieve segment size), ``SIXLINES_CHUNK``
(bulk evaluation block size).

Exit codes: 0 success, 1 usage, 2 validation failure, 3 arithmetic
inconsistency.  Code 3 is the bug detector: an impossible residue class
or a violated theorem means some component miscomputed, not that the
input was wrong.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import IO, Iterable, Sequence, Union

from .assemble import (
    CountRecord,
    SkipRecord,
    count_one,
    count_range,
    write_records_csv,
)
from .counting import BACKENDS, resolved_count
from .errors import EXIT_OK, MathInconsistencyError, SixLinesError, UsageError
from .fixtures import builtin_names, builtin_surface
from .modular import primes_in_range
from .surfaces import Surface, bad_primes, invariants, load_surface
from .tracetable import TraceTable, init_direct, init_efficient

__all__ = ["emit_counts", "read_counts_jsonl", "load_surface_argument", "main"]

Record = Union[CountRecord, SkipRecord]


def load_surface_argument(spec: str) -> Surface:
    """Resolve a CLI surface argument: a JSON path or a bundled name."""
    if os.path.exists(spec):
        return load_surface(spec)
    if spec in builtin_names():
        return builtin_surface(spec)
    raise UsageError(
        f"{spec!r} is neither a surface file nor a bundled name "
        f"({', '.join(builtin_names())})"
    )


def emit_counts(records: Iterable[Record], fmt: str, sink: IO[str]) -> int:
    """Write count records; returns the number of data rows.

    ``csv`` writes the ``p,count,trace_mod16,class_index`` header, one
    row per counted prime in input order, and skipped primes as comment
    lines.  ``jsonl`` writes one object per record, mirroring the same
    fields; skips carry ``p`` and ``skipped`` instead.
    """
    if fmt == "csv":
        return write_records_csv(records, sink, include_skips=True)
    if fmt != "jsonl":
        raise UsageError(f"unknown output format {fmt!r}; choose csv or jsonl")
    emitted = 0
    for rec in records:
        if isinstance(rec, SkipRecord):
            sink.write(json.dumps({"p": rec.p, "skipped": rec.reason}) + "\n")
        else:
            sink.write(
                json.dumps(
                    {
                        "p": rec.p,
                        "count": rec.count,
                        "trace_mod16": rec.trace_mod16,
                        "class_index": rec.class_index,
                    }
                )
                + "\n"
            )
            emitted += 1
    return emitted


def read_counts_jsonl(stream: Iterable[str]) -> list[Record]:
    """Inverse of :func:`emit_counts` for the jsonl format."""
    out: list[Record] = []
    for line in stream:
        line = line.strip()
        if not line:
            continue
        data = json.loads(line)
        if "skipped" in data:
            out.append(SkipRecord(p=int(data["p"]), reason=str(data["skipped"])))
        else:
            out.append(
                CountRecord(
                    p=int(data["p"]),
                    count=int(data["count"]),
                    trace_mod16=int(data["trace_mod16"]),
                    class_index=int(data["class_index"]),
                )
            )
    return out


# --- subcommand implementations --------------------------------------------


def _cmd_validate(args: argparse.Namespace) -> int:
    surface = load_surface_argument(args.surface)
    inv = invariants(surface)
    print(
        f"{surface.name}: ok (mode {surface.mode}, rank {inv.picard_rank}, "
        f"fingerprint {surface.fingerprint[:16]})"
    )
    return EXIT_OK


def _cmd_bad_primes(args: argparse.Namespace) -> int:
    surface = load_surface_argument(args.surface)
    print(" ".join(str(p) for p in sorted(bad_primes(surface))))
    return EXIT_OK


def _cmd_init(args: argparse.Namespace) -> int:
    surface = load_surface_argument(args.surface)
    if args.method == "direct":
        table, dstats = init_direct(surface)
        print(
            f"{surface.name}: direct table, {len(dstats.witnesses)} classes, "
            f"largest witness prime {dstats.largest_witness}"
        )
    else:
        table, estats = init_efficient(surface, prime_limit=args.limit)
        print(
            f"{surface.name}: efficient table, {estats.n_unknowns} unknowns, "
            f"{estats.n_observations} observations, "
            f"largest prime consumed {estats.determined_at}"
        )
    table.save(args.out)
    print(f"table written to {args.out}")
    return EXIT_OK


def _load_table(surface: Surface, path: str | None) -> TraceTable | None:
    if path is None:
        return None
    try:
        table = TraceTable.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read table {path}: {exc}") from None
    if table.fingerprint != surface.fingerprint:
        raise UsageError(
            f"table {path} was built for a different surface "
            f"(fingerprint mismatch)"
        )
    return table


def _cmd_count(args: argparse.Namespace) -> int:
    surface = load_surface_argument(args.surface)
    table = _load_table(surface, args.table)
    rec = count_one(surface, table, args.prime, args.backend)
    print(
        f"{surface.name} @ p={rec.p}: {rec.count} points "
        f"(trace {rec.trace_mod16} mod 16, class {rec.class_index})"
    )
    return EXIT_OK


def _count_block(
    surface: Surface, table: TraceTable | None, primes: Sequence[int], backend: str
) -> list[CountRecord]:
    return [count_one(surface, table, p, backend) for p in primes]


def _cmd_count_range(args: argparse.Namespace) -> int:
    surface = load_surface_argument(args.surface)
    table = _load_table(surface, args.table)
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if args.jobs == 1:
        records: list[Record] = list(
            count_range(surface, table, args.min, args.max, args.backend)
        )
    else:
        bad = bad_primes(surface)
        skips: list[Record] = []
        good: list[int] = []
        for p in primes_in_range(max(args.min, 2), args.max):
            if p == 2:
                skips.append(SkipRecord(p=2, reason="even characteristic"))
            elif p in bad:
                skips.append(SkipRecord(p=p, reason="bad reduction"))
            else:
                good.append(p)
        # stripe the primes so each worker gets a mix of small and large
        stripes = [good[k :: args.jobs] for k in range(args.jobs)]
        counted: list[Record] = []
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [
                pool.submit(_count_block, surface, table, stripe, args.backend)
                for stripe in stripes
                if stripe
            ]
            for fut in futures:
                counted.extend(fut.result())
        records = sorted(skips + counted, key=lambda r: r.p)
    if args.out in (None, "-"):
        emitted = emit_counts(records, args.format, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            emitted = emit_counts(records, args.format, fh)
        print(f"{emitted} counts written to {args.out}")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    surface = load_surface_argument(args.surface)
    table: TraceTable | None = None
    if surface.mode == "lines":
        table = _load_table(surface, args.table)
        if table is None:
            table, _ = init_efficient(surface)
    checked = 0
    for rec in count_range(surface, table, 2, args.max, args.backend):
        if isinstance(rec, SkipRecord):
            continue
        oracle = resolved_count(surface, rec.p)
        if rec.count != oracle:
            print(
                f"MISMATCH at p={rec.p}: pipeline {rec.count}, "
                f"enumeration {oracle}",
                file=sys.stderr,
            )
            raise MathInconsistencyError(
                f"{surface.name}: pipeline disagrees with enumeration at p={rec.p}"
            )
        checked += 1
    print(f"{surface.name}: verified {checked} primes up to {args.max}, 0 mismatches")
    return EXIT_OK


def _cmd_selftest(args: argparse.Namespace) -> int:
    if args.battery == "lattice":
        from .lattices import run_trials

        report = run_trials(trials=args.trials, seed=args.seed)
        print(report.summary())
        if not report.ok:
            raise MathInconsistencyError("lattice battery reported failures")
    else:
        from .brauer import structure_report

        report2 = structure_report()
        print(report2.summary())
        if not report2.ok:
            raise MathInconsistencyError("Brauer-structure battery failed")
    return EXIT_OK


# --- parser ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors carry exit code 1, not 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="sixlines",
        description=__doc__.split("\n\n")[0],
        epilog=(
            "environment: SIXLINES_PRECISION, SIXLINES_SIEVE_SEGMENT, "
            "SIXLINES_CHUNK"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("validate", help="parse and validate a surface")
    sp.add_argument("surface")
    sp.set_defaults(func=_cmd_validate)

    sp = sub.add_parser("bad-primes", help="print the primes of bad reduction")
    sp.add_argument("surface")
    sp.set_defaults(func=_cmd_bad_primes)

    sp = sub.add_parser("init", help="build and save a trace table")
    sp.add_argument("surface")
    sp.add_argument("--method", choices=("direct", "efficient"), default="efficient")
    sp.add_argument("--limit", type=int, default=1000, help="prime cap (efficient)")
    sp.add_argument("--out", required=True, help="output table path (JSON)")
    sp.set_defaults(func=_cmd_init)

    sp = sub.add_parser("count", help="one exact point count")
    sp.add_argument("surface")
    sp.add_argument("--table", help="trace table built by init")
    sp.add_argument("-p", "--prime", type=int, required=True)
    sp.add_argument("--backend", choices=sorted(BACKENDS), default="coefficient")
    sp.set_defaults(func=_cmd_count)

    sp = sub.add_parser("count-range", help="bulk counts over a prime range")
    sp.add_argument("surface")
    sp.add_argument("--table", help="trace table built by init")
    sp.add_argument("--min", type=int, default=2)
    sp.add_argument("--max", type=int, required=True)
    sp.add_argument("--backend", choices=sorted(BACKENDS), default="coefficient")
    sp.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    sp.add_argument("--out", help="output path ('-' or absent: stdout)")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.set_defaults(func=_cmd_count_range)

    sp = sub.add_parser("verify", help="pipeline vs. enumeration sweep")
    sp.add_argument("surface")
    sp.add_argument("--table", help="reuse an existing table")
    sp.add_argument("--max", type=int, required=True)
    sp.add_argument("--backend", choices=sorted(BACKENDS), default="naive")
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("selftest", help="internal consistency batteries")
    sp.add_argument("battery", choices=("lattice", "brauer"))
    sp.add_argument("--trials", type=int, default=1000, help="lattice trials")
    sp.add_argument("--seed", type=int, default=20260823, help="lattice seed")
    sp.set_defaults(func=_cmd_selftest)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SixLinesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
