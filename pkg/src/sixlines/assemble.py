"""Combine the mod-16 table with the mod-p backend into exact counts.

For geometric Picard rank r >= 16 the point count over F_p is confined
to an interval of length 2(22-r)p + 1 <= 12p + 1 around p^2 + rp + 1,
which is shorter than 16p.  Knowing the count mod 16 (from the sign
class table) and mod p (from one polynomial coefficient) therefore pins
it exactly: a Chinese remainder step and a window lookup, no point
enumeration anywhere.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Union

from .counting import BackendFn, resolve_backend
from .errors import AmbiguousCountError, MathInconsistencyError, UsageError
from .modular import crt_pair, primes_in_range
from .surfaces import Surface, bad_primes, invariants, is_good_prime
from .tracetable import TraceTable, count_mod16_from_trace

__all__ = [
    "DeligneWindow",
    "deligne_window",
    "pick_count",
    "CountRecord",
    "SkipRecord",
    "count_one",
    "count_range",
    "write_records_csv",
    "CSV_FIELDS",
]


@dataclass(frozen=True)
class DeligneWindow:
    """The interval guaranteed to contain #S(F_p)."""

    rank: int
    p: int
    center: int
    halfwidth: int

    @property
    def lo(self) -> int:
        return self.center - self.halfwidth

    @property
    def hi(self) -> int:
        return self.center + self.halfwidth

    def __contains__(self, count: object) -> bool:
        return isinstance(count, int) and self.lo <= count <= self.hi


def deligne_window(rank: int, p: int) -> DeligneWindow:
    """Weil-bound window for a surface of algebraic rank ``rank`` at p.

    >>> w = deligne_window(16, 3)
    >>> (w.center, w.halfwidth, w.lo, w.hi)
    (58, 18, 40, 76)
    """
    if not 16 <= rank <= 20:
        raise UsageError(f"window only applies for rank >= 16, got {rank}")
    center = p * p + rank * p + 1
    halfwidth = (22 - rank) * p
    return DeligneWindow(rank=rank, p=p, center=center, halfwidth=halfwidth)


def pick_count(rank: int, p: int, count_mod16: int, count_modp: int) -> int:
    """The unique count in the window with the two given residues.

    The residue mod 16 must be even: the resolved count is a sum of an
    odd branch count and 15p, so an odd residue cannot come from any
    surface and is rejected loudly rather than rounded to the nearest
    candidate.

    >>> pick_count(16, 101, 10, 1)
    11818
    """
    if p == 2:
        raise UsageError("p = 2 is never a good prime here")
    if count_mod16 % 2 != 0:
        raise MathInconsistencyError(
            f"count residue {count_mod16} mod 16 is odd; no such surface "
            "count exists (the resolved count is always even)"
        )
    window = deligne_window(rank, p)
    residue = crt_pair(count_mod16 % 16, 16, count_modp % p, p)
    modulus = 16 * p
    first = window.lo + (residue - window.lo) % modulus
    if first > window.hi:
        raise MathInconsistencyError(
            f"no count in [{window.lo}, {window.hi}] is congruent to "
            f"{count_mod16} mod 16 and {count_modp} mod {p}"
        )
    if first + modulus <= window.hi:
        raise AmbiguousCountError(
            f"window [{window.lo}, {window.hi}] admits several candidates "
            f"mod {modulus}; rank {rank} should make this impossible"
        )
    return first


CSV_FIELDS = ("p", "count", "trace_mod16", "class_index")


@dataclass(frozen=True)
class CountRecord:
    """One assembled point count."""

    p: int
    count: int
    trace_mod16: int
    class_index: int  # -1 when the surface has no sign-class table

    def as_row(self) -> tuple[int, int, int, int]:
        return (self.p, self.count, self.trace_mod16, self.class_index)


@dataclass(frozen=True)
class SkipRecord:
    """A prime in the requested range that was not counted, and why."""

    p: int
    reason: str


def count_one(
    surface: Surface,
    table: TraceTable | None,
    p: int,
    backend: Union[str, BackendFn] = "coefficient",
) -> CountRecord:
    """Exact #S(F_p) through the congruence pipeline.

    Surfaces with real multiplication carry their own arithmetic
    shortcut and need no table; all-rational-line surfaces need the
    trace table built beforehand.  ``backend`` supplies the mod-p leg
    of the residue combination (a name from
    :data:`sixlines.counting.BACKENDS` or a callable).
    """
    if not is_good_prime(surface, p):
        raise UsageError(f"p = {p} is not a good prime for {surface.name}")
    modp_fn = resolve_backend(backend)
    if surface.mode == "s5-rm":
        from .realmult import rm_count_result

        result = rm_count_result(surface, p, lambda q: modp_fn(surface, q))
        return CountRecord(
            p=p, count=result.count, trace_mod16=result.trace_mod16, class_index=-1
        )
    if table is None:
        raise UsageError(
            f"{surface.name} needs a trace table; build one with init first"
        )
    trace, index = table.trace_mod16(surface, p)
    mod16 = count_mod16_from_trace(trace, p, table.rank)
    modp = modp_fn(surface, p)
    count = pick_count(table.rank, p, mod16, modp)
    return CountRecord(p=p, count=count, trace_mod16=trace, class_index=index)


def count_range(
    surface: Surface,
    table: TraceTable | None,
    lo: int,
    hi: int,
    backend: Union[str, BackendFn] = "coefficient",
) -> Iterator[Union[CountRecord, SkipRecord]]:
    """Assemble counts for every prime in [lo, hi], marking skipped ones.

    Bad primes (including 2) yield :class:`SkipRecord` entries so a
    consumer can tell "not counted" apart from "not in range".
    """
    bad = bad_primes(surface)
    modp_fn = resolve_backend(backend)
    for p in primes_in_range(max(lo, 2), hi):
        if p == 2:
            yield SkipRecord(p=2, reason="even characteristic")
        elif p in bad:
            yield SkipRecord(p=p, reason="bad reduction")
        else:
            yield count_one(surface, table, p, modp_fn)


def write_records_csv(
    records: Iterable[Union[CountRecord, SkipRecord]],
    stream: IO[str],
    *,
    include_skips: bool = False,
) -> int:
    """Write assembled counts as CSV; returns the number of data rows.

    Skipped primes are emitted as comment lines (leading '#') when
    requested, keeping the data columns strictly numeric.
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    emitted = 0
    for rec in records:
        if isinstance(rec, SkipRecord):
            if include_skips:
                stream.write(f"# skipped p={rec.p}: {rec.reason}\n")
            continue
        writer.writerow(rec.as_row())
        emitted += 1
    return emitted
