"""Trace residues mod 16, organised by quadratic-symbol class of the prime.

The Frobenius trace on the transcendental part of H^2 determines the
point count mod 16 (the count is p^2 + r p + t p + 1 with r the rank of
the algebraic part).  The key fact driving this module: t mod 16 does
not depend on p itself, only on the tuple of quadratic symbols

    ( (-1|p), (2|p), (q_1|p), ..., (q_b|p) )

where q_1 < ... < q_b are the odd primes of bad reduction.  So a table
indexed by the 2^(b+2) sign classes answers "count mod 16" for every
good prime at the cost of b + 2 Jacobi symbols.

Two ways to fill the table:

* :func:`init_direct` counts points at one witness prime per class.
* :func:`init_efficient` counts at a handful of small primes and solves
  a congruence system for the class-to-trace map: the trace at a class
  with sign pattern s expands as

      t(s) = n + 2*sum x_i + 4*sum y_ij + 8*sum z_ijk   (mod 16)

  summed over the slots i (and pairs, triples of slots) where s_i = -1,
  with unknowns x mod 8, y mod 4, z mod 2 shared across classes.  Each
  counted prime contributes one linear congruence; once the system is
  determined the whole table follows, including classes never witnessed.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .counting import resolved_count
from .errors import (
    MathInconsistencyError,
    TableFormatError,
    UndeterminedSystemError,
    UsageError,
)
from .modular import iter_primes, jacobi, mod_inverse
from .surfaces import Surface, invariants, is_good_prime

__all__ = [
    "GaloisClass",
    "galois_class",
    "trace_from_count",
    "count_mod16_from_trace",
    "TraceTable",
    "CongruenceSystem",
    "DirectStats",
    "EfficientStats",
    "init_direct",
    "init_efficient",
]


@dataclass(frozen=True)
class GaloisClass:
    """Sign class of a prime: symbols, bit pattern, and table index."""

    arguments: tuple[int, ...]  # (-1, 2, q_1, ..., q_b)
    symbols: tuple[int, ...]  # Jacobi symbols (arg | p), each +-1
    bits: tuple[int, ...]  # 0 for +1, 1 for -1
    index: int  # sum of bits[i] << i


def galois_class(surface: Surface, p: int) -> GaloisClass:
    """The sign class of a good prime p for this surface.

    >>> from .fixtures import builtin_surface
    >>> cls = galois_class(builtin_surface("s4"), 7)
    >>> cls.bits, cls.index
    ((1, 0, 1, 1), 13)
    """
    if not is_good_prime(surface, p):
        raise UsageError(f"p = {p} is not a good prime for {surface.name}")
    args = invariants(surface).class_moduli
    symbols = tuple(jacobi(a, p) for a in args)
    bits = tuple((1 - s) // 2 for s in symbols)
    index = sum(bit << i for i, bit in enumerate(bits))
    return GaloisClass(arguments=args, symbols=symbols, bits=bits, index=index)


def trace_from_count(count: int, p: int, rank: int) -> int:
    """Frobenius trace on the transcendental part, mod 16, from a count."""
    return (count - p * p - rank * p - 1) * mod_inverse(p, 16) % 16


def count_mod16_from_trace(trace: int, p: int, rank: int) -> int:
    """Inverse of :func:`trace_from_count`: the point count mod 16."""
    return (p * p + rank * p + trace * p + 1) % 16


# --- congruence system for the efficient initialisation --------------------

ColumnKey = tuple[str, tuple[int, ...]]

_GROUP_VALUATION = {"x": 0, "y": 1, "z": 2}
_MOD = 8  # the divided congruences live in Z/8


def _val2(a: int) -> int:
    v = 0
    while a % 2 == 0:
        a //= 2
        v += 1
    return v


@dataclass
class _Pivot:
    row: list[int]
    rhs: int
    val: int  # 2-adic valuation of the pivot entry
    source: tuple[int, int]


class CongruenceSystem:
    """Accumulates divided trace congruences and solves for the unknowns.

    One row per observation: for a class with negative slots M and
    observed trace T (mod 16), with n the transcendental rank,

        sum_{i in M} x_i + 2 sum_{pairs} y + 4 sum_{triples} z
            = (T - n)/2   (mod 8).

    Rows are folded into an echelon form as they arrive (so asking
    whether the system is determined yet costs nothing); a row that
    reduces to 0 = nonzero exposes an inconsistency at insertion time.
    Uniqueness is certified by pivots: every column must hold one whose
    2-adic valuation is exactly that of its group (0 for x, 1 for y,
    2 for z).  Then each unknown is read off bottom-up at full precision
    within its own modulus.
    """

    def __init__(self, slots: int, n: int):
        if slots < 2:
            raise UsageError("need at least the two constant slots")
        self.slots = slots
        self.n = n
        self.columns: list[ColumnKey] = (
            [("x", (i,)) for i in range(slots)]
            + [("y", pair) for pair in itertools.combinations(range(slots), 2)]
            + [("z", triple) for triple in itertools.combinations(range(slots), 3)]
        )
        self.column_index = {key: i for i, key in enumerate(self.columns)}
        self.observations: list[tuple[list[int], int, tuple[int, int]]] = []
        self.pivots: dict[int, _Pivot] = {}  # column -> echelon row

    @property
    def n_unknowns(self) -> int:
        return len(self.columns)

    def add_observation(self, members: Sequence[int], trace: int, *, prime: int = 0, index: int = -1) -> None:
        """Record one (class, trace) observation as a congruence row."""
        if (trace - self.n) % 2 != 0:
            raise MathInconsistencyError(
                f"trace {trace} at p = {prime} has the wrong parity "
                f"(transcendental rank {self.n})"
            )
        row = [0] * self.n_unknowns
        mem = sorted(members)
        for i in mem:
            row[self.column_index[("x", (i,))]] = 1
        for pair in itertools.combinations(mem, 2):
            row[self.column_index[("y", pair)]] = 2
        for triple in itertools.combinations(mem, 3):
            row[self.column_index[("z", triple)]] = 4
        rhs = ((trace - self.n) // 2) % _MOD
        self.observations.append((row[:], rhs, (prime, index)))
        self._insert(row, rhs, (prime, index))

    def _insert(self, row: list[int], rhs: int, source: tuple[int, int]) -> None:
        """Fold one row into the echelon form, displacing weaker pivots.

        A stored pivot row always has zeros left of its column, so a
        displaced row can resume insertion from its old column.
        """
        ncols = self.n_unknowns
        col = 0
        while True:
            while col < ncols and row[col] % _MOD == 0:
                col += 1
            if col == ncols:
                if rhs % _MOD:
                    p, idx = source
                    raise MathInconsistencyError(
                        f"observation at p = {p} (class {idx}) contradicts the others"
                    )
                return
            a = row[col] % _MOD
            va = _val2(a)
            piv = self.pivots.get(col)
            if piv is None or va < piv.val:
                self.pivots[col] = _Pivot(row=row, rhs=rhs, val=va, source=source)
                if piv is None:
                    return
                row, rhs, source = piv.row, piv.rhs, piv.source
                continue  # re-insert the displaced row; it reduces at this column
            unit_inv = mod_inverse((piv.row[col] % _MOD) >> piv.val, _MOD)
            mult = (a >> piv.val) * unit_inv % _MOD
            prow = piv.row
            for c in range(col, ncols):
                if prow[c]:
                    row[c] = (row[c] - mult * prow[c]) % _MOD
            rhs = (rhs - mult * piv.rhs) % _MOD
            col += 1

    def is_determined(self) -> bool:
        """True if the accumulated rows pin every unknown uniquely."""
        if len(self.pivots) < self.n_unknowns:
            return False
        return all(
            self.pivots[c].val == _GROUP_VALUATION[key[0]]
            for c, key in enumerate(self.columns)
        )

    def solve(self) -> dict[ColumnKey, int]:
        """Solve for all unknowns; verify against every original row."""
        for c, key in enumerate(self.columns):
            piv = self.pivots.get(c)
            if piv is None or piv.val != _GROUP_VALUATION[key[0]]:
                raise UndeterminedSystemError(
                    f"unknown {key[0]}{key[1]} is not pinned by the "
                    f"observations collected so far ({len(self.observations)} rows)"
                )
        values: dict[ColumnKey, int] = {}
        solution = [0] * self.n_unknowns
        for col in range(self.n_unknowns - 1, -1, -1):
            piv = self.pivots[col]
            acc = piv.rhs
            for c in range(col + 1, self.n_unknowns):
                if piv.row[c]:
                    acc -= piv.row[c] * solution[c]
            acc %= _MOD
            if acc % (1 << piv.val):
                raise MathInconsistencyError(
                    f"back substitution failed at {self.columns[col]}"
                )
            unit = (piv.row[col] % _MOD) >> piv.val
            val = (acc >> piv.val) * mod_inverse(unit, _MOD) % (_MOD >> piv.val)
            solution[col] = val
            values[self.columns[col]] = val
        self._verify(values)
        return values

    def _verify(self, values: Mapping[ColumnKey, int]) -> None:
        for row, rhs, (p, idx) in self.observations:
            total = sum(a * values[key] for a, key in zip(row, self.columns) if a)
            if total % _MOD != rhs % _MOD:
                raise MathInconsistencyError(
                    f"solved unknowns fail the observation at p = {p} (class {idx})"
                )

    def predicted_trace(self, values: Mapping[ColumnKey, int], members: Sequence[int]) -> int:
        """Trace mod 16 for a sign class, from solved unknowns."""
        mem = sorted(members)
        acc = 0
        for i in mem:
            acc += 2 * values[("x", (i,))]
        for pair in itertools.combinations(mem, 2):
            acc += 4 * values[("y", pair)]
        for triple in itertools.combinations(mem, 3):
            acc += 8 * values[("z", triple)]
        return (self.n + acc) % 16


# --- the table itself ------------------------------------------------------


@dataclass
class TraceTable:
    """Complete map from sign class index to trace mod 16."""

    fingerprint: str
    b: int
    n: int
    entries: list[int]

    @property
    def rank(self) -> int:
        return 22 - self.n

    def _check_surface(self, surface: Surface) -> None:
        if surface.fingerprint != self.fingerprint:
            raise TableFormatError(
                "trace table was built for a different surface "
                f"(table {self.fingerprint}, got {surface.fingerprint})"
            )

    def trace_mod16(self, surface: Surface, p: int) -> tuple[int, int]:
        """(trace mod 16, class index) for a good prime."""
        self._check_surface(surface)
        cls = galois_class(surface, p)
        return self.entries[cls.index], cls.index

    def count_mod16(self, surface: Surface, p: int) -> int:
        trace, _ = self.trace_mod16(surface, p)
        return count_mod16_from_trace(trace, p, self.rank)

    def to_json(self) -> str:
        payload = {
            "surface": self.fingerprint,
            "b": self.b,
            "n": self.n,
            "entries": self.entries,
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "TraceTable":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TableFormatError(f"not valid JSON: {exc}") from None
        try:
            fingerprint = str(payload["surface"])
            b = int(payload["b"])
            n = int(payload["n"])
            entries = [int(e) for e in payload["entries"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise TableFormatError(f"malformed trace table: {exc}") from None
        table = cls(fingerprint=fingerprint, b=b, n=n, entries=entries)
        table.validate_structure()
        return table

    def validate_structure(self) -> None:
        if self.b < 0 or self.n not in (5, 6):
            raise TableFormatError(f"implausible invariants b={self.b}, n={self.n}")
        want = 1 << (self.b + 2)
        if len(self.entries) != want:
            raise TableFormatError(
                f"expected {want} entries for b = {self.b}, found {len(self.entries)}"
            )
        for idx, e in enumerate(self.entries):
            if not 0 <= e < 16:
                raise TableFormatError(f"entry {idx} out of range: {e}")
            if (e - self.n) % 2 != 0:
                raise TableFormatError(
                    f"entry {idx} has the wrong parity for transcendental rank {self.n}"
                )

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "TraceTable":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


@dataclass
class DirectStats:
    """Bookkeeping from a direct (one witness per class) initialisation."""

    witnesses: list[int] = field(default_factory=list)  # prime per class index
    primes_scanned: int = 0
    counts_performed: int = 0

    @property
    def largest_witness(self) -> int:
        return max(self.witnesses)


@dataclass
class EfficientStats:
    """Bookkeeping from a congruence-solving initialisation."""

    n_unknowns: int = 0
    n_observations: int = 0
    determined_at: int | None = None  # prime whose row completed the system
    primes_used: list[int] = field(default_factory=list)


def _table_surface_guard(surface: Surface) -> None:
    if surface.mode != "lines" or not surface.trivial_galois_pic:
        raise UsageError(
            "sign-class trace tables need all six lines rational and a "
            "trivial Galois action on the algebraic part; "
            f"{surface.name} does not qualify"
        )


def init_direct(
    surface: Surface,
    progress: Callable[[int, int, int], None] | None = None,
) -> tuple[TraceTable, DirectStats]:
    """Fill the table by counting at the first witness prime of each class.

    Scans good primes in increasing order; a prime whose class already
    has an entry costs only its Jacobi symbols.  ``progress`` (if given)
    is called after each point count with (prime, classes filled, total
    classes).
    """
    _table_surface_guard(surface)
    inv = invariants(surface)
    size = 1 << (inv.b + 2)
    entries: list[int | None] = [None] * size
    stats = DirectStats(witnesses=[0] * size)
    filled = 0
    for p in iter_primes(3):
        if not is_good_prime(surface, p):
            continue
        stats.primes_scanned += 1
        cls = galois_class(surface, p)
        if entries[cls.index] is not None:
            continue
        count = resolved_count(surface, p)
        stats.counts_performed += 1
        entries[cls.index] = trace_from_count(count, p, inv.picard_rank)
        stats.witnesses[cls.index] = p
        filled += 1
        if progress is not None:
            progress(p, filled, size)
        if filled == size:
            break
    table = TraceTable(
        fingerprint=surface.fingerprint,
        b=inv.b,
        n=inv.transcendental_rank,
        entries=[e for e in entries if e is not None],
    )
    table.validate_structure()
    return table, stats


def init_efficient(
    surface: Surface,
    prime_limit: int = 1000,
) -> tuple[TraceTable, EfficientStats]:
    """Fill the table by solving the congruence system from small primes.

    Counts points at every good prime up to ``prime_limit`` (stopping
    early once the system is determined), then reconstructs all
    2^(b+2) classes -- witnessed or not -- from the solved unknowns.
    """
    _table_surface_guard(surface)
    inv = invariants(surface)
    slots = inv.b + 2
    n = inv.transcendental_rank
    system = CongruenceSystem(slots, n)
    stats = EfficientStats(n_unknowns=system.n_unknowns)
    for p in iter_primes(3):
        if p > prime_limit:
            break
        if not is_good_prime(surface, p):
            continue
        cls = galois_class(surface, p)
        members = [i for i, bit in enumerate(cls.bits) if bit]
        trace = trace_from_count(resolved_count(surface, p), p, inv.picard_rank)
        system.add_observation(members, trace, prime=p, index=cls.index)
        stats.primes_used.append(p)
        stats.n_observations += 1
        if stats.determined_at is None and system.is_determined():
            stats.determined_at = p
            break
    if stats.determined_at is None:
        raise UndeterminedSystemError(
            f"system still undetermined after all good primes up to {prime_limit} "
            f"({stats.n_observations} observations for {stats.n_unknowns} unknowns)"
        )
    values = system.solve()
    entries = []
    for index in range(1 << slots):
        members = [i for i in range(slots) if (index >> i) & 1]
        entries.append(system.predicted_trace(values, members))
    table = TraceTable(fingerprint=surface.fingerprint, b=inv.b, n=n, entries=entries)
    table.validate_structure()
    return table, stats
