"""Sign classes, the mod-16 trace table, and its two initialisations."""

import pytest

from sixlines.errors import TableFormatError, UsageError
from sixlines.modular import jacobi, mod_inverse
from sixlines.tracetable import (
    CongruenceSystem,
    TraceTable,
    count_mod16_from_trace,
    galois_class,
    init_efficient,
    trace_from_count,
)


def test_class_of_a_prime_is_its_sign_vector(surfaces):
    cls = galois_class(surfaces["s4"], 7)
    assert cls.arguments[0] == -1 and cls.arguments[1] == 2
    assert cls.symbols == tuple(jacobi(a, 7) for a in cls.arguments)
    assert cls.bits == ((1, 0, 1, 1))
    assert cls.index == 13


def test_class_requires_a_good_prime(surfaces):
    with pytest.raises(UsageError):
        galois_class(surfaces["s1"], 13)


def test_class_count_matches_the_invariants(surfaces, efficient_tables):
    # 2^(b+2) classes: b odd bad primes plus the signs of -1 and 2
    for name, size in (("s1", 256), ("s2", 32), ("s3", 64), ("s4", 16)):
        table, _ = efficient_tables[name]
        assert len(table.entries) == size


@pytest.mark.parametrize("p", [17, 19, 31, 101])
@pytest.mark.parametrize("rank", [16, 17])
def test_trace_and_count_are_inverse_conversions(p, rank):
    for trace in range(rank % 2, 16, 2):
        count16 = count_mod16_from_trace(trace, p, rank)
        assert trace_from_count(count16, p, rank) == trace
        # the conversion must invert p modulo 16, not divide by it
        assert count16 == (p * p + rank * p + trace * p + 1) % 16


def test_trace_from_count_handles_fractional_traces():
    # s1 at p = 1009: the exact trace is 17382/1009, not an integer; its
    # mod-16 value is still well-defined because 1009 is odd
    count = 1009**2 + 16 * 1009 + 1 + 17382
    assert trace_from_count(count, 1009, 16) == 17382 * mod_inverse(1009, 16) % 16


PLANTED_X = {0: 5, 1: 2, 2: 7}  # mod 8
PLANTED_Y = {(0, 1): 3, (0, 2): 0, (1, 2): 1}  # mod 4
PLANTED_Z = {(0, 1, 2): 1}  # mod 2


def _planted_trace(members, n=6):
    import itertools

    mem = sorted(members)
    acc = sum(2 * PLANTED_X[i] for i in mem)
    acc += sum(4 * PLANTED_Y[p] for p in itertools.combinations(mem, 2))
    acc += sum(8 * PLANTED_Z[t] for t in itertools.combinations(mem, 3))
    return (n + acc) % 16


def test_congruence_system_recovers_planted_unknowns():
    # three slots, seven unknowns; feed traces generated from known
    # values of x (mod 8), y (mod 4), z (mod 2) through the model
    # trace = n + 2*sum x + 4*sum y + 8*sum z and demand full recovery
    system = CongruenceSystem(3, 6)
    subsets = [[], [0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2]]
    for fake_p, members in enumerate(subsets, start=101):
        system.add_observation(members, _planted_trace(members), prime=fake_p)
    assert system.is_determined()
    values = system.solve()
    for i, x in PLANTED_X.items():
        assert values[("x", (i,))] == x
    for pair, y in PLANTED_Y.items():
        assert values[("y", pair)] == y
    for triple, z in PLANTED_Z.items():
        assert values[("z", triple)] == z
    for members in subsets:
        assert system.predicted_trace(values, members) == _planted_trace(members)


def test_congruence_system_spots_contradictions():
    from sixlines.errors import MathInconsistencyError

    system = CongruenceSystem(3, 6)
    system.add_observation([0], 8, prime=11)
    with pytest.raises(MathInconsistencyError):
        system.add_observation([0], 12, prime=19)


def test_underdetermined_system_refuses_to_solve():
    from sixlines.errors import UndeterminedSystemError

    system = CongruenceSystem(3, 6)
    system.add_observation([], 6, prime=11)
    assert not system.is_determined()
    with pytest.raises(UndeterminedSystemError):
        system.solve()


def test_table_json_round_trip(efficient_tables):
    table, _ = efficient_tables["s2"]
    clone = TraceTable.from_json(table.to_json())
    assert clone == table


def test_table_save_load(tmp_path, efficient_tables):
    table, _ = efficient_tables["s4"]
    path = tmp_path / "s4_table.json"
    table.save(str(path))
    assert TraceTable.load(str(path)) == table


def test_table_rejects_wrong_parity_entries():
    with pytest.raises(TableFormatError):
        TraceTable(fingerprint="x", b=0, n=6, entries=[0, 2, 4, 7]).validate_structure()


def test_table_rejects_wrong_size():
    with pytest.raises(TableFormatError):
        TraceTable(fingerprint="x", b=0, n=6, entries=[0, 2]).validate_structure()


def test_table_guards_against_surface_mixups(surfaces, efficient_tables):
    table, _ = efficient_tables["s2"]
    with pytest.raises(TableFormatError):
        table.trace_mod16(surfaces["s1"], 17)


def test_efficient_init_stops_once_determined(surfaces):
    table, stats = init_efficient(surfaces["s4"])
    assert stats.determined_at is not None
    assert stats.determined_at <= 1000
    assert stats.primes_used[-1] == stats.determined_at
    assert len(table.entries) == 16
