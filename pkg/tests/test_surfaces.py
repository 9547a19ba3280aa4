"""Surface descriptions: parsing, validation, bad primes, Frobenius."""

import json

import pytest

from sixlines.errors import SurfaceValidationError
from sixlines.fixtures import builtin_names, builtin_surface
from sixlines.surfaces import (
    bad_primes,
    fixed_pair_count,
    frobenius_line_permutation,
    invariants,
    is_good_prime,
    load_surface,
    surface_from_dict,
    validate,
)

# Bad-reduction sets as published; the package convention keeps 2 out of
# the returned set (a double cover is always bad at 2) and rejects it in
# is_good_prime instead.
PUBLISHED_BAD = {
    "s1": {2, 3, 5, 7, 11, 13, 29},
    "s2": {2, 3, 5, 7},
    "s3": {2, 3, 5, 7, 11},
    "s4": {2, 3, 5},
    "s5": {2, 5},
}


def test_all_fixtures_validate(surfaces):
    for name in builtin_names():
        validate(surfaces[name])  # raises on failure


def test_bad_primes_match_published_sets(surfaces):
    for name, want in PUBLISHED_BAD.items():
        assert set(bad_primes(surfaces[name])) == want - {2}, name
        assert not is_good_prime(surfaces[name], 2)


def test_good_prime_edges(surfaces):
    s1 = surfaces["s1"]
    assert not is_good_prime(s1, 29)
    assert is_good_prime(s1, 31)
    assert not is_good_prime(s1, 33)  # composite


def test_picard_ranks(surfaces):
    assert invariants(surfaces["s1"]).picard_rank == 16
    assert invariants(surfaces["s3"]).picard_rank == 17
    assert invariants(surfaces["s3"]).transcendental_rank == 5
    assert invariants(surfaces["s1"]).transcendental_rank == 6


def test_canonical_mode_string_round_trips(surfaces):
    raw = {
        "name": "demo",
        "mode": "six-rational-lines",
        "lines": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3], [1, -1, 2]],
        "picard_rank": 16,
        "trivial_galois_pic": True,
    }
    surface = surface_from_dict(raw)
    assert surface.mode == "lines"
    validate(surface)


def test_five_lines_is_a_parse_error():
    raw = {
        "name": "broken",
        "mode": "six-rational-lines",
        "lines": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3]],
        "picard_rank": 16,
    }
    with pytest.raises(SurfaceValidationError):
        surface_from_dict(raw)


def test_load_surface_reports_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(SurfaceValidationError):
        load_surface(str(path))


def test_concurrent_triple_is_rejected():
    # lines 1, 2, 4 all pass through (0:0:1)
    raw = {
        "name": "concurrent",
        "mode": "six-rational-lines",
        "lines": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 2, 3], [1, -1, 2]],
        "picard_rank": 16,
    }
    with pytest.raises(SurfaceValidationError):
        validate(surface_from_dict(raw))


def test_repeated_line_is_rejected():
    raw = {
        "name": "repeated",
        "mode": "six-rational-lines",
        "lines": [[1, 0, 0], [2, 0, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3], [1, -1, 2]],
        "picard_rank": 16,
    }
    with pytest.raises(SurfaceValidationError):
        validate(surface_from_dict(raw))


def test_frobenius_action_on_rational_lines_is_trivial(surfaces):
    assert frobenius_line_permutation(surfaces["s1"], 17) == (0, 1, 2, 3, 4, 5)


@pytest.mark.parametrize(
    "p, expected_cycle",
    [
        (11, (0, 1, 2, 3, 4, 5)),  # p = 1 mod 5: all lines rational
        (19, (0, 1, 4, 5, 2, 3)),  # p = 4: two transpositions
        (7, (0, 1, 3, 4, 5, 2)),  # p = 2: a 4-cycle on the last four
        (13, (0, 1, 5, 2, 3, 4)),  # p = 3: the inverse 4-cycle
    ],
)
def test_frobenius_action_on_the_conjugate_lines(surfaces, p, expected_cycle):
    assert frobenius_line_permutation(surfaces["s5"], p) == expected_cycle


def test_fixed_pair_count_from_cycle_type(surfaces):
    # identity: all 15 pairs; (3 5)(4 6): {1,2} plus the two swapped
    # pairs themselves; 4-cycle: only {1,2} survives
    assert fixed_pair_count((0, 1, 2, 3, 4, 5)) == 15
    assert fixed_pair_count(frobenius_line_permutation(surfaces["s5"], 19)) == 3
    assert fixed_pair_count(frobenius_line_permutation(surfaces["s5"], 7)) == 1


def test_undeclared_bad_prime_is_caught_by_the_probe(surfaces):
    s5 = surfaces["s5"]
    raw = json.loads(
        json.dumps(
            {
                "name": "s5-missing-bad",
                "mode": "s5-rm",
                "sextic": {
                    ",".join(map(str, mono)): c for mono, c in s5.sextic
                },
                "rational_lines": [1, 2],
                "conjugate_lines": {"3": 1, "4": 2, "5": 4, "6": 3},
                "odd_bad_primes": [],  # forgot 5
                "picard_rank": 16,
                "trivial_galois_pic": False,
            }
        )
    )
    with pytest.raises(SurfaceValidationError):
        validate(surface_from_dict(raw))


def test_fingerprint_is_stable_and_mode_sensitive(surfaces):
    a = surfaces["s1"].fingerprint
    assert a == builtin_surface("s1").fingerprint
    assert a != surfaces["s2"].fingerprint
    assert len(a) == 16
