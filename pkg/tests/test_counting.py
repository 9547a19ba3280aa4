"""The enumeration oracle and the coefficient backend.

The brute-force reference in ``reference.py`` shares no code with the
package (pure Python, Euler's criterion, a literal walk of P^2), so the
agreement below at small primes anchors everything the faster paths
build on.
"""

import pytest

from sixlines.counting import (
    BACKENDS,
    count_mod_p,
    naive_branch_count,
    naive_modp,
    resolve_backend,
    resolved_count,
)
from sixlines.errors import UsageError

from reference import branch_double_cover_count, resolved_surface_count


@pytest.mark.parametrize("name", ["s1", "s2", "s3", "s4", "s5"])
@pytest.mark.parametrize("p", [17, 19, 23])
def test_resolved_count_matches_the_brute_force_walk(surfaces, name, p):
    surface = surfaces[name]
    assert resolved_count(surface, p) == resolved_surface_count(surface, p)
    assert naive_branch_count(surface, p) == branch_double_cover_count(surface, p)


def test_counts_have_the_right_parities(surfaces):
    # The singular double cover has an odd number of points (p^2+p+1
    # plus an even character sum); resolving adds 15p or fewer, an odd
    # multiple of an odd p per fixed pair -- 15 pairs makes it even.
    for p in (17, 31, 37):
        naive = naive_branch_count(surfaces["s1"], p)
        full = resolved_count(surfaces["s1"], p)
        assert naive % 2 == 1
        assert full % 2 == 0
        assert full == naive + 15 * p


@pytest.mark.parametrize("name", ["s1", "s2", "s3", "s4", "s5"])
def test_coefficient_backend_agrees_mod_p(surfaces, name):
    surface = surfaces[name]
    for p in (17, 19, 31, 37, 41):
        from sixlines.surfaces import is_good_prime

        if not is_good_prime(surface, p):
            continue
        assert count_mod_p(surface, p) == resolved_count(surface, p) % p


def test_known_counts_at_small_primes(surfaces):
    # frozen from the brute-force reference
    assert resolved_count(surfaces["s1"], 17) == 562
    assert resolved_count(surfaces["s1"], 19) == 628
    assert resolved_count(surfaces["s5"], 3) == 16
    assert resolved_count(surfaces["s5"], 7) == 64
    assert resolved_count(surfaces["s5"], 13) == 196


def test_backend_registry(surfaces):
    assert set(BACKENDS) == {"naive", "coefficient"}
    assert resolve_backend("naive") is naive_modp

    def custom(surface, p):
        return 0

    assert resolve_backend(custom) is custom
    with pytest.raises(UsageError):
        resolve_backend("turbo")


def test_naive_modp_reduces_the_oracle(surfaces):
    s2 = surfaces["s2"]
    assert naive_modp(s2, 17) == resolved_count(s2, 17) % 17
