import pytest

from sixlines.fixtures import builtin_surface
from sixlines.tracetable import init_direct, init_efficient


@pytest.fixture(scope="session")
def surfaces():
    """All five bundled surfaces, keyed by short name."""
    return {name: builtin_surface(name) for name in ("s1", "s2", "s3", "s4", "s5")}


@pytest.fixture(scope="session")
def efficient_tables(surfaces):
    """Congruence-solved trace tables for the four all-rational-line surfaces."""
    out = {}
    for name in ("s1", "s2", "s3", "s4"):
        table, stats = init_efficient(surfaces[name])
        out[name] = (table, stats)
    return out


@pytest.fixture(scope="session")
def direct_tables(surfaces):
    """Witness-prime trace tables; s1 takes ~15s (scan to 21121)."""
    out = {}
    for name in ("s1", "s2", "s3", "s4"):
        table, stats = init_direct(surfaces[name])
        out[name] = (table, stats)
    return out
