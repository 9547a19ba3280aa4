"""Deliberately naive reference implementations for cross-checks.

Everything here is pure Python, written straight from the definitions,
and shares no code with the package: quadratic characters by Euler's
criterion, point counts by literally walking the projective plane.  Too
slow for real use, which is the point -- test values frozen elsewhere
were produced (or re-derivable) this way.
"""

from __future__ import annotations

from sixlines.surfaces import (
    Surface,
    fixed_pair_count,
    frobenius_line_permutation,
    sextic_terms,
)


def euler_chi(a: int, p: int) -> int:
    """Quadratic character of a mod an odd prime, via a^((p-1)/2)."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def plane_points(p: int):
    """The standard representatives of P^2(F_p): z=1, then z=0,y=1, then x=1."""
    for x in range(p):
        for y in range(p):
            yield (x, y, 1)
    for x in range(p):
        yield (x, 1, 0)
    yield (1, 0, 0)


def branch_double_cover_count(surface: Surface, p: int) -> int:
    """#{w^2 = f} over F_p by brute force: 1 + chi(f(P)) points above P."""
    terms = sextic_terms(surface)
    total = 0
    for x, y, z in plane_points(p):
        value = 0
        for (i, j, k), c in terms.items():
            value += c * pow(x, i, p) * pow(y, j, p) * pow(z, k, p)
        total += 1 + euler_chi(value, p)
    return total


def resolved_surface_count(surface: Surface, p: int) -> int:
    """Add the exceptional curves: p points per Frobenius-fixed line pair."""
    perm = frobenius_line_permutation(surface, p)
    return branch_double_cover_count(surface, p) + p * fixed_pair_count(perm)
