"""Counting shortcut for the surface with real multiplication.

The bundled surface ``s5`` has two rational branch lines and four that
a cyclic Galois group of order four permutes (they are labelled by the
nonzero residues mod 5, acted on by multiplication by p).  Its extra
endomorphisms squeeze the Frobenius spectrum so hard that quadratic
residue data at p replaces the whole sign-class table:

* p = 2, 3 mod 5: #S(F_p) = p^2 + 2p + 1 on the nose.
* p = 4 mod 5: two transcendental eigenvalues are forced to -1, so the
  count lies in a window of length 8p + 1 whose residue mod 8 is
  determined by whether -1 is a square mod p.
* p = 1 mod 5: two eigenvalues are forced to +1, again a window of
  length 8p + 1, with the residue now known mod 16 through the square
  classes of -1, z-1 and z+1 for z a primitive fifth root of unity.

Note the trace on the transcendental part is generally a fraction with
denominator p (only its 2-adic residue is constrained), so everything
here works with counts, never with integer trace candidates.  One
modulo-p point count then pins #S(F_p) by the Chinese remainder
theorem -- with one exception: in the p = 4 mod 5 case the window is
one longer than the modulus 8p and both endpoints can survive.  The
lower endpoint would mean an all-(-1) spectrum, which would force p to
an odd power into the discriminant of the Picard lattice, contradicting
the intersection form of the line and node classes; so the tie always
breaks upward.  (This genuinely happens: p = 199 is the smallest case.)
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

from .counting import count_mod_p
from .errors import MathInconsistencyError, UsageError
from .modular import crt_pair, mod_inverse
from .surfaces import Surface, is_good_prime

__all__ = [
    "RmFrobeniusData",
    "RmTraceConstraint",
    "RmCountResult",
    "primitive_fifth_root",
    "rm_frobenius_data",
    "rm_trace_constraint",
    "rm_count",
    "rm_count_result",
]


@dataclass(frozen=True)
class RmFrobeniusData:
    """Quadratic-residue data describing Frobenius at p.

    The zeta flags are populated exactly when p = 1 (mod 5).  They do
    depend on which primitive fifth root the search found (only the
    decision derived from them is choice-free), so ``zeta`` records the
    choice.
    """

    p: int
    p_mod_5: int
    minus_one_square: bool
    zeta: int | None = None
    zeta_minus_one_square: bool | None = None
    zeta_plus_one_square: bool | None = None


@dataclass(frozen=True)
class RmTraceConstraint:
    """Residue knowledge about the transcendental trace at one prime.

    ``t_min``/``t_max`` bound the trace as a real number, inducing the
    count window [p^2 + (a + t_min)p + 1, p^2 + (a + t_max)p + 1] for
    a the algebraic trace; ``residue`` constrains the 2-adic trace mod
    ``modulus`` (trivially for the exact-zero kind).
    """

    kind: str  # "exact-zero" | "mod8" | "mod16"
    modulus: int
    residue: int
    t_min: int
    t_max: int
    algebraic_trace: int
    p: int


@dataclass(frozen=True)
class RmCountResult:
    p: int
    count: int
    trace_mod16: int  # 2-adic trace residue of the transcendental part
    algebraic_trace: int
    constraint: RmTraceConstraint


def primitive_fifth_root(p: int) -> int:
    """Smallest-witness primitive fifth root of unity mod p = 1 (mod 5)."""
    if p % 5 != 1:
        raise UsageError(f"F_{p} contains no primitive fifth root of unity")
    e = (p - 1) // 5
    for x in range(2, p):
        z = pow(x, e, p)
        if z != 1:
            # z^5 = x^(p-1) = 1 and z != 1, so z has exact order 5
            return z
    raise MathInconsistencyError(f"no fifth root of unity found mod {p}")


def _is_square(v: int, p: int) -> bool:
    v %= p
    if v == 0:
        raise MathInconsistencyError("square test on zero is meaningless here")
    return pow(v, (p - 1) // 2, p) == 1


def rm_frobenius_data(surface: Surface, p: int) -> RmFrobeniusData:
    if surface.mode != "s5-rm":
        raise UsageError(f"{surface.name} does not carry the real-multiplication structure")
    if not is_good_prime(surface, p):
        raise UsageError(f"p = {p} is not a good prime for {surface.name}")
    data = RmFrobeniusData(p=p, p_mod_5=p % 5, minus_one_square=_is_square(-1, p))
    if data.p_mod_5 == 1:
        data = _with_zeta(data, primitive_fifth_root(p))
    return data


def _with_zeta(data: RmFrobeniusData, zeta: int) -> RmFrobeniusData:
    p = data.p
    return replace(
        data,
        zeta=zeta,
        zeta_minus_one_square=_is_square(zeta - 1, p),
        zeta_plus_one_square=_is_square(zeta + 1, p),
    )


def _algebraic_trace(p_mod_5: int) -> int:
    # orbits of the four conjugate lines under multiplication by p:
    # trivial (16 algebraic classes with trivial action), two 2-cycles
    # on the line classes (4), or one 4-cycle (2)
    return {1: 16, 2: 2, 3: 2, 4: 4}[p_mod_5]


def _constraint_from(data: RmFrobeniusData) -> RmTraceConstraint:
    a = _algebraic_trace(data.p_mod_5)
    if data.p_mod_5 in (2, 3):
        return RmTraceConstraint(
            kind="exact-zero", modulus=1, residue=0,
            t_min=0, t_max=0, algebraic_trace=a, p=data.p,
        )
    if data.p_mod_5 == 4:
        return RmTraceConstraint(
            kind="mod8", modulus=8, residue=6 if data.minus_one_square else 2,
            t_min=-6, t_max=2, algebraic_trace=a, p=data.p,
        )
    if data.minus_one_square and data.zeta_minus_one_square and data.zeta_plus_one_square:
        # -1, z-1 and z^2-1 = (z-1)(z+1) are all squares
        residue = 6
    elif data.minus_one_square and not data.zeta_plus_one_square:
        residue = 2
    else:
        residue = 14
    return RmTraceConstraint(
        kind="mod16", modulus=16, residue=residue,
        t_min=-2, t_max=6, algebraic_trace=a, p=data.p,
    )


def rm_trace_constraint(data: RmFrobeniusData) -> RmTraceConstraint:
    """Constrain the transcendental trace from the residue data.

    The individual square flags are *not* invariant under replacing the
    fifth root of unity, but the resulting constraint is; this is
    asserted by recomputing with all four primitive roots.
    """
    constraint = _constraint_from(data)
    if data.p_mod_5 == 1:
        assert data.zeta is not None
        other = data.zeta
        for _ in range(3):
            other = other * data.zeta % data.p
            if _constraint_from(_with_zeta(data, other)) != constraint:
                raise MathInconsistencyError(
                    f"trace residue at p = {data.p} depends on the choice of "
                    "the fifth root of unity; quadratic-character arithmetic "
                    "is broken"
                )
    return constraint


def rm_count(p: int, constraint: RmTraceConstraint, modp_backend: Callable[[int], int]) -> int:
    """Exact #S(F_p) from the residue constraint plus one mod-p count.

    ``modp_backend`` maps a prime to #S(F_p) mod p.  It is consulted
    even in the exact-zero case, as a consistency check.
    """
    a = constraint.algebraic_trace
    count_modp = modp_backend(p) % p
    if constraint.kind == "exact-zero":
        expected = (p * p + a * p + 1) % p
        if count_modp != expected:
            raise MathInconsistencyError(
                f"closed-form count at p = {p} is {expected} mod p "
                f"but the backend reports {count_modp}"
            )
        return p * p + a * p + 1

    mod = constraint.modulus
    count_res = (p * p + (a + constraint.residue) * p + 1) % mod
    combined = crt_pair(count_res, mod, count_modp, p)
    lo = p * p + (a + constraint.t_min) * p + 1
    hi = p * p + (a + constraint.t_max) * p + 1
    step = mod * p
    first = lo + (combined - lo) % step
    candidates = []
    while first <= hi:
        candidates.append(first)
        first += step
    if not candidates:
        raise MathInconsistencyError(
            f"no count in [{lo}, {hi}] matches the residues at p = {p}"
        )
    if len(candidates) == 1:
        return candidates[0]
    if constraint.kind == "mod8" and candidates == [lo, hi]:
        # Both endpoints fit the residues; the lower one is the excluded
        # all-(-1) spectrum, so the upper one is the count.
        return hi
    raise MathInconsistencyError(
        f"count at p = {p} not pinned: candidates {candidates}"
    )


def rm_count_result(
    surface: Surface,
    p: int,
    modp_backend: Callable[[int], int] | None = None,
) -> RmCountResult:
    """Convenience wrapper: data, constraint, count and 2-adic trace.

    The default backend is the coefficient-extraction counter.
    """
    if modp_backend is None:
        modp_backend = lambda q: count_mod_p(surface, q)  # noqa: E731
    constraint = rm_trace_constraint(rm_frobenius_data(surface, p))
    count = rm_count(p, constraint, modp_backend)
    a = constraint.algebraic_trace
    trace_mod16 = (count - p * p - a * p - 1) * mod_inverse(p, 16) % 16
    return RmCountResult(
        p=p,
        count=count,
        trace_mod16=trace_mod16,
        algebraic_trace=a,
        constraint=constraint,
    )
