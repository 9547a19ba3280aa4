"""Surface descriptions: six-line branch configurations and their reductions.

A surface here is the minimal resolution of a double plane ``W^2 = f_6``
whose branch sextic is a product of six lines in general position.  Two
description modes exist:

* ``lines`` — all six lines have integer coefficients; the sextic is
  their product.
* ``s5-rm`` — two rational lines plus a quartic that splits into four
  Galois-conjugate lines over the fifth cyclotomic field; the expanded
  integer sextic ships in the description together with the labelling of
  the conjugate factors by exponents of a primitive fifth root of unity.

Descriptions are immutable and hashable so point counts can be memoised
per (surface, prime).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Mapping, Sequence

from .errors import SurfaceValidationError
from .modular import is_prime

__all__ = [
    "Surface",
    "SurfaceInvariants",
    "load_surface",
    "surface_from_dict",
    "validate",
    "bad_primes",
    "is_good_prime",
    "invariants",
    "frobenius_line_permutation",
    "fixed_pair_count",
    "sextic_terms",
]

Monomial = tuple[int, int, int]

N_LINES = 6
ALL_PAIRS = tuple((i, j) for i in range(N_LINES) for j in range(i + 1, N_LINES))


@dataclass(frozen=True)
class Surface:
    """Immutable description of one branch configuration.

    ``lines`` is a tuple of six integer coefficient triples for mode
    ``lines`` and the two rational lines followed by four placeholder
    entries for mode ``s5-rm`` (the conjugate factors have no integer
    coefficients; they are tracked through ``conjugate_exponents``).
    ``sextic`` maps exponent triples to integer coefficients and is
    always the full degree-6 branch form.
    """

    name: str
    mode: str  # "lines" | "s5-rm"
    lines: tuple[tuple[int, int, int], ...]
    sextic: tuple[tuple[Monomial, int], ...]
    picard_rank: int
    trivial_galois_pic: bool
    declared_odd_bad_primes: tuple[int, ...] = ()
    rational_lines: tuple[int, ...] = ()  # 0-based indices, s5-rm only
    conjugate_exponents: tuple[tuple[int, int], ...] = ()  # (line index, zeta exponent)

    def sextic_dict(self) -> dict[Monomial, int]:
        return dict(self.sextic)

    @property
    def fingerprint(self) -> str:
        """Stable hex digest of the description plus the Picard rank.

        Trace tables embed this so a table can refuse to answer for a
        surface it was not built from.
        """
        payload = {
            "mode": self.mode,
            "lines": [list(l) for l in self.lines] if self.mode == "lines" else None,
            "sextic": sorted((list(m), c) for m, c in self.sextic),
            "picard_rank": self.picard_rank,
            "rational_lines": list(self.rational_lines),
            "conjugate_exponents": sorted(list(p) for p in self.conjugate_exponents),
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SurfaceInvariants:
    """What the counting pipeline needs to know about a surface."""

    picard_rank: int
    odd_bad_primes: tuple[int, ...]

    @property
    def b(self) -> int:
        """Number of odd bad primes (the class vector has b + 2 slots)."""
        return len(self.odd_bad_primes)

    @property
    def transcendental_rank(self) -> int:
        return 22 - self.picard_rank

    @property
    def class_moduli(self) -> tuple[int, ...]:
        """Jacobi-symbol arguments, in slot order: -1, 2, then odd bad primes."""
        return (-1, 2) + self.odd_bad_primes


def _expand_line_product(lines: Sequence[tuple[int, int, int]]) -> dict[Monomial, int]:
    terms: dict[Monomial, int] = {(0, 0, 0): 1}
    for a, b, c in lines:
        nxt: dict[Monomial, int] = {}
        for (i, j, k), coeff in terms.items():
            for delta, factor in (((1, 0, 0), a), ((0, 1, 0), b), ((0, 0, 1), c)):
                if factor == 0:
                    continue
                key = (i + delta[0], j + delta[1], k + delta[2])
                nxt[key] = nxt.get(key, 0) + coeff * factor
        terms = {m: c for m, c in nxt.items() if c != 0}
    return terms


def surface_from_dict(data: Mapping[str, object], name: str = "") -> Surface:
    """Build a :class:`Surface` from parsed JSON, without validating."""
    try:
        mode = str(data["mode"])
        rank = int(data["picard_rank"])  # type: ignore[arg-type]
        trivial = bool(data.get("trivial_galois_pic", False))
    except KeyError as exc:
        raise SurfaceValidationError(f"surface description missing field {exc}") from None
    label = str(data.get("name", name or "surface"))
    if mode == "six-rational-lines":  # canonical file-format name
        mode = "lines"

    if mode == "lines":
        raw_lines = data.get("lines")
        if not isinstance(raw_lines, list) or len(raw_lines) != N_LINES:
            raise SurfaceValidationError("mode 'lines' needs exactly six coefficient triples")
        lines = tuple(tuple(int(x) for x in row) for row in raw_lines)
        if any(len(row) != 3 for row in lines):
            raise SurfaceValidationError("each line needs exactly three coefficients")
        sextic = tuple(sorted(_expand_line_product(lines).items()))
        return Surface(
            name=label,
            mode=mode,
            lines=lines,  # type: ignore[arg-type]
            sextic=sextic,
            picard_rank=rank,
            trivial_galois_pic=trivial,
        )

    if mode == "s5-rm":
        raw_sextic = data.get("sextic")
        if not isinstance(raw_sextic, Mapping):
            raise SurfaceValidationError("mode 's5-rm' needs a 'sextic' coefficient table")
        terms: dict[Monomial, int] = {}
        for key, value in raw_sextic.items():
            parts = tuple(int(x) for x in str(key).split(","))
            if len(parts) != 3:
                raise SurfaceValidationError(f"bad monomial key {key!r}")
            terms[parts] = int(value)  # type: ignore[index]
        rational = tuple(int(i) - 1 for i in data.get("rational_lines", ()))  # type: ignore[union-attr]
        conj = tuple(
            (int(k) - 1, int(v)) for k, v in dict(data.get("conjugate_lines", {})).items()  # type: ignore[arg-type]
        )
        bad = tuple(sorted(int(p) for p in data.get("odd_bad_primes", ())))  # type: ignore[union-attr]
        lines = tuple(
            (1, 0, 0) if i == rational[0] else (0, 1, 0) if len(rational) > 1 and i == rational[1] else (0, 0, 0)
            for i in range(N_LINES)
        )
        return Surface(
            name=label,
            mode=mode,
            lines=lines,  # placeholders except the rational ones
            sextic=tuple(sorted(terms.items())),
            picard_rank=rank,
            trivial_galois_pic=trivial,
            declared_odd_bad_primes=bad,
            rational_lines=rational,
            conjugate_exponents=tuple(sorted(conj)),
        )

    raise SurfaceValidationError(f"unknown surface mode {mode!r}")


def load_surface(path: str) -> Surface:
    """Read a surface description file (JSON), validate it, return it."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SurfaceValidationError(f"{path}: not valid JSON ({exc})") from None
    surface = surface_from_dict(data, name=path)
    validate(surface)
    return surface


def _primitive(line: tuple[int, int, int]) -> tuple[int, int, int]:
    g = gcd(gcd(abs(line[0]), abs(line[1])), abs(line[2]))
    if g == 0:
        return line
    a, b, c = (x // g for x in line)
    for x in (a, b, c):
        if x != 0:
            return (a, b, c) if x > 0 else (-a, -b, -c)
    return (a, b, c)


def _det3(u: tuple[int, int, int], v: tuple[int, int, int], w: tuple[int, int, int]) -> int:
    return (
        u[0] * (v[1] * w[2] - v[2] * w[1])
        - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
    )


def _pair_content(u: tuple[int, int, int], v: tuple[int, int, int]) -> int:
    """gcd of the 2x2 minors: the primes where two lines become equal."""
    m01 = u[0] * v[1] - u[1] * v[0]
    m02 = u[0] * v[2] - u[2] * v[0]
    m12 = u[1] * v[2] - u[2] * v[1]
    return gcd(gcd(abs(m01), abs(m02)), abs(m12))


def validate(surface: Surface) -> None:
    """Check a description is usable; raise SurfaceValidationError if not.

    For ``lines`` mode this means: six nonzero integral lines, pairwise
    distinct in the projective sense, no three through a common point
    (over the rationals -- reductions are dealt with by
    :func:`bad_primes`).  For ``s5-rm``: a degree-6 form exactly
    divisible by the two declared rational coordinate lines, and a
    labelling of the four conjugate factors by the nonzero residues
    mod 5.  Both modes require Picard rank 16 or 17.
    """
    if surface.picard_rank not in (16, 17):
        raise SurfaceValidationError(
            f"unsupported Picard rank {surface.picard_rank} (need 16 or 17)"
        )
    if surface.mode == "lines":
        for idx, line in enumerate(surface.lines):
            if line == (0, 0, 0):
                raise SurfaceValidationError(f"line {idx + 1} is identically zero")
        prim = [_primitive(l) for l in surface.lines]
        for i, j in ALL_PAIRS:
            if prim[i] == prim[j]:
                raise SurfaceValidationError(
                    f"lines {i + 1} and {j + 1} coincide in the projective plane"
                )
        for i in range(N_LINES):
            for j in range(i + 1, N_LINES):
                for k in range(j + 1, N_LINES):
                    if _det3(surface.lines[i], surface.lines[j], surface.lines[k]) == 0:
                        raise SurfaceValidationError(
                            f"lines {i + 1}, {j + 1}, {k + 1} pass through a common point"
                        )
        return

    if surface.mode == "s5-rm":
        terms = surface.sextic_dict()
        if not terms:
            raise SurfaceValidationError("empty sextic")
        if any(sum(m) != 6 for m in terms):
            raise SurfaceValidationError("branch form is not homogeneous of degree 6")
        if len(surface.rational_lines) != 2:
            raise SurfaceValidationError("mode 's5-rm' needs exactly two rational lines")
        # The two rational lines must be the coordinate lines T1 and T2 and
        # divide the sextic exactly: every monomial carries T1*T2.
        if any(m[0] < 1 or m[1] < 1 for m in terms):
            raise SurfaceValidationError("declared rational lines do not divide the sextic")
        exponents = dict(surface.conjugate_exponents)
        expected = set(range(N_LINES)) - set(surface.rational_lines)
        if set(exponents) != expected or sorted(exponents.values()) != [1, 2, 3, 4]:
            raise SurfaceValidationError(
                "conjugate factors must label the four non-rational lines "
                "with the exponents 1..4"
            )
        for p in surface.declared_odd_bad_primes:
            if p == 2 or not is_prime(p):
                raise SurfaceValidationError(f"declared bad prime {p} is not an odd prime")
        if surface.picard_rank != 16:
            raise SurfaceValidationError("real-multiplication mode requires Picard rank 16")
        _plausibility_probe(surface)
        return

    raise SurfaceValidationError(f"unknown surface mode {surface.mode!r}")


def _factor_small(n: int) -> set[int]:
    """Prime divisors of |n| by trial division (inputs are tiny)."""
    n = abs(n)
    out: set[int] = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.add(n)
    return out


@lru_cache(maxsize=None)
def bad_primes(surface: Surface) -> frozenset[int]:
    """The odd primes of bad reduction for the branch configuration.

    (p = 2 is always bad for a double cover and is excluded throughout.)

    For ``lines`` mode the set is computed: an odd prime is bad iff two
    lines become proportional mod p (it divides the gcd of their 2x2
    minors) or three lines become concurrent (it divides a 3x3
    determinant).  For ``s5-rm`` the declared set is returned after the
    plausibility probe run by :func:`validate`.
    """
    if surface.mode == "s5-rm":
        return frozenset(surface.declared_odd_bad_primes)
    divisors: set[int] = set()
    for i, j in ALL_PAIRS:
        content = _pair_content(surface.lines[i], surface.lines[j])
        divisors |= _factor_small(content)
    for i in range(N_LINES):
        for j in range(i + 1, N_LINES):
            for k in range(j + 1, N_LINES):
                det = _det3(surface.lines[i], surface.lines[j], surface.lines[k])
                divisors |= _factor_small(det)
    divisors.discard(2)
    return frozenset(divisors)


def is_good_prime(surface: Surface, p: int) -> bool:
    """True iff p is an odd prime of good reduction for this surface."""
    return p != 2 and p not in bad_primes(surface) and is_prime(p)


def invariants(surface: Surface) -> SurfaceInvariants:
    return SurfaceInvariants(
        picard_rank=surface.picard_rank,
        odd_bad_primes=tuple(sorted(bad_primes(surface))),
    )


def frobenius_line_permutation(surface: Surface, p: int) -> tuple[int, ...]:
    """How Frobenius permutes the six branch lines over F_p.

    Returned as a tuple ``perm`` with ``perm[i]`` the 0-based image of
    line ``i``.  Rational lines are fixed; in ``s5-rm`` mode the
    conjugate factor labelled by the exponent ``a`` of the fifth root of
    unity goes to the factor labelled ``a*p mod 5``.
    """
    if not is_good_prime(surface, p):
        raise ValueError(f"p = {p} is not a good prime for {surface.name}")
    if surface.mode == "lines":
        return tuple(range(N_LINES))
    line_of_exponent = {a: i for i, a in surface.conjugate_exponents}
    perm = list(range(N_LINES))
    for i, a in surface.conjugate_exponents:
        perm[i] = line_of_exponent[(a * p) % 5]
    return tuple(perm)


def fixed_pair_count(perm: Sequence[int]) -> int:
    """Number of unordered line pairs preserved by a permutation.

    Each preserved pair is an intersection point of the branch sextic
    that survives as a rational point, hence contributes p extra points
    after resolving the corresponding double point.

    >>> fixed_pair_count((0, 1, 2, 3, 4, 5))
    15
    >>> fixed_pair_count((0, 1, 4, 5, 2, 3))   # (3 5)(4 6) on 1-based lines
    3
    >>> fixed_pair_count((0, 1, 3, 4, 5, 2))   # a 4-cycle
    1
    """
    return sum(1 for i, j in ALL_PAIRS if {perm[i], perm[j]} == {i, j})


def sextic_terms(surface: Surface) -> dict[Monomial, int]:
    """The integer branch sextic as an exponent-to-coefficient mapping."""
    return surface.sextic_dict()


def _plausibility_probe(surface: Surface, limit: int = 50) -> None:
    """Cross-examine a declared bad-prime set against small reductions.

    For every odd prime q <= limit *not* declared bad, the number of
    F_q-rational singular points of the branch sextic must equal the
    number of Frobenius-preserved line pairs.  A forgotten bad prime
    shows up immediately (for instance a factor degenerating to a
    multiple line makes the singular locus one-dimensional).
    """
    from .modular import primes_in_range  # local import to avoid cycles

    terms = surface.sextic_dict()
    declared = set(surface.declared_odd_bad_primes)
    for q in primes_in_range(3, limit):
        if q in declared:
            continue
        if q % 5 == 0:
            # Frobenius cannot permute the conjugate factors when the
            # fifth roots of unity collapse; such a prime is always bad.
            raise SurfaceValidationError(
                f"declared bad primes look wrong: {q} ramifies in the "
                "cyclotomic labelling and must be declared bad"
            )
        perm = _raw_permutation(surface, q)
        expected = fixed_pair_count(perm)
        got = _singular_point_count(terms, q)
        if got != expected:
            raise SurfaceValidationError(
                f"declared bad primes look wrong: the reduction mod {q} has "
                f"{got} rational singular points, expected {expected}"
            )


def _raw_permutation(surface: Surface, p: int) -> tuple[int, ...]:
    """Like frobenius_line_permutation but without the goodness check."""
    if surface.mode == "lines":
        return tuple(range(N_LINES))
    line_of_exponent = {a: i for i, a in surface.conjugate_exponents}
    perm = list(range(N_LINES))
    for i, a in surface.conjugate_exponents:
        perm[i] = line_of_exponent[(a * p) % 5]
    return tuple(perm)


def _singular_point_count(terms: Mapping[Monomial, int], q: int) -> int:
    """#{P in P^2(F_q) : f(P) = f_x(P) = f_y(P) = f_z(P) = 0}, brute force."""

    partials: list[dict[Monomial, int]] = [{}, {}, {}]
    for m, c in terms.items():
        for axis in range(3):
            if m[axis] > 0:
                d = list(m)
                d[axis] -= 1
                key = (d[0], d[1], d[2])
                partials[axis][key] = partials[axis].get(key, 0) + c * m[axis]

    pw = [[pow(x, e, q) for e in range(7)] for x in range(q)]

    def evaluate(poly: Mapping[Monomial, int], x: int, y: int, z: int) -> int:
        total = 0
        for (i, j, k), c in poly.items():
            total += c * pw[x][i] * pw[y][j] * pw[z][k]
        return total % q

    count = 0
    reps = [(1, y, z) for y in range(q) for z in range(q)]
    reps += [(0, 1, z) for z in range(q)]
    reps.append((0, 0, 1))
    for x, y, z in reps:
        if evaluate(terms, x, y, z):
            continue
        if all(evaluate(partials[a], x, y, z) == 0 for a in range(3)):
            count += 1
    return count
