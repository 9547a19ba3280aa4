"""Two-torsion Brauer classes of the double plane, over GF(2).

The resolved double cover pulls the hyperplane class and the fifteen
exceptional classes back to a rank-16 sublattice of the Picard group.
Working mod 2, the classes supporting a 2-torsion Brauer element form
the "even intersection" subspace M (dimension 11), and the Brauer group
itself is the order-64 quotient of M by the six line-class relations.

Everything is represented as 16-bit masks: bit 0 is the hyperplane
class l, bits 1..15 the pair classes e_ij in lexicographic order.  The
machinery certifies the structural facts the counting pipeline relies
on: the symmetric group on the six lines acts through the quotient, a
distinguished pentagon class has orbit 12 with icosahedral stabilizer,
its alternating orbit gives a basis permuted in a way that realizes an
outer automorphism of Sym(6), and the published order-4 Galois matrices
for the real-multiplication surface act exactly like a 4-cycle on the
non-rational lines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .errors import MathInconsistencyError, UsageError

__all__ = [
    "PAIRS",
    "pair_bit",
    "mask_from_pairs",
    "permute_mask",
    "build_even_subspace",
    "build_brauer_quotient",
    "BrauerElement",
    "BrauerQuotient",
    "sym6_action",
    "orbit_stabilizer",
    "OuterCertificate",
    "verify_outer",
    "G4_MATRIX",
    "G2_MATRIX",
    "S5MatrixReport",
    "verify_s5_matrices",
    "BrauerReport",
    "structure_report",
]

#: Unordered pairs {i, j} of lines, 1-based, lexicographic.
PAIRS: tuple[tuple[int, int], ...] = tuple(
    (i, j) for i in range(1, 7) for j in range(i + 1, 7)
)
_PAIR_BIT = {pair: k + 1 for k, pair in enumerate(PAIRS)}
N_COORDS = 16
L_BIT = 1  # mask of the hyperplane coordinate

#: Generator of the cyclic Galois action on the Brauer classes of the
#: real-multiplication surface, in the pentagon-class basis, and its
#: square.  These are published data, re-verified by verify_s5_matrices.
G4_MATRIX: tuple[tuple[int, ...], ...] = (
    (1, 1, 1, 0, 1, 1),
    (0, 1, 1, 1, 1, 1),
    (1, 0, 1, 1, 1, 1),
    (1, 1, 0, 1, 1, 1),
    (1, 1, 1, 1, 0, 1),
    (1, 1, 1, 1, 1, 0),
)
G2_MATRIX: tuple[tuple[int, ...], ...] = (
    (0, 1, 0, 0, 0, 0),
    (1, 0, 0, 0, 0, 0),
    (0, 0, 0, 1, 0, 0),
    (0, 0, 1, 0, 0, 0),
    (0, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 1),
)


def pair_bit(i: int, j: int) -> int:
    """Mask of the class e_ij."""
    if i == j or not (1 <= i <= 6 and 1 <= j <= 6):
        raise UsageError(f"need two distinct lines in 1..6, got {i}, {j}")
    return 1 << _PAIR_BIT[(min(i, j), max(i, j))]


def mask_from_pairs(pairs: Iterable[tuple[int, int]], with_l: bool = False) -> int:
    mask = L_BIT if with_l else 0
    for i, j in pairs:
        mask ^= pair_bit(i, j)
    return mask


def permute_mask(sigma: Sequence[int], mask: int) -> int:
    """Act on coordinates: l is fixed, e_ij goes to e_{sigma(i) sigma(j)}."""
    out = mask & L_BIT
    for (i, j), k in _PAIR_BIT.items():
        if mask >> k & 1:
            out ^= pair_bit(sigma[i - 1], sigma[j - 1])
    return out


# --- small GF(2) helpers (vectors and matrices as int bitmasks) ------------


def _echelon(rows: Iterable[int]) -> list[tuple[int, int]]:
    """Reduced echelon form; returns (pivot_bit, row) pairs, high bit first."""
    basis: list[tuple[int, int]] = []
    for row in rows:
        for pivot, b in basis:
            if row >> pivot & 1:
                row ^= b
        if row:
            pivot = row.bit_length() - 1
            basis = [(p, b ^ row if b >> pivot & 1 else b) for p, b in basis]
            basis.append((pivot, row))
    basis.sort(reverse=True)
    return basis


def _rank(rows: Iterable[int]) -> int:
    return len(_echelon(rows))


def _kernel(rows: Sequence[int], width: int) -> list[int]:
    """Basis of the solution space of the homogeneous system."""
    ech = _echelon(rows)
    pivots = {p for p, _ in ech}
    free = [c for c in range(width) if c not in pivots]
    kernel = []
    for f in free:
        v = 1 << f
        for p, row in ech:
            if row >> f & 1:
                v ^= 1 << p
        kernel.append(v)
    return kernel


def _condition_rows() -> list[int]:
    # the even-intersection conditions: a + sum_{j != i} a_ij = 0
    return [
        L_BIT | sum(pair_bit(i, j) for j in range(1, 7) if j != i) for i in range(1, 7)
    ]


def build_even_subspace() -> tuple[int, ...]:
    """Basis of the subspace M cut out by the six parity conditions."""
    basis = tuple(_kernel(_condition_rows(), N_COORDS))
    if len(basis) != 11:
        raise MathInconsistencyError(
            f"even-intersection subspace has dimension {len(basis)}, expected 11"
        )
    return basis


@dataclass(frozen=True)
class BrauerElement:
    """A 2-torsion Brauer class, held as its canonical representative in
    M (reduced against the echelonized relation space)."""

    representative: int

    def __xor__(self, other: "BrauerElement") -> "BrauerElement":
        return BrauerElement(self.representative ^ other.representative)


@dataclass(frozen=True)
class BrauerQuotient:
    """M modulo the six line relations, with fixed canonical reductions."""

    even_basis: tuple[int, ...]
    relation_echelon: tuple[tuple[int, int], ...]  # (pivot, row) pairs
    quotient_basis: tuple[int, ...]  # canonical representatives

    @property
    def dim_even(self) -> int:
        return len(self.even_basis)

    @property
    def dim_relations(self) -> int:
        return len(self.relation_echelon)

    @property
    def dim(self) -> int:
        return len(self.quotient_basis)

    def contains(self, mask: int) -> bool:
        return all(bin(mask & row).count("1") % 2 == 0 for row in _condition_rows())

    def reduce(self, mask: int) -> int:
        for pivot, row in self.relation_echelon:
            if mask >> pivot & 1:
                mask ^= row
        return mask

    def element(self, mask: int) -> BrauerElement:
        if not self.contains(mask):
            raise UsageError(f"mask {mask:#06x} violates the parity conditions")
        return BrauerElement(self.reduce(mask))

    def coordinates(self, elem: BrauerElement) -> int:
        """Expand a class over the quotient basis; bit k = basis class k."""
        residue = self.reduce(elem.representative)
        combo = 0
        work = [(rep, 1 << k) for k, rep in enumerate(self.quotient_basis)]
        ech: list[tuple[int, int, int]] = []
        for rep, tag in work:
            r, t = rep, tag
            for pivot, b, bt in ech:
                if r >> pivot & 1:
                    r ^= b
                    t ^= bt
            ech.append((r.bit_length() - 1, r, t))
        for pivot, b, bt in ech:
            if residue >> pivot & 1:
                residue ^= b
                combo ^= bt
        if residue:
            raise MathInconsistencyError("class not spanned by the quotient basis")
        return combo


def build_brauer_quotient() -> BrauerQuotient:
    """Assemble M, the relation space, and a canonical quotient basis."""
    even = build_even_subspace()
    relations = _condition_rows()  # each row is itself the class l + sum e_ij
    for rel in relations:
        if _rank(list(even) + [rel]) != len(even):
            raise MathInconsistencyError("a line relation escapes the even subspace")
    rel_ech = tuple(_echelon(relations))
    if len(rel_ech) != 5:
        raise MathInconsistencyError(
            f"relation space has dimension {len(rel_ech)}, expected 5"
        )
    quotient = BrauerQuotient(
        even_basis=even, relation_echelon=rel_ech, quotient_basis=()
    )
    picked: list[int] = []
    for vec in even:
        cand = quotient.reduce(vec)
        if cand and _rank(picked + [cand]) > len(picked):
            picked.append(cand)
    if len(picked) != 6:
        raise MathInconsistencyError(
            f"Brauer quotient has dimension {len(picked)}, expected 6"
        )
    return BrauerQuotient(
        even_basis=even, relation_echelon=rel_ech, quotient_basis=tuple(picked)
    )


# --- the symmetric-group action --------------------------------------------

Permutation = tuple[int, int, int, int, int, int]  # images of 1..6


def _parity(sigma: Sequence[int]) -> int:
    inv = sum(
        1
        for a in range(6)
        for b in range(a + 1, 6)
        if sigma[a] > sigma[b]
    )
    return inv % 2


def _compose(sigma: Sequence[int], tau: Sequence[int]) -> Permutation:
    """(sigma . tau)(x) = sigma(tau(x))."""
    return tuple(sigma[t - 1] for t in tau)  # type: ignore[return-value]


def _all_perms(alternating: bool = False) -> list[Permutation]:
    return [
        p for p in permutations(range(1, 7)) if not (alternating and _parity(p))
    ]


def sym6_action(quotient: BrauerQuotient, sigma: Sequence[int]) -> tuple[int, ...]:
    """Matrix of a line permutation on the quotient, as row masks.

    Row i holds the coordinates of the image of quotient basis class i.
    The action permutes the parity conditions, hence preserves both M
    and the relation space; this is re-verified on every call (cheap).
    """
    rows = []
    conditions = set(_condition_rows())
    if {permute_mask(sigma, c) for c in conditions} != conditions:
        raise MathInconsistencyError("permutation does not preserve the conditions")
    for rep in quotient.quotient_basis:
        image = quotient.element(permute_mask(sigma, rep))
        rows.append(quotient.coordinates(image))
    return tuple(rows)


def _gf2_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Product of row-mask matrices: (a.b) row i = sum of b-rows picked by a."""
    out = []
    for row in a:
        acc = 0
        k = 0
        while row >> k:
            if row >> k & 1:
                acc ^= b[k]
            k += 1
        out.append(acc)
    return tuple(out)


def _gf2_identity(n: int) -> tuple[int, ...]:
    return tuple(1 << i for i in range(n))


def _gf2_add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x ^ y for x, y in zip(a, b))


def _gf2_pow(a: Sequence[int], k: int) -> tuple[int, ...]:
    out = _gf2_identity(len(a))
    for _ in range(k):
        out = _gf2_mul(out, a)
    return out


def _gf2_transpose(a: Sequence[int]) -> tuple[int, ...]:
    n = len(a)
    return tuple(
        sum((a[r] >> c & 1) << r for r in range(n)) for c in range(n)
    )


def _gf2_inv(a: Sequence[int]) -> tuple[int, ...]:
    n = len(a)
    rows = list(a)
    inv = list(_gf2_identity(n))
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r] >> col & 1), None)
        if piv is None:
            raise MathInconsistencyError("singular matrix over GF(2)")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        for r in range(n):
            if r != col and rows[r] >> col & 1:
                rows[r] ^= rows[col]
                inv[r] ^= inv[col]
    return tuple(inv)


def _matrix_order(a: Sequence[int], limit: int = 16) -> int:
    acc = tuple(a)
    ident = _gf2_identity(len(a))
    for k in range(1, limit + 1):
        if acc == ident:
            return k
        acc = _gf2_mul(acc, a)
    raise MathInconsistencyError(f"matrix order exceeds {limit}")


def _rows_to_masks(mat: Sequence[Sequence[int]]) -> tuple[int, ...]:
    return tuple(sum((int(v) & 1) << c for c, v in enumerate(row)) for row in mat)


def orbit_stabilizer(
    quotient: BrauerQuotient,
    elem: BrauerElement,
    group: str = "sym6",
) -> tuple[tuple[BrauerElement, ...], int]:
    """Orbit (in first-visit order) and stabilizer order, by enumeration."""
    if group not in ("sym6", "alt6"):
        raise UsageError("group must be 'sym6' or 'alt6'")
    perms = _all_perms(alternating=group == "alt6")
    seen: dict[int, None] = {}
    stab = 0
    for sigma in perms:
        image = quotient.reduce(permute_mask(sigma, elem.representative))
        if image == elem.representative:
            stab += 1
        if image not in seen:
            seen[image] = None
    orbit = tuple(BrauerElement(rep) for rep in seen)
    if len(orbit) * stab != len(perms):
        raise MathInconsistencyError("orbit-stabilizer count fails; action broken")
    return orbit, stab


def pentagon_class(quotient: BrauerQuotient) -> BrauerElement:
    """The distinguished class supported on a pentagon through lines 1..5."""
    return quotient.element(
        mask_from_pairs([(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    )


# --- the outer automorphism ------------------------------------------------


@dataclass(frozen=True)
class OuterCertificate:
    """The induced permutation of the labeled orbit classes, certified to
    be an automorphism of the symmetric group that no relabeling
    explains (a transposition lands on a fixed-point-free involution)."""

    labels: tuple[BrauerElement, ...]  # b_1 .. b_6
    invariant: BrauerElement  # c = b_1 + ... + b_6
    mapping: Mapping[Permutation, Permutation]
    transposition_image: Permutation
    transposition_cycle_type: tuple[int, ...]

    @property
    def outer(self) -> bool:
        return self.transposition_cycle_type != (2, 1, 1, 1, 1)


def _cycle_type(sigma: Permutation) -> tuple[int, ...]:
    seen = set()
    lengths = []
    for start in range(1, 7):
        if start in seen:
            continue
        length = 0
        x = start
        while x not in seen:
            seen.add(x)
            x = sigma[x - 1]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def class_labels(quotient: BrauerQuotient) -> tuple[BrauerElement, ...]:
    """b_1..b_6: the alternating orbit of the pentagon class, b_6 the
    pentagon itself and b_1..b_5 the rest in first-visit order.

    The stabilizer of b_6 is a transitively embedded icosahedral group,
    not a point stabilizer, so no line-based labeling exists.  Any two
    fixed enumerations differ by a relabeling, which twists the
    companion automorphism by an inner one and changes no cycle type.
    """
    b6 = pentagon_class(quotient)
    orbit, _ = orbit_stabilizer(quotient, b6, "alt6")
    if len(orbit) != 6 or orbit[0] != b6:
        raise MathInconsistencyError(
            f"alternating orbit of the pentagon class has size {len(orbit)}"
        )
    labels = orbit[1:] + (b6,)
    if _rank([b.representative for b in labels]) != 6:
        raise MathInconsistencyError("labeled orbit classes are not independent")
    return labels


def verify_outer(quotient: BrauerQuotient) -> OuterCertificate:
    """Certify that the action on the labeled orbit realizes an outer
    automorphism of the symmetric group.

    For every permutation, each b_i maps to some b_j (even case) or
    b_j + c (odd case); collecting j as a function of i yields the
    companion permutation.  The companion map is checked to be a
    homomorphism against a generating pair -- which certifies it on the
    whole group by induction on word length -- and bijective.  Outerness
    follows from a transposition landing on cycle type 2+2+2, which no
    conjugation can do.
    """
    labels = class_labels(quotient)
    total = 0
    for b in labels:
        total ^= b.representative
    invariant = BrauerElement(quotient.reduce(total))
    lookup = {b.representative: (idx + 1, 0) for idx, b in enumerate(labels)}
    lookup.update(
        {
            quotient.reduce(b.representative ^ invariant.representative): (idx + 1, 1)
            for idx, b in enumerate(labels)
        }
    )
    if len(lookup) != 12:
        raise MathInconsistencyError("labeled classes and their shifts collide")
    mapping: dict[Permutation, Permutation] = {}
    for sigma in _all_perms():
        par = _parity(sigma)
        companion = [0] * 6
        for idx, b in enumerate(labels):
            image = quotient.reduce(permute_mask(sigma, b.representative))
            if image not in lookup:
                raise MathInconsistencyError(
                    "image class leaves the labeled orbit and its shift"
                )
            j, shifted = lookup[image]
            if shifted != par:
                raise MathInconsistencyError(
                    "parity of the shift disagrees with the permutation sign"
                )
            companion[idx] = j
        if sorted(companion) != [1, 2, 3, 4, 5, 6]:
            raise MathInconsistencyError("companion map is not a permutation")
        mapping[sigma] = tuple(companion)  # type: ignore[assignment]
    if len(set(mapping.values())) != len(mapping):
        raise MathInconsistencyError("companion map is not injective")
    generators = [(2, 1, 3, 4, 5, 6), (2, 3, 4, 5, 6, 1)]
    for sigma in mapping:
        for gen in generators:
            left = mapping[_compose(sigma, gen)]
            right = _compose(mapping[sigma], mapping[gen])
            if left != right:
                raise MathInconsistencyError("companion map is not a homomorphism")
    transposition = (2, 1, 3, 4, 5, 6)
    image = mapping[transposition]
    return OuterCertificate(
        labels=labels,
        invariant=invariant,
        mapping=mapping,
        transposition_image=image,
        transposition_cycle_type=_cycle_type(image),
    )


# --- the published Galois matrices -----------------------------------------


@dataclass(frozen=True)
class S5MatrixReport:
    order_g4: int
    square_is_g2: bool
    square_relabeling: tuple[int, ...] | None
    dual_order: int
    conjugate_to_line_cycle: bool
    rank_profile: tuple[int, ...]

    @property
    def square_matches_print(self) -> bool:
        """Does G4^2 equal the printed involution in some ordering of the
        basis?  The published matrices come with no pinned basis, only
        the promise that a suitable one exists, so an ordering ambiguity
        is inherent to the data."""
        return self.square_relabeling is not None

    @property
    def ok(self) -> bool:
        return (
            self.order_g4 == 4
            and self.square_matches_print
            and self.dual_order == 4
            and self.conjugate_to_line_cycle
        )


def verify_s5_matrices(
    quotient: BrauerQuotient,
    g4: Sequence[Sequence[int]] = G4_MATRIX,
    g2: Sequence[Sequence[int]] = G2_MATRIX,
) -> S5MatrixReport:
    """Check the published cyclic Galois action on the Brauer classes.

    Certifies the order, that the square is the published involution (the
    published data satisfy this after swapping two basis labels -- the
    basis itself is never pinned, so the labeling is free), the dual
    action obtained from transposed inverses, and conjugacy to the
    quotient matrix of a 4-cycle on the four non-rational lines (the
    rank profile of powers of A + E classifies unipotent classes over
    GF(2), so equal profiles mean conjugate matrices).
    """
    a4 = _rows_to_masks(g4)
    a2 = _rows_to_masks(g2)
    order4 = _matrix_order(a4)
    square = _gf2_mul(a4, a4)
    relabeling: tuple[int, ...] | None = None
    if square == a2:
        relabeling = (1, 2, 3, 4, 5, 6)
    else:
        for perm in permutations(range(6)):
            q = tuple(1 << perm[i] for i in range(6))
            qi = _gf2_inv(q)
            if _gf2_mul(_gf2_mul(q, square), qi) == a2:
                relabeling = tuple(p + 1 for p in perm)
                break
    dual = _gf2_inv(_gf2_transpose(a4))
    dual_order = _matrix_order(dual)
    cycle = sym6_action(quotient, (1, 2, 4, 5, 6, 3))  # 4-cycle on lines 3,4,5,6
    ident = _gf2_identity(6)

    def profile(m: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(_rank(_gf2_pow(_gf2_add(m, ident), k)) for k in range(1, 5))

    ranks = profile(a4)
    conjugate = _matrix_order(cycle) == order4 and ranks == profile(cycle)
    return S5MatrixReport(
        order_g4=order4,
        square_is_g2=square == a2,
        square_relabeling=relabeling,
        dual_order=dual_order,
        conjugate_to_line_cycle=conjugate,
        rank_profile=ranks,
    )


# --- aggregated report -----------------------------------------------------


@dataclass(frozen=True)
class BrauerReport:
    dim_even: int
    dim_relations: int
    dim_quotient: int
    pentagon_orbit_size: int
    pentagon_stabilizer_order: int
    alternating_orbit_size: int
    alternating_orbit_independent: bool
    invariant_orbit_size: int
    outer: OuterCertificate
    matrices: S5MatrixReport

    @property
    def ok(self) -> bool:
        return (
            self.dim_even == 11
            and self.dim_relations == 5
            and self.dim_quotient == 6
            and self.pentagon_orbit_size == 12
            and self.pentagon_stabilizer_order == 60
            and self.alternating_orbit_size == 6
            and self.alternating_orbit_independent
            and self.invariant_orbit_size == 1
            and self.outer.outer
            and self.matrices.ok
        )

    def summary(self) -> str:
        lines = [
            f"even subspace: dim {self.dim_even} (order {1 << self.dim_even})",
            f"relation space: dim {self.dim_relations}",
            f"Brauer quotient: dim {self.dim_quotient} (order {1 << self.dim_quotient})",
            f"pentagon class orbit: {self.pentagon_orbit_size}, "
            f"stabilizer order {self.pentagon_stabilizer_order}",
            f"alternating orbit: {self.alternating_orbit_size} classes, "
            f"independent: {self.alternating_orbit_independent}",
            f"invariant class orbit: {self.invariant_orbit_size}",
            "transposition image cycle type: "
            + "+".join(map(str, self.outer.transposition_cycle_type))
            + f" (outer: {self.outer.outer})",
            f"published matrices: order {self.matrices.order_g4}, "
            f"square is printed involution: {self.matrices.square_matches_print} "
            f"(relabeling {self.matrices.square_relabeling}), "
            f"dual order {self.matrices.dual_order}, "
            f"conjugate to line 4-cycle: {self.matrices.conjugate_to_line_cycle}",
            f"overall: {'OK' if self.ok else 'FAILED'}",
        ]
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "dim_even": self.dim_even,
                "dim_relations": self.dim_relations,
                "dim_quotient": self.dim_quotient,
                "pentagon_orbit_size": self.pentagon_orbit_size,
                "pentagon_stabilizer_order": self.pentagon_stabilizer_order,
                "alternating_orbit_size": self.alternating_orbit_size,
                "alternating_orbit_independent": self.alternating_orbit_independent,
                "invariant_orbit_size": self.invariant_orbit_size,
                "transposition_cycle_type": list(self.outer.transposition_cycle_type),
                "outer": self.outer.outer,
                "matrix_order": self.matrices.order_g4,
                "matrix_square_printed": self.matrices.square_matches_print,
                "matrix_square_relabeling": list(self.matrices.square_relabeling or ()),
                "matrix_dual_order": self.matrices.dual_order,
                "matrix_conjugate_to_cycle": self.matrices.conjugate_to_line_cycle,
                "ok": self.ok,
            },
            indent=2,
        )


def structure_report() -> BrauerReport:
    """Run the whole battery and gather results for the CLI self-test."""
    quotient = build_brauer_quotient()
    b6 = pentagon_class(quotient)
    orbit, stab = orbit_stabilizer(quotient, b6, "sym6")
    alt_orbit, _ = orbit_stabilizer(quotient, b6, "alt6")
    outer = verify_outer(quotient)
    inv_orbit, _ = orbit_stabilizer(quotient, outer.invariant, "sym6")
    matrices = verify_s5_matrices(quotient)
    return BrauerReport(
        dim_even=quotient.dim_even,
        dim_relations=quotient.dim_relations,
        dim_quotient=quotient.dim,
        pentagon_orbit_size=len(orbit),
        pentagon_stabilizer_order=stab,
        alternating_orbit_size=len(alt_orbit),
        alternating_orbit_independent=_rank(
            [b.representative for b in alt_orbit]
        )
        == len(alt_orbit),
        invariant_orbit_size=len(inv_orbit),
        outer=outer,
        matrices=matrices,
    )
