"""Finite-precision 2-adic bilinear forms and their trace rigidity.

Everything here lives over Z/2^K (default K = 12, overridable through
``SIXLINES_PRECISION``): symmetric Gram matrices, their Jordan
splittings into 2-power-scaled unit blocks, and orthogonal maps sampled
so that theorem hypotheses can be exercised at random.  The punchline
being tested is overdetermination: orthogonal matrices congruent mod 4
have traces congruent mod 16 (mod 8 under the weaker involution
hypothesis), which is what lets a mod-4 Galois action pin a mod-16
trace in the counting pipeline.

The sampler composes exact involutions (reflections in vectors of odd
norm) with Cayley transforms (E - T)(E + T)^-1, arranged so that
sampled maps are orthogonal at full working precision -- validity is
still asserted, never assumed.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import DegenerateLatticeError, MathInconsistencyError, UsageError

__all__ = [
    "DEFAULT_PRECISION",
    "default_precision",
    "GramLattice",
    "JordanDecomposition",
    "OrthogonalMap",
    "jordan_decompose",
    "is_orthogonal",
    "sample_orthogonal",
    "block_valuation_check",
    "dual_integrality_check",
    "scaled_lattice",
    "CheckOutcome",
    "overdet_check",
    "trace_product_check",
    "commutator_trace_check",
    "CheckTally",
    "CampaignReport",
    "run_trials",
]

DEFAULT_PRECISION = 12


def default_precision() -> int:
    """Working precision K, from SIXLINES_PRECISION or the default 12."""
    return int(os.environ.get("SIXLINES_PRECISION", DEFAULT_PRECISION))


IntMatrix = Union[Sequence[Sequence[int]], np.ndarray]


def _rows(mat: IntMatrix) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in mat)


def _arr(mat: IntMatrix) -> np.ndarray:
    return np.array(mat, dtype=np.int64)


def _int_det(mat: IntMatrix) -> int:
    """Exact integer determinant (fraction-free elimination)."""
    m = [[int(v) for v in row] for row in mat]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def _inv_mod2k(mat: IntMatrix, precision: int) -> np.ndarray:
    """Matrix inverse over Z/2^K; requires odd determinant."""
    mod = 1 << precision
    m = [[int(v) % mod for v in row] for row in mat]
    n = len(m)
    aug = [m[i] + [int(i == j) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] % 2 == 1), None)
        if piv is None:
            raise MathInconsistencyError("matrix not invertible mod 2^K")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, mod)
        aug[col] = [v * inv % mod for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                lam = aug[r][col]
                aug[r] = [(v - lam * w) % mod for v, w in zip(aug[r], aug[col])]
    return _arr([row[n:] for row in aug])


def _val2(residue: int, cap: int) -> int:
    """2-adic valuation of a residue mod 2^cap; cap stands in for infinity."""
    residue &= (1 << cap) - 1
    if residue == 0:
        return cap
    return (residue & -residue).bit_length() - 1


@dataclass(frozen=True)
class GramLattice:
    """A symmetric bilinear form with entries reduced mod 2^precision.

    Degenerate-at-precision forms (determinant divisible by 2^precision)
    are rejected at construction; all the splitting and sampling below
    assumes the form is non-degenerate over the 2-adic integers.
    """

    gram: tuple[tuple[int, ...], ...]
    precision: int = field(default_factory=default_precision)

    def __post_init__(self) -> None:
        n = len(self.gram)
        if n == 0 or any(len(row) != n for row in self.gram):
            raise UsageError("gram matrix must be square and non-empty")
        if self.precision < 4:
            raise UsageError("precision below 4 cannot support mod-16 statements")
        mod = 1 << self.precision
        reduced = tuple(tuple(v % mod for v in row) for row in self.gram)
        object.__setattr__(self, "gram", reduced)
        if any(reduced[i][j] != reduced[j][i] for i in range(n) for j in range(i)):
            raise UsageError("gram matrix must be symmetric")
        if _int_det(reduced) % mod == 0:
            raise DegenerateLatticeError(
                f"form is degenerate at precision 2^{self.precision}"
            )

    @classmethod
    def from_rows(cls, rows: IntMatrix, precision: int | None = None) -> "GramLattice":
        return cls(_rows(rows), precision if precision is not None else default_precision())

    @property
    def n(self) -> int:
        return len(self.gram)

    @property
    def matrix(self) -> np.ndarray:
        return _arr(self.gram)


@dataclass(frozen=True)
class JordanDecomposition:
    """T^t . gram . T = (+) 2^scale_k B_k with every B_k invertible mod 2.

    ``basis_change`` has odd determinant; ``blocks`` appear with
    non-decreasing scales, each a 1x1 or 2x2 unit block.
    """

    basis_change: tuple[tuple[int, ...], ...]
    blocks: tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]
    precision: int

    @property
    def coordinate_scales(self) -> tuple[int, ...]:
        return tuple(s for s, block in self.blocks for _ in block)

    @property
    def max_scale(self) -> int:
        return max(s for s, _ in self.blocks)

    def block_matrix(self) -> np.ndarray:
        """The scaled block-diagonal form (+) 2^s B_s as one matrix."""
        n = sum(len(b) for _, b in self.blocks)
        out = np.zeros((n, n), dtype=np.int64)
        at = 0
        for scale, block in self.blocks:
            d = len(block)
            out[at : at + d, at : at + d] = _arr(block) << scale
            at += d
        return out


def jordan_decompose(lattice: GramLattice) -> JordanDecomposition:
    """Split the form into 2-power-scaled unit blocks of size 1 or 2.

    Strategy: a unit on the diagonal splits off a 1x1 block; failing
    that, a unit off the diagonal splits off a 2x2 block (whose
    determinant is then automatically odd); failing both, every entry is
    even, so the remaining form is divided by 2 and the scale bumped.
    """
    K = lattice.precision
    n = lattice.n
    m = [[int(v) for v in row] for row in lattice.gram]
    basis = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(dst: int, src: int, lam: int, mod: int) -> None:
        # congruence transformation: column then matching row; the basis
        # only matters mod 2^K, so keep it reduced
        for r in range(n):
            m[r][dst] = (m[r][dst] + lam * m[r][src]) % mod
        for c in range(n):
            m[dst][c] = (m[dst][c] + lam * m[src][c]) % mod
        for r in range(n):
            basis[r][dst] = (basis[r][dst] + lam * basis[r][src]) % (1 << K)

    remaining = list(range(n))
    blocks: list[tuple[int, tuple[tuple[int, ...], ...]]] = []
    order: list[int] = []
    scale = 0
    while remaining:
        if K - scale < 1:
            raise DegenerateLatticeError(
                f"form vanished mod 2^{K} before splitting completely"
            )
        mod = 1 << (K - scale)
        r = next((i for i in remaining if m[i][i] % 2 == 1), None)
        if r is not None:
            inv = pow(m[r][r] % mod, -1, mod)
            for c in remaining:
                if c != r and m[r][c] % mod:
                    col_op(c, r, -m[r][c] * inv % mod, mod)
            blocks.append((scale, ((m[r][r] % mod,),)))
            order.append(r)
            remaining.remove(r)
            continue
        pair = next(
            ((i, j) for i in remaining for j in remaining if i < j and m[i][j] % 2 == 1),
            None,
        )
        if pair is not None:
            i, j = pair
            # diagonal entries are even here, so det = even*even - odd^2 is odd
            det = m[i][i] * m[j][j] - m[i][j] * m[j][i]
            dinv = pow(det % mod, -1, mod)
            for c in remaining:
                if c in (i, j):
                    continue
                x, y = m[i][c] % mod, m[j][c] % mod
                if x or y:
                    a = -dinv * (m[j][j] * x - m[i][j] * y) % mod
                    b = -dinv * (m[i][i] * y - m[j][i] * x) % mod
                    if a:
                        col_op(c, i, a, mod)
                    if b:
                        col_op(c, j, b, mod)
            blocks.append(
                (scale, ((m[i][i] % mod, m[i][j] % mod), (m[j][i] % mod, m[j][j] % mod)))
            )
            order.extend((i, j))
            remaining.remove(i)
            remaining.remove(j)
            continue
        # every remaining entry is even: strip one factor of 2
        for a in remaining:
            for b in remaining:
                m[a][b] = (m[a][b] % mod) // 2
        scale += 1

    perm = np.zeros((n, n), dtype=np.int64)
    for pos, coord in enumerate(order):
        perm[coord, pos] = 1
    change = (_arr(basis) @ perm) % (1 << K)
    dec = JordanDecomposition(
        basis_change=_rows(change), blocks=tuple(blocks), precision=K
    )
    # the decomposition is constructed, never trusted: verify it
    if _int_det(dec.basis_change) % 2 == 0:
        raise MathInconsistencyError("basis change degenerated mod 2")
    t = _arr(dec.basis_change)
    got = (t.T @ lattice.matrix @ t) % (1 << K)
    if not np.array_equal(got, dec.block_matrix() % (1 << K)):
        raise MathInconsistencyError("block form does not reproduce the lattice")
    return dec


def is_orthogonal(
    lattice: GramLattice, u: IntMatrix, check_precision: int | None = None
) -> bool:
    """Does U^t . gram . U = gram hold mod 2^check_precision?"""
    K = check_precision if check_precision is not None else lattice.precision
    if K > lattice.precision:
        raise UsageError("cannot check beyond the lattice's own precision")
    um = _arr(u)
    g = lattice.matrix
    return bool(np.array_equal((um.T @ g @ um) % (1 << K), g % (1 << K)))


@dataclass(frozen=True)
class OrthogonalMap:
    """An orthogonal matrix mod 2^K together with its congruence level:
    the map is = identity mod 2^congruence_level."""

    matrix: tuple[tuple[int, ...], ...]
    congruence_level: int

    def as_array(self) -> np.ndarray:
        return _arr(self.matrix)


def _cayley(dec: JordanDecomposition, antisym: np.ndarray, precision: int) -> np.ndarray:
    """(E - T)(E + T)^-1 mod 2^K for T = block_form^-1 . antisym.

    Exactly orthogonal mod 2^K for the block form: the caller supplies
    ``antisym`` divisible by 2^(1 + max scale), which makes T integral
    and even, so E + T is invertible.  All arithmetic stays in residues
    -- the inverse mod 2^K only depends on residues, so this agrees with
    the exact rational Cayley transform mod 2^K.
    """
    K = precision
    n = len(antisym)
    wide = K + dec.max_scale  # room for the exact divisions below
    modw = 1 << wide
    t = np.zeros((n, n), dtype=np.int64)
    at = 0
    for scale, block in dec.blocks:
        d = len(block)
        binv = _inv_mod2k(block, wide)
        rows = (binv @ (antisym[at : at + d] % modw)) % modw
        if np.any(rows & ((1 << scale) - 1)):
            raise MathInconsistencyError("antisymmetric part not divisible enough")
        t[at : at + d] = rows >> scale
        at += d
    mod = 1 << K
    t %= mod
    eye = np.eye(n, dtype=np.int64)
    u = ((eye - t) @ _inv_mod2k((eye + t) % mod, K)) % mod
    return u


def _reflection(block_form: np.ndarray, v: np.ndarray, precision: int) -> np.ndarray | None:
    """Reflection in v when its norm is odd; None otherwise.

    sigma(x) = x - 2 b(x,v)/b(v,v) v is an exact involution preserving
    the form, and is always = identity mod 2.
    """
    mod = 1 << precision
    beta = int(v @ block_form @ v)
    if beta % 2 == 0:
        return None
    w = (block_form @ v) % mod
    sigma = (np.eye(len(v), dtype=np.int64) - 2 * pow(beta, -1, mod) * np.outer(v, w)) % mod
    return sigma


def _rng_of(seed: Union[int, np.random.Generator]) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_orthogonal(
    lattice: GramLattice,
    congruence_level: int,
    seed: Union[int, np.random.Generator] = 0,
    decomposition: JordanDecomposition | None = None,
) -> OrthogonalMap:
    """A random orthogonal map = identity mod 2^congruence_level.

    Sampling happens in the Jordan basis: reflections supply the
    mod-2-only part (level 1), Cayley transforms with antisymmetric
    numerators divisible by 2^(level-1+max_scale) supply the rest; the
    result is conjugated back and verified.  The family does not exhaust
    the orthogonal group and is not meant to -- soundness over
    completeness.
    """
    e = congruence_level
    K = lattice.precision
    n = lattice.n
    if e < 1:
        raise UsageError("congruence level must be at least 1")
    if e >= K:
        # = identity mod 2^K leaves only the identity at this precision
        return OrthogonalMap(_rows(np.eye(n, dtype=np.int64)), K)
    rng = _rng_of(seed)
    dec = decomposition if decomposition is not None else jordan_decompose(lattice)
    j = dec.block_matrix()
    mod = 1 << K
    u = np.eye(n, dtype=np.int64)
    if e == 1:
        for _ in range(int(rng.integers(1, 4))):
            for _attempt in range(32):
                v = rng.integers(-8, 9, size=n)
                sigma = _reflection(j, v, K)
                if sigma is not None:
                    u = (u @ sigma) % mod
                    break
    shift = max(e - 1, 1) + dec.max_scale
    for _ in range(int(rng.integers(1, 3))):
        raw = rng.integers(-64, 65, size=(n, n))
        anti = (raw - raw.T) << shift
        u = (u @ _cayley(dec, anti, K)) % mod
    t = _arr(dec.basis_change)
    u_orig = (t @ u @ _inv_mod2k(t, K)) % mod
    if not is_orthogonal(lattice, u_orig, K):
        raise MathInconsistencyError("sampler produced a non-orthogonal matrix")
    if np.any((u_orig - np.eye(n, dtype=np.int64)) % (1 << e)):
        raise MathInconsistencyError("sampler missed the requested congruence level")
    return OrthogonalMap(_rows(u_orig), e)


# --- valuation checks ------------------------------------------------------


@dataclass(frozen=True)
class ValuationReport:
    ok: bool
    violations: tuple[str, ...]
    entries_checked: int


def _in_jordan_basis(
    lattice: GramLattice, dec: JordanDecomposition, u: IntMatrix
) -> np.ndarray:
    t = _arr(dec.basis_change)
    return (_inv_mod2k(t, lattice.precision) @ _arr(u) @ t) % (1 << lattice.precision)


def dual_integrality_check(
    lattice: GramLattice, dec: JordanDecomposition, u: IntMatrix
) -> ValuationReport:
    """Entrywise: val(U[a,b]) >= scale(col b) - scale(row a).

    Equivalent to saying diag(2^s) U diag(2^-s) stays integral, which is
    the coordinate form of "orthogonal maps preserve the dual lattice".
    Note the direction: columns of high scale must be divisible, rows of
    high scale earn nothing.
    """
    K = lattice.precision
    uj = _in_jordan_basis(lattice, dec, u)
    scales = dec.coordinate_scales
    bad = []
    for a in range(lattice.n):
        for b in range(lattice.n):
            need = scales[b] - scales[a]
            if need > 0 and _val2(int(uj[a, b]), K) < need:
                bad.append(f"entry ({a},{b}): val {_val2(int(uj[a, b]), K)} < {need}")
    return ValuationReport(ok=not bad, violations=tuple(bad), entries_checked=lattice.n**2)


def block_valuation_check(
    lattice: GramLattice,
    dec: JordanDecomposition,
    u: OrthogonalMap,
) -> ValuationReport:
    """Scale-block valuations of U in the Jordan basis.

    For the block D_ij mapping the scale-j summand into scale-i
    coordinates: val(D_ij) >= j - i always, and >= j - i + e between
    distinct scales when U = identity mod 2^e.  A non-orthogonal input
    is reported as such rather than checked.
    """
    K = lattice.precision
    if not is_orthogonal(lattice, u.matrix, K):
        return ValuationReport(
            ok=False, violations=("input is not orthogonal at working precision",),
            entries_checked=0,
        )
    uj = _in_jordan_basis(lattice, dec, u.matrix)
    scales = dec.coordinate_scales
    e = u.congruence_level
    bad = []
    checked = 0
    distinct = sorted(set(scales))
    for si in distinct:
        rows = [a for a, s in enumerate(scales) if s == si]
        for sj in distinct:
            cols = [b for b, s in enumerate(scales) if s == sj]
            val = min(_val2(int(uj[a, b]), K) for a in rows for b in cols)
            checked += 1
            if val < sj - si:
                bad.append(f"block ({si},{sj}): val {val} < {sj - si}")
            if si != sj and val < sj - si + e:
                bad.append(f"block ({si},{sj}) at level {e}: val {val} < {sj - si + e}")
    return ValuationReport(ok=not bad, violations=tuple(bad), entries_checked=checked)


def scaled_lattice(lattice: GramLattice, dec: JordanDecomposition) -> GramLattice:
    """Halve all Jordan scales: multiply the scale-i summand by 2^-(i//2).

    Returns the Gram matrix in the rescaled Jordan basis; its own
    decomposition has scales in {0, 1} only.  Precision drops by twice
    the largest halving since the rescaled entries are only known that
    far.
    """
    drop = 2 * max(s // 2 for s, _ in dec.blocks)
    new_precision = dec.precision - drop
    if new_precision < 4:
        raise DegenerateLatticeError("rescaling exhausts the working precision")
    n = sum(len(b) for _, b in dec.blocks)
    out = np.zeros((n, n), dtype=np.int64)
    at = 0
    for scale, block in dec.blocks:
        d = len(block)
        out[at : at + d, at : at + d] = _arr(block) << (scale - 2 * (scale // 2))
        at += d
    return GramLattice.from_rows(out, new_precision)


# --- trace congruence checks ----------------------------------------------


@dataclass(frozen=True)
class CheckOutcome:
    """One hypothesis-conclusion test: pass, fail, or rejected input
    (hypotheses not satisfied, so the theorem says nothing)."""

    name: str
    status: str  # "pass" | "fail" | "rejected"
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == "fail"


def _congruent(a: np.ndarray, b: np.ndarray, mod: int) -> bool:
    return not np.any((a - b) % mod)


def overdet_check(
    lattice: GramLattice,
    u1: OrthogonalMap,
    u2: OrthogonalMap,
    variant: str,
) -> CheckOutcome:
    """Trace overdetermination: U1 = U2 mod 4 forces trace congruence.

    Variant "a" (U1 = identity mod 2): traces agree mod 16.  Variant
    "b" (U1 an involution mod 2): traces agree mod 8.
    """
    name = f"overdet_{variant}"
    if variant not in ("a", "b"):
        raise UsageError("variant must be 'a' or 'b'")
    K = lattice.precision
    a1, a2 = u1.as_array(), u2.as_array()
    n = lattice.n
    eye = np.eye(n, dtype=np.int64)
    if not (is_orthogonal(lattice, a1, K) and is_orthogonal(lattice, a2, K)):
        return CheckOutcome(name, "rejected", "inputs not orthogonal")
    if not _congruent(a1, a2, 4):
        return CheckOutcome(name, "rejected", "inputs not congruent mod 4")
    if variant == "a" and not _congruent(a1, eye, 2):
        return CheckOutcome(name, "rejected", "U1 not = identity mod 2")
    if variant == "b" and not _congruent(a1 @ a1, eye, 2):
        return CheckOutcome(name, "rejected", "U1 not an involution mod 2")
    mod = 16 if variant == "a" else 8
    t1 = int(np.trace(a1)) % mod
    t2 = int(np.trace(a2)) % mod
    if t1 == t2:
        return CheckOutcome(name, "pass", f"traces {t1} = {t2} (mod {mod})")
    return CheckOutcome(name, "fail", f"traces {t1} != {t2} (mod {mod})")


def trace_product_check(
    lattice: GramLattice,
    a: IntMatrix,
    b: IntMatrix,
    variant: str,
) -> CheckOutcome:
    """Tr(A.B) is even under the paired-orthogonality hypotheses.

    Variant "a": E + 2A and E + 4B orthogonal.  Variant "b": E + A and
    E + 4B orthogonal with (E + A)^2 = E mod 2.
    """
    name = f"trace_product_{variant}"
    if variant not in ("a", "b"):
        raise UsageError("variant must be 'a' or 'b'")
    K = lattice.precision
    am, bm = _arr(a), _arr(b)
    n = lattice.n
    eye = np.eye(n, dtype=np.int64)
    mod = 1 << K
    ua = (eye + (2 * am if variant == "a" else am)) % mod
    ub = (eye + 4 * bm) % mod
    if not (is_orthogonal(lattice, ua, K) and is_orthogonal(lattice, ub, K)):
        return CheckOutcome(name, "rejected", "shifted inputs not orthogonal")
    if variant == "b" and not _congruent(ua @ ua, eye, 2):
        return CheckOutcome(name, "rejected", "E + A not an involution mod 2")
    tr = int(np.trace(am @ bm)) % 2
    if tr == 0:
        return CheckOutcome(name, "pass", "Tr(AB) even")
    return CheckOutcome(name, "fail", "Tr(AB) odd")


def commutator_trace_check(
    lattice: GramLattice,
    phi: OrthogonalMap,
    psi: OrthogonalMap,
    variant: str,
) -> CheckOutcome:
    """Tr((phi - id)(psi - id)) vanishes to high 2-adic order.

    For orthogonal phi = id mod 2 and psi = id mod 4 the trace is 0 mod
    16 (variant "a"); with only phi^2 = id mod 2 it is 0 mod 8 ("b").
    """
    name = f"commutator_trace_{variant}"
    if variant not in ("a", "b"):
        raise UsageError("variant must be 'a' or 'b'")
    K = lattice.precision
    pm, sm = phi.as_array(), psi.as_array()
    n = lattice.n
    eye = np.eye(n, dtype=np.int64)
    if not (is_orthogonal(lattice, pm, K) and is_orthogonal(lattice, sm, K)):
        return CheckOutcome(name, "rejected", "inputs not orthogonal")
    if not _congruent(sm, eye, 4):
        return CheckOutcome(name, "rejected", "psi not = identity mod 4")
    if variant == "a" and not _congruent(pm, eye, 2):
        return CheckOutcome(name, "rejected", "phi not = identity mod 2")
    if variant == "b" and not _congruent(pm @ pm, eye, 2):
        return CheckOutcome(name, "rejected", "phi not an involution mod 2")
    mod = 16 if variant == "a" else 8
    tr = int(np.trace((pm - eye) @ (sm - eye))) % mod
    if tr == 0:
        return CheckOutcome(name, "pass", f"trace 0 (mod {mod})")
    return CheckOutcome(name, "fail", f"trace {tr} (mod {mod})")


# --- randomized campaign ---------------------------------------------------


@dataclass
class CheckTally:
    attempts: int = 0
    passes: int = 0
    failures: int = 0
    rejections: int = 0

    def record(self, outcome: CheckOutcome) -> None:
        self.attempts += 1
        if outcome.status == "pass":
            self.passes += 1
        elif outcome.status == "fail":
            self.failures += 1
        else:
            self.rejections += 1


@dataclass(frozen=True)
class CampaignReport:
    seed: int
    trials: int
    precision: int
    tallies: Mapping[str, CheckTally]
    failure_details: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failure_details and all(
            t.failures == 0 for t in self.tallies.values()
        )

    def summary(self) -> str:
        lines = [
            f"campaign: {self.trials} trials, precision 2^{self.precision}, "
            f"seed {self.seed} -> {'OK' if self.ok else 'FAILED'}"
        ]
        for name in sorted(self.tallies):
            t = self.tallies[name]
            lines.append(
                f"  {name}: {t.passes} passed, {t.failures} failed, "
                f"{t.rejections} rejected of {t.attempts}"
            )
        lines.extend(f"  FAILURE {d}" for d in self.failure_details)
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "seed": self.seed,
                "trials": self.trials,
                "precision": self.precision,
                "ok": self.ok,
                "tallies": {
                    name: vars(t) for name, t in sorted(self.tallies.items())
                },
                "failures": list(self.failure_details),
            },
            indent=2,
        )


def _random_lattice(
    rng: np.random.Generator, dims: Sequence[int], precision: int
) -> tuple[GramLattice, tuple[int, ...]]:
    """A random form with known Jordan scales, conjugated by a random
    odd-determinant change of basis."""
    n = int(rng.choice(dims))
    # keep the total scale well below the precision so the form stays
    # non-degenerate mod 2^K with room to spare
    budget = precision - 6
    blocks: list[np.ndarray] = []
    scales: list[int] = []
    left = n
    while left:
        scale = min(int(rng.choice([0, 0, 0, 1, 1, 2])), max(budget - sum(scales), 0))
        if left >= 2 and rng.random() < 0.25:
            a, b = rng.integers(-4, 5, size=2)
            c = int(rng.integers(-4, 4)) * 2 + 1
            blocks.append(np.array([[2 * a, c], [c, 2 * b]], dtype=np.int64) << scale)
            scales.extend((scale, scale))
            left -= 2
        else:
            u = int(rng.integers(-8, 8)) * 2 + 1
            blocks.append(np.array([[u]], dtype=np.int64) << scale)
            scales.append(scale)
            left -= 1
    j = np.zeros((n, n), dtype=np.int64)
    at = 0
    for blk in blocks:
        d = len(blk)
        j[at : at + d, at : at + d] = blk
        at += d
    r = np.eye(n, dtype=np.int64)
    for _ in range(2 * n):
        i, k = rng.integers(0, n, size=2)
        if i != k:
            r[:, k] += int(rng.integers(-3, 4)) * r[:, i]
    gram = (r.T @ j @ r) % (1 << precision)
    return GramLattice.from_rows(gram, precision), tuple(sorted(scales))


def _sample_involution(
    lattice: GramLattice,
    dec: JordanDecomposition,
    rng: np.random.Generator,
) -> OrthogonalMap:
    """A reflection (exact involution) in the original coordinates, or
    the identity when none is found."""
    K = lattice.precision
    j = dec.block_matrix()
    for _ in range(64):
        v = rng.integers(-8, 9, size=lattice.n)
        sigma = _reflection(j, v, K)
        if sigma is not None:
            t = _arr(dec.basis_change)
            mat = (t @ sigma @ _inv_mod2k(t, K)) % (1 << K)
            if is_orthogonal(lattice, mat, K):
                return OrthogonalMap(_rows(mat), 1)
    return OrthogonalMap(_rows(np.eye(lattice.n, dtype=np.int64)), K)


def run_trials(
    trials: int = 1000,
    dims: Sequence[int] = tuple(range(2, 9)),
    precision: int | None = None,
    seed: int = 20260823,
) -> CampaignReport:
    """Randomized campaign over all the congruence checks.

    Deterministic for a fixed seed.  Every trial draws a fresh lattice
    with mixed Jordan scales, samples hypothesis-satisfying maps, and
    runs the full battery; any failure is a theorem violation and means
    the implementation (not the mathematics) is broken.
    """
    K = precision if precision is not None else default_precision()
    rng = np.random.default_rng(seed)
    tallies: dict[str, CheckTally] = {}
    failures: list[str] = []

    def record(trial: int, outcome: CheckOutcome) -> None:
        tallies.setdefault(outcome.name, CheckTally()).record(outcome)
        if outcome.failed:
            failures.append(f"trial {trial}: {outcome.name}: {outcome.detail}")

    for trial in range(trials):
        lattice, made_scales = _random_lattice(rng, dims, K)
        dec = jordan_decompose(lattice)
        roundtrip = CheckOutcome(
            "jordan_roundtrip",
            "pass" if dec.coordinate_scales and tuple(sorted(dec.coordinate_scales)) == made_scales
            else "fail",
            f"scales {dec.coordinate_scales} vs generated {made_scales}",
        )
        record(trial, roundtrip)

        n = lattice.n
        eye = np.eye(n, dtype=np.int64)
        u1 = sample_orthogonal(lattice, 1, rng, dec)
        v = sample_orthogonal(lattice, 2, rng, dec)
        u2 = OrthogonalMap(
            _rows((u1.as_array() @ v.as_array()) % (1 << K)), 1
        )
        sigma = _sample_involution(lattice, dec, rng)
        v2 = sample_orthogonal(lattice, 2, rng, dec)
        sigma2 = OrthogonalMap(
            _rows((sigma.as_array() @ v2.as_array()) % (1 << K)), 1
        )

        record(trial, overdet_check(lattice, u1, u2, "a"))
        record(trial, overdet_check(lattice, sigma, sigma2, "b"))
        record(
            trial,
            trace_product_check(
                lattice, (u1.as_array() - eye) // 2, (v.as_array() - eye) // 4, "a"
            ),
        )
        record(
            trial,
            trace_product_check(
                lattice, sigma.as_array() - eye, (v.as_array() - eye) // 4, "b"
            ),
        )
        record(trial, commutator_trace_check(lattice, u1, v, "a"))
        record(trial, commutator_trace_check(lattice, sigma, v, "b"))

        for sampled in (u1, v):
            bvc = block_valuation_check(lattice, dec, sampled)
            record(
                trial,
                CheckOutcome(
                    f"block_valuation_e{sampled.congruence_level}",
                    "pass" if bvc.ok else "fail",
                    "; ".join(bvc.violations),
                ),
            )
        for mat in (u1.matrix, v.matrix, sigma.matrix):
            dic = dual_integrality_check(lattice, dec, mat)
            record(
                trial,
                CheckOutcome(
                    "dual_integrality",
                    "pass" if dic.ok else "fail",
                    "; ".join(dic.violations),
                ),
            )
        halved = scaled_lattice(lattice, dec)
        halved_scales = set(jordan_decompose(halved).coordinate_scales)
        record(
            trial,
            CheckOutcome(
                "rescale_halves",
                "pass" if halved_scales <= {0, 1} else "fail",
                f"scales after rescaling: {sorted(halved_scales)}",
            ),
        )

    return CampaignReport(
        seed=seed,
        trials=trials,
        precision=K,
        tallies=tallies,
        failure_details=tuple(failures),
    )
