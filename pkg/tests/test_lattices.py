"""Jordan splitting, the orthogonal sampler, and the trace rigidity checks.

Pinned decompositions are worked by hand in the comments; the sampler
and check functions are exercised both on honest inputs (must pass) and
on deliberately broken ones (must be flagged, never silently passed).
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sixlines.errors import DegenerateLatticeError, UsageError
from sixlines.lattices import (
    GramLattice,
    OrthogonalMap,
    block_valuation_check,
    commutator_trace_check,
    default_precision,
    dual_integrality_check,
    is_orthogonal,
    jordan_decompose,
    overdet_check,
    run_trials,
    sample_orthogonal,
    scaled_lattice,
    trace_product_check,
)


def assert_decomposition_is_valid(lattice, dec):
    """T^t G T = block form mod 2^K, with an invertible T."""
    mod = 1 << lattice.precision
    t = np.array(dec.basis_change, dtype=np.int64)
    lhs = (t.T @ lattice.matrix @ t) % mod
    assert np.array_equal(lhs, dec.block_matrix() % mod)
    assert round(np.linalg.det(t.astype(float))) % 2 == 1
    for scale, block in dec.blocks:
        assert len(block) in (1, 2)
        assert round(np.linalg.det(np.array(block, dtype=float))) % 2 == 1
    scales = [s for s, _ in dec.blocks]
    assert scales == sorted(scales)


# --- construction guards ---------------------------------------------------


def test_gram_matrix_must_be_square():
    with pytest.raises(UsageError):
        GramLattice.from_rows([[1, 0]])


def test_gram_matrix_must_be_symmetric():
    with pytest.raises(UsageError):
        GramLattice.from_rows([[1, 2], [3, 1]])


def test_precision_floor_is_four():
    with pytest.raises(UsageError):
        GramLattice.from_rows([[1]], precision=3)
    assert GramLattice.from_rows([[1]], precision=4).precision == 4


def test_degenerate_forms_are_rejected():
    with pytest.raises(DegenerateLatticeError):
        GramLattice.from_rows([[0, 0], [0, 1]])
    # determinant 16 is a unit times 2^4: degenerate at precision 4,
    # fine at the default precision
    with pytest.raises(DegenerateLatticeError):
        GramLattice.from_rows([[4, 0], [0, 4]], precision=4)
    GramLattice.from_rows([[4, 0], [0, 4]])


def test_entries_are_reduced_into_the_working_ring():
    lat = GramLattice.from_rows([[1 + (1 << 12)]])
    assert lat.gram == ((1,),)


def test_precision_override_comes_from_the_environment(monkeypatch):
    monkeypatch.setenv("SIXLINES_PRECISION", "8")
    assert default_precision() == 8
    assert GramLattice.from_rows([[1]]).precision == 8


# --- pinned Jordan splittings ----------------------------------------------


def test_jordan_diag_1_2():
    # 1 splits off at scale 0; the leftover (2) halves to a unit at scale 1
    dec = jordan_decompose(GramLattice.from_rows([[1, 0], [0, 2]]))
    assert dec.blocks == ((0, ((1,),)), (1, ((1,),)))
    assert dec.coordinate_scales == (0, 1)
    assert dec.max_scale == 1


def test_jordan_hyperbolic_plane():
    # even diagonal, odd off-diagonal: one 2x2 unit block at scale 0
    lat = GramLattice.from_rows([[0, 1], [1, 0]])
    dec = jordan_decompose(lat)
    assert_decomposition_is_valid(lat, dec)
    assert len(dec.blocks) == 1
    scale, block = dec.blocks[0]
    assert scale == 0 and len(block) == 2
    det = block[0][0] * block[1][1] - block[0][1] * block[1][0]
    assert det % 8 == 7  # -1 survives mod 8 whatever the reduction did


def test_jordan_three_distinct_scales():
    dec = jordan_decompose(GramLattice.from_rows([[3, 0, 0], [0, 20, 0], [0, 0, 14]]))
    # 3 is odd; 14 halves to 7 at scale 1; 20 quarters to 5 at scale 2
    assert dec.blocks == ((0, ((3,),)), (1, ((7,),)), (2, ((5,),)))
    assert dec.coordinate_scales == (0, 1, 2)


def test_jordan_mixed_form_roundtrips():
    lat = GramLattice.from_rows(
        [[2, 1, 0, 0], [1, 2, 0, 0], [0, 0, 1, 2], [0, 0, 2, 8]]
    )
    dec = jordan_decompose(lat)
    assert_decomposition_is_valid(lat, dec)
    assert sorted(dec.coordinate_scales) == [0, 0, 0, 2]


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(-20, 20), min_size=6, max_size=6),
    st.sampled_from([4, 6, 8, 12]),
)
def test_jordan_identity_holds_for_random_symmetric_forms(entries, precision):
    a, b, c, d, e, f = entries
    rows = [[a, b, c], [b, d, e], [c, e, f]]
    try:
        lat = GramLattice.from_rows(rows, precision=precision)
    except DegenerateLatticeError:
        return
    dec = jordan_decompose(lat)
    assert_decomposition_is_valid(lat, dec)
    assert dec.precision == precision


# --- the orthogonal sampler ------------------------------------------------

MIXED = [[1, 0, 0], [0, 2, 1], [0, 1, 2]]


@pytest.mark.parametrize("level", [1, 2, 5])
def test_sampled_maps_satisfy_their_own_postconditions(level):
    lat = GramLattice.from_rows(MIXED)
    u = sample_orthogonal(lat, level, seed=99)
    assert u.congruence_level == level
    mat = u.as_array()
    assert is_orthogonal(lat, mat, lat.precision)
    assert not np.any((mat - np.eye(3, dtype=np.int64)) % (1 << level))


def test_sampling_at_full_precision_returns_the_identity():
    lat = GramLattice.from_rows(MIXED)
    u = sample_orthogonal(lat, lat.precision, seed=5)
    assert np.array_equal(u.as_array(), np.eye(3, dtype=np.int64))
    assert u.congruence_level == lat.precision


def test_sampler_rejects_level_zero():
    with pytest.raises(UsageError):
        sample_orthogonal(GramLattice.from_rows(MIXED), 0)


def test_sampler_is_deterministic_per_seed():
    lat = GramLattice.from_rows(MIXED)
    first = sample_orthogonal(lat, 1, seed=1234)
    second = sample_orthogonal(lat, 1, seed=1234)
    assert first.matrix == second.matrix


def test_orthogonality_check_respects_the_precision_cap():
    lat = GramLattice.from_rows(MIXED, precision=8)
    with pytest.raises(UsageError):
        is_orthogonal(lat, np.eye(3, dtype=np.int64), check_precision=9)


# --- valuation checks ------------------------------------------------------


def test_block_valuations_of_a_sampled_map():
    lat = GramLattice.from_rows([[1, 0, 0], [0, 2, 0], [0, 0, 4]])
    dec = jordan_decompose(lat)
    u = sample_orthogonal(lat, 2, seed=31, decomposition=dec)
    report = block_valuation_check(lat, dec, u)
    assert report.ok
    assert report.violations == ()
    assert report.entries_checked == 9  # three scales, 3x3 blocks of blocks


def test_corrupted_map_is_reported_not_checked():
    lat = GramLattice.from_rows([[1, 0], [0, 2]])
    dec = jordan_decompose(lat)
    u = sample_orthogonal(lat, 1, seed=7, decomposition=dec)
    rows = [list(r) for r in u.matrix]
    rows[0][0] += 1
    report = block_valuation_check(lat, dec, OrthogonalMap(tuple(map(tuple, rows)), 1))
    assert not report.ok
    assert report.entries_checked == 0
    assert "not orthogonal" in report.violations[0]


def test_dual_integrality_direction_is_the_right_one():
    # diag(1, 4) at K = 12 admits the orthogonal matrix [[a, -8], [2, a]]
    # whenever a^2 = -15 mod 2^12.  Its (1,0) entry has valuation 1 < 2,
    # so demanding val >= scale(row) - scale(col) would reject a genuine
    # orthogonal map; the sustainable law is val >= scale(col) - scale(row).
    a = next(x for x in range(1, 1 << 12, 2) if x * x % (1 << 12) == (-15) % (1 << 12))
    lat = GramLattice.from_rows([[1, 0], [0, 4]])
    dec = jordan_decompose(lat)
    assert dec.coordinate_scales == (0, 2)
    assert dec.basis_change == ((1, 0), (0, 1))
    u = [[a, -8 % (1 << 12)], [2, a]]
    assert is_orthogonal(lat, u)
    report = dual_integrality_check(lat, dec, u)
    assert report.ok, report.violations
    assert report.entries_checked == 4


def test_dual_integrality_flags_a_real_violation():
    lat = GramLattice.from_rows([[1, 0], [0, 4]])
    dec = jordan_decompose(lat)
    # identity is orthogonal; this perturbation is not, and it puts an
    # odd entry where divisibility by 4 is required
    report = dual_integrality_check(lat, dec, [[1, 1], [0, 1]])
    assert not report.ok
    assert "(0,1)" in report.violations[0]


# --- rescaling -------------------------------------------------------------


def test_rescaling_leaves_scales_zero_and_one_alone():
    lat = GramLattice.from_rows([[1, 0], [0, 2]])
    halved = scaled_lattice(lat, jordan_decompose(lat))
    assert np.array_equal(halved.matrix, lat.matrix)
    assert halved.precision == lat.precision


def test_rescaling_collapses_scale_two_to_zero():
    lat = GramLattice.from_rows([[4, 0], [0, 4]])
    halved = scaled_lattice(lat, jordan_decompose(lat))
    assert np.array_equal(halved.matrix, np.eye(2, dtype=np.int64))
    assert halved.precision == lat.precision - 2


def test_rescaling_a_full_ladder_of_scales():
    lat = GramLattice.from_rows(np.diag([1, 2, 4, 8]))
    halved = scaled_lattice(lat, jordan_decompose(lat))
    assert sorted(jordan_decompose(halved).coordinate_scales) == [0, 0, 1, 1]
    assert halved.precision == lat.precision - 2


def test_rescaling_cannot_eat_the_whole_precision():
    lat = GramLattice.from_rows([[1, 0], [0, 1 << 10]])
    with pytest.raises(DegenerateLatticeError):
        scaled_lattice(lat, jordan_decompose(lat))


# --- trace congruence checks ----------------------------------------------


@pytest.fixture(scope="module")
def rigidity_setup():
    lat = GramLattice.from_rows([[1, 0, 0, 0], [0, 2, 1, 0], [0, 1, 2, 0], [0, 0, 0, 4]])
    dec = jordan_decompose(lat)
    return lat, dec


def test_overdet_variant_a_passes_on_honest_inputs(rigidity_setup):
    lat, dec = rigidity_setup
    mod = 1 << lat.precision
    u1 = sample_orthogonal(lat, 1, seed=42, decomposition=dec)
    v = sample_orthogonal(lat, 2, seed=43, decomposition=dec)
    u2 = OrthogonalMap(
        tuple(map(tuple, (u1.as_array() @ v.as_array()) % mod)), 1
    )
    outcome = overdet_check(lat, u1, u2, "a")
    assert outcome.status == "pass"
    assert (np.trace(u1.as_array()) - np.trace(u2.as_array())) % 16 == 0


def test_overdet_rejects_maps_not_congruent_mod_four(rigidity_setup):
    lat, dec = rigidity_setup
    u1 = sample_orthogonal(lat, 1, seed=50, decomposition=dec)
    minus = OrthogonalMap(
        tuple(map(tuple, (-np.eye(4, dtype=np.int64)) % (1 << lat.precision))), 1
    )
    outcome = overdet_check(lat, u1, minus, "a")
    assert outcome.status == "rejected"
    assert "mod 4" in outcome.detail


def test_overdet_rejects_non_orthogonal_input(rigidity_setup):
    lat, _ = rigidity_setup
    eye = OrthogonalMap(tuple(map(tuple, np.eye(4, dtype=np.int64))), 1)
    crooked = OrthogonalMap(((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (4, 0, 0, 1)), 1)
    outcome = overdet_check(lat, eye, crooked, "a")
    assert outcome.status == "rejected"
    assert "orthogonal" in outcome.detail


def test_trace_product_passes_and_rejects(rigidity_setup):
    lat, dec = rigidity_setup
    eye = np.eye(4, dtype=np.int64)
    u1 = sample_orthogonal(lat, 1, seed=60, decomposition=dec)
    v = sample_orthogonal(lat, 2, seed=61, decomposition=dec)
    a = (u1.as_array() - eye) // 2
    b = (v.as_array() - eye) // 4
    assert trace_product_check(lat, a, b, "a").status == "pass"
    # all-ones A makes E + 2A non-orthogonal here
    assert trace_product_check(lat, np.ones((4, 4), int), b, "a").status == "rejected"


def test_commutator_trace_passes_and_rejects(rigidity_setup):
    lat, dec = rigidity_setup
    u1 = sample_orthogonal(lat, 1, seed=70, decomposition=dec)
    v = sample_orthogonal(lat, 2, seed=71, decomposition=dec)
    w = sample_orthogonal(lat, 3, seed=72, decomposition=dec)
    assert commutator_trace_check(lat, u1, w, "a").status == "pass"
    assert commutator_trace_check(lat, u1, v, "a").status == "pass"
    # -E is orthogonal and an involution but not identity mod 4, so as
    # psi it breaks the hypothesis
    minus = OrthogonalMap(
        tuple(map(tuple, (-np.eye(4, dtype=np.int64)) % (1 << lat.precision))), 1
    )
    outcome = commutator_trace_check(lat, u1, minus, "a")
    assert outcome.status == "rejected"
    assert "mod 4" in outcome.detail


@pytest.mark.parametrize(
    "runner",
    [
        lambda lat, u: overdet_check(lat, u, u, "c"),
        lambda lat, u: trace_product_check(lat, u.as_array(), u.as_array(), "z"),
        lambda lat, u: commutator_trace_check(lat, u, u, ""),
    ],
)
def test_unknown_variants_are_usage_errors(rigidity_setup, runner):
    lat, dec = rigidity_setup
    u = sample_orthogonal(lat, 2, seed=80, decomposition=dec)
    with pytest.raises(UsageError):
        runner(lat, u)


# --- the campaign ----------------------------------------------------------


def test_small_campaign_is_clean_and_deterministic():
    first = run_trials(trials=40, seed=7)
    second = run_trials(trials=40, seed=7)
    assert first.ok
    assert first.failure_details == ()
    assert first.to_json() == second.to_json()
    assert first.tallies["jordan_roundtrip"].attempts == 40
    assert first.tallies["dual_integrality"].attempts == 120
    for name in (
        "overdet_a",
        "overdet_b",
        "trace_product_a",
        "trace_product_b",
        "commutator_trace_a",
        "commutator_trace_b",
        "block_valuation_e1",
        "block_valuation_e2",
        "rescale_halves",
    ):
        tally = first.tallies[name]
        assert tally.failures == 0
        assert tally.attempts == 40
    assert "40 trials" in first.summary()
