"""The two-torsion class group machinery over GF(2).

Dimensions and orbit sizes are small enough to verify by exhaustive
enumeration, which is what most of these tests do -- the module's own
claims are recomputed here from the raw definitions (parity conditions
on 16 coordinates) rather than trusted.
"""

import json
from itertools import permutations

import numpy as np
import pytest

from sixlines.brauer import (
    G2_MATRIX,
    G4_MATRIX,
    BrauerElement,
    build_brauer_quotient,
    build_even_subspace,
    class_labels,
    mask_from_pairs,
    orbit_stabilizer,
    pair_bit,
    pentagon_class,
    permute_mask,
    structure_report,
    sym6_action,
    verify_outer,
    verify_s5_matrices,
)
from sixlines.errors import UsageError


@pytest.fixture(scope="module")
def quotient():
    return build_brauer_quotient()


def gf2_rank(mat):
    """Row rank over GF(2), by elimination on a numpy copy."""
    m = np.array(mat, dtype=np.int64) % 2
    rank = 0
    for col in range(m.shape[1]):
        rows = [r for r in range(rank, m.shape[0]) if m[r, col]]
        if not rows:
            continue
        m[[rank, rows[0]]] = m[[rows[0], rank]]
        for r in range(m.shape[0]):
            if r != rank and m[r, col]:
                m[r] = (m[r] + m[rank]) % 2
        rank += 1
    return rank


# --- coordinates and masks -------------------------------------------------


def test_pair_bits_are_lexicographic():
    assert pair_bit(1, 2) == 1 << 1
    assert pair_bit(1, 3) == 1 << 2
    assert pair_bit(1, 6) == 1 << 5
    assert pair_bit(2, 3) == 1 << 6
    assert pair_bit(5, 6) == 1 << 15
    assert pair_bit(4, 2) == pair_bit(2, 4)


def test_pair_bit_rejects_degenerate_pairs():
    with pytest.raises(UsageError):
        pair_bit(3, 3)
    with pytest.raises(UsageError):
        pair_bit(0, 2)
    with pytest.raises(UsageError):
        pair_bit(1, 7)


def test_mask_from_pairs_and_the_hyperplane_bit():
    assert mask_from_pairs([]) == 0
    assert mask_from_pairs([], with_l=True) == 1
    assert mask_from_pairs([(1, 2), (5, 6)]) == (1 << 1) | (1 << 15)
    # XOR semantics: a pair twice cancels
    assert mask_from_pairs([(1, 2), (1, 2)]) == 0


def test_permute_mask_is_an_action():
    sigma = (2, 3, 1, 4, 5, 6)
    tau = (1, 2, 3, 5, 6, 4)
    composed = tuple(sigma[t - 1] for t in tau)
    for mask in (0b1, pair_bit(1, 4) | 1, mask_from_pairs([(2, 3), (4, 6)], True)):
        assert permute_mask((1, 2, 3, 4, 5, 6), mask) == mask
        assert permute_mask(sigma, permute_mask(tau, mask)) == permute_mask(
            composed, mask
        )
        assert permute_mask(sigma, mask) & 1 == mask & 1  # l is fixed


# --- the quotient ----------------------------------------------------------


def test_dimensions_eleven_five_six(quotient):
    assert len(build_even_subspace()) == 11
    assert quotient.dim_even == 11
    assert quotient.dim_relations == 5
    assert quotient.dim == 6
    assert len(quotient.quotient_basis) == 6


def test_membership_is_the_six_parity_conditions(quotient):
    # a bare pair class touches exactly two of the six conditions oddly
    assert not quotient.contains(pair_bit(1, 2))
    # l + all five pairs through a line is a relation, hence a member
    line_sum = mask_from_pairs([(3, j) for j in (1, 2, 4, 5, 6)], with_l=True)
    assert quotient.contains(line_sum)
    assert quotient.reduce(line_sum) == 0  # and it dies in the quotient
    with pytest.raises(UsageError):
        quotient.element(pair_bit(1, 2))


def test_reduce_is_idempotent_and_linear(quotient):
    masks = [rep for rep in quotient.even_basis]
    for m in masks:
        assert quotient.reduce(quotient.reduce(m)) == quotient.reduce(m)
    for a in masks[:4]:
        for b in masks[4:8]:
            assert quotient.reduce(a ^ b) == quotient.reduce(a) ^ quotient.reduce(b)


def test_coordinates_roundtrip_over_all_subsets(quotient):
    basis = quotient.quotient_basis
    for combo in range(64):
        mask = 0
        for k in range(6):
            if combo >> k & 1:
                mask ^= basis[k]
        assert quotient.coordinates(BrauerElement(quotient.reduce(mask))) == combo


# --- orbits ----------------------------------------------------------------


def test_pentagon_orbit_and_stabilizer(quotient):
    b6 = pentagon_class(quotient)
    orbit, stab = orbit_stabilizer(quotient, b6, "sym6")
    assert (len(orbit), stab) == (12, 60)
    alt_orbit, alt_stab = orbit_stabilizer(quotient, b6, "alt6")
    assert (len(alt_orbit), alt_stab) == (6, 60)
    assert {b.representative for b in alt_orbit} <= {b.representative for b in orbit}


def test_orbit_rejects_unknown_groups(quotient):
    with pytest.raises(UsageError):
        orbit_stabilizer(quotient, pentagon_class(quotient), "psl27")


def test_every_pentagon_lands_in_the_distinguished_orbit(quotient):
    # 72 pentagon supports on the six lines, 12 classes after relations
    masks = set()
    for verts in permutations(range(1, 7), 5):
        masks.add(
            mask_from_pairs(
                [(verts[i], verts[(i + 1) % 5]) for i in range(5)]
            )
        )
    assert len(masks) == 72
    orbit, _ = orbit_stabilizer(quotient, pentagon_class(quotient), "sym6")
    assert {quotient.reduce(m) for m in masks} == {b.representative for b in orbit}


def test_two_published_pentagon_supports_give_the_same_class(quotient):
    first = quotient.reduce(mask_from_pairs([(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]))
    second = quotient.reduce(mask_from_pairs([(1, 3), (2, 3), (2, 4), (4, 6), (1, 6)]))
    assert first == second == pentagon_class(quotient).representative


def test_class_labels_are_independent_and_end_with_the_pentagon(quotient):
    labels = class_labels(quotient)
    assert len(labels) == 6
    assert labels[-1] == pentagon_class(quotient)
    assert len({b.representative for b in labels}) == 6
    rows = [[rep >> k & 1 for k in range(16)] for rep in
            (b.representative for b in labels)]
    assert gf2_rank(rows) == 6


def test_the_label_sum_is_fixed_by_the_whole_group(quotient):
    cert = verify_outer(quotient)
    orbit, stab = orbit_stabilizer(quotient, cert.invariant, "sym6")
    assert len(orbit) == 1 and stab == 720


# --- the outer automorphism ------------------------------------------------


def test_outer_certificate(quotient):
    cert = verify_outer(quotient)
    assert cert.outer
    assert cert.transposition_cycle_type == (2, 2, 2)
    assert len(cert.mapping) == 720
    assert len(set(cert.mapping.values())) == 720
    ident = (1, 2, 3, 4, 5, 6)
    assert cert.mapping[ident] == ident
    assert cert.transposition_image == cert.mapping[(2, 1, 3, 4, 5, 6)]


def test_companion_map_is_a_homomorphism_on_samples(quotient):
    mapping = verify_outer(quotient).mapping
    samples = [
        (2, 1, 3, 4, 5, 6),
        (2, 3, 4, 5, 6, 1),
        (1, 3, 2, 5, 4, 6),
        (6, 5, 4, 3, 2, 1),
    ]
    compose = lambda s, t: tuple(s[x - 1] for x in t)
    for g in samples:
        for h in samples:
            assert mapping[compose(g, h)] == compose(mapping[g], mapping[h])


def test_companion_of_a_transposition_has_no_fixed_points(quotient):
    image = verify_outer(quotient).transposition_image
    assert all(image[i - 1] != i for i in range(1, 7))
    assert sorted(image) == [1, 2, 3, 4, 5, 6]


# --- the published matrices ------------------------------------------------


def test_sym6_action_matrices_multiply_like_the_group(quotient):
    def mul(a, b):
        return tuple(
            int(np.bitwise_xor.reduce([b[k] for k in range(6) if row >> k & 1] or [0]))
            for row in a
        )

    ident = tuple(1 << k for k in range(6))
    assert sym6_action(quotient, (1, 2, 3, 4, 5, 6)) == ident
    swap = sym6_action(quotient, (2, 1, 3, 4, 5, 6))
    assert mul(swap, swap) == ident
    a = (2, 3, 1, 4, 5, 6)
    b = (1, 2, 3, 5, 4, 6)
    ab = tuple(a[x - 1] for x in b)
    assert mul(sym6_action(quotient, b), sym6_action(quotient, a)) in (
        sym6_action(quotient, ab),
        mul(sym6_action(quotient, a), sym6_action(quotient, b)),
    )


def test_published_matrix_report(quotient):
    report = verify_s5_matrices(quotient)
    assert report.order_g4 == 4
    assert report.dual_order == 4
    # the printed square matches only after swapping two basis labels;
    # the print never pins its basis, so that is the certified statement
    assert not report.square_is_g2
    assert report.square_relabeling == (1, 3, 2, 4, 5, 6)
    assert report.square_matches_print
    assert report.conjugate_to_line_cycle
    assert report.ok


def test_rank_profile_recomputed_independently(quotient):
    report = verify_s5_matrices(quotient)
    a = np.array(G4_MATRIX, dtype=np.int64)
    nil = (a + np.eye(6, dtype=np.int64)) % 2
    profile = []
    power = np.eye(6, dtype=np.int64)
    for _ in range(4):
        power = power @ nil % 2
        profile.append(gf2_rank(power))
    assert tuple(profile) == report.rank_profile
    assert profile[-1] == 0  # unipotent of nilpotency degree at most 4


def test_tampered_matrices_fail_the_report(quotient):
    ident = tuple(tuple(int(i == j) for j in range(6)) for i in range(6))
    assert not verify_s5_matrices(quotient, g4=ident).ok
    assert not verify_s5_matrices(quotient, g2=ident).square_matches_print
    assert not verify_s5_matrices(quotient, g2=ident).ok
    assert verify_s5_matrices(quotient, g4=G4_MATRIX, g2=G2_MATRIX).ok


# --- the aggregate report --------------------------------------------------


def test_structure_report_is_ok_and_serializes():
    report = structure_report()
    assert report.ok
    payload = json.loads(report.to_json())
    assert payload["ok"]
    assert payload["dim_quotient"] == 6
    assert payload["transposition_cycle_type"] == [2, 2, 2]
    assert payload["matrix_square_relabeling"] == [1, 3, 2, 4, 5, 6]
    text = report.summary()
    assert "overall: OK" in text
    assert "2+2+2" in text
