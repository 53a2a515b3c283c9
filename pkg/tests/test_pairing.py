from itertools import product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from vhsquare.bicomplex import build_standard_2complex, parity_subdivide, side_decompose, triangle_holds
from vhsquare.pairing import (ORACLE_LIMIT, Pairing, PairingError, abstract_decomposition, brute_force_pairing,
                              chords_cross, greedy_pairing, pairing_exists, positions, verify_admissible)
from vhsquare.presentation import leary_family, leary_presentation, make_presentation


def catalan(k):
    return comb(2 * k, k) // (k + 1)


def ranked(sd, pairing):
    """Pairs renumbered by rank among the positions of the pairing's class."""
    rank = {bp.index: k for k, bp in enumerate(positions(sd, pairing.cls))}
    return {tuple(sorted((rank[i], rank[j]))) for i, j in pairing.pairs}


@pytest.mark.parametrize("lengths, expected", [((1, 1), True), ((2, 4, 4), True), ((3, 1), False),
                                               ((1, 2, 2), False), ((2, 2), True), ((6,), False)])
def test_pairing_exists(lengths, expected):
    assert pairing_exists(lengths) is expected


def test_pairing_exists_rejects_bad_lengths():
    with pytest.raises(PairingError):
        pairing_exists([0, 2])


def test_greedy_square():
    x = build_standard_2complex(make_presentation(["v"], ["h"], ["v h v^-1 h^-1"]))
    sd = side_decompose(x.polygons[0])
    assert greedy_pairing(sd, "V").pairs == {(0, 2)}
    assert greedy_pairing(sd, "H").pairs == {(1, 3)}


def test_greedy_211():
    sd = abstract_decomposition((2, 1, 1))
    p = greedy_pairing(sd, "V")
    assert ranked(sd, p) == {(1, 2), (0, 3)}
    assert verify_admissible(sd, p)


def test_greedy_odd_sum():
    with pytest.raises(PairingError):
        greedy_pairing(abstract_decomposition((1, 2, 2)), "V")


def test_verify_crossing():
    sd = abstract_decomposition((2, 1, 1))
    v0, v1, v2, v3 = [bp.index for bp in positions(sd, "V")]
    verdict = verify_admissible(sd, Pairing.from_pairs("V", [(v0, v2), (v1, v3)]))
    assert not verdict and verdict.condition == 2
    assert verdict.witness == ((v0, v2), (v1, v3))


def test_verify_same_side():
    sd = abstract_decomposition((2, 1, 1))
    v0, v1, _, _ = [bp.index for bp in positions(sd, "V")]
    verdict = verify_admissible(sd, Pairing.from_pairs("V", [(v0, v1)]))
    assert not verdict and verdict.condition == 1


def test_verify_incomplete_and_duplicate():
    sd = abstract_decomposition((1, 1, 1, 1))
    v = [bp.index for bp in positions(sd, "V")]
    assert verify_admissible(sd, Pairing.from_pairs("V", [(v[0], v[1])])).condition == 3
    assert verify_admissible(sd, Pairing.from_pairs("V", [(v[0], v[1]), (v[1], v[2])])).condition == 3


def test_chords_cross():
    assert chords_cross((0, 2), (1, 5))
    assert not chords_cross((0, 2), (3, 7))
    assert not chords_cross((0, 5), (1, 2))
    assert not chords_cross((0, 2), (2, 4))


def test_oracle_small_cases():
    assert brute_force_pairing((1, 1)).count == 1
    assert not brute_force_pairing((3, 1)).found
    # sides {0,1} and {2,3}: only 0-3 with 1-2
    assert brute_force_pairing((2, 2)).count == 1


@pytest.mark.parametrize("k", range(1, 6))
def test_oracle_counts_catalan(k):
    # with every side of length 1 any non-crossing perfect matching is admissible
    assert brute_force_pairing((1,) * (2 * k)).count == catalan(k)


def test_oracle_limit():
    with pytest.raises(PairingError):
        brute_force_pairing((ORACLE_LIMIT, 2))


def test_oracle_agrees_up_to_three_sides():
    for r in (1, 2, 3):
        for lengths in product(range(1, 5), repeat=r):
            assert brute_force_pairing(lengths, count=False).found == pairing_exists(lengths), lengths


lengths_st = st.lists(st.integers(1, 6), min_size=2, max_size=7).filter(lambda v: sum(v) % 2 == 0)


@given(lengths_st, st.sampled_from("VH"))
@settings(max_examples=300)
def test_greedy_matches_criterion(lengths, cls):
    sd = abstract_decomposition(lengths, cls)
    if triangle_holds(lengths):
        assert verify_admissible(sd, greedy_pairing(sd, cls))
    else:
        with pytest.raises(PairingError):
            greedy_pairing(sd, cls)


def test_greedy_on_fixtures():
    for p in (leary_presentation(), leary_family(5)):
        for poly in parity_subdivide(build_standard_2complex(p)).polygons:
            sd = side_decompose(poly)
            for cls in "VH":
                assert verify_admissible(sd, greedy_pairing(sd, cls))


def test_greedy_deterministic():
    sd = abstract_decomposition((3, 2, 3, 2))
    assert greedy_pairing(sd, "V") == greedy_pairing(sd, "V")
