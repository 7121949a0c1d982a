import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ipcodes.distance import (DistanceProfile, ProfileError, achieve_distance, admissible,
                              anchors, brute_force_min_weight, distance_bound, inner_max,
                              inner_via_maxflow, is_witness, min_weight_oracle)
from ipcodes.galois import Field
from ipcodes.product import CodeSpec, build_code, dimension

F7 = Field.prime(7)


@st.composite
def profiles(draw, max_m=8, max_n=8):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    d = sorted(draw(st.lists(st.integers(1, n), min_size=m, max_size=m)), reverse=True)
    dp = sorted(draw(st.lists(st.integers(1, m), min_size=n, max_size=n)), reverse=True)
    return DistanceProfile(d, dp)


def test_examples():
    p = DistanceProfile((2, 2, 2), (2, 2, 2))
    assert distance_bound(p) == 4
    assert inner_max(p, 1, 1) == inner_via_maxflow(p, 1, 1) == 6
    assert distance_bound(DistanceProfile((2, 1), (2, 1))) == 1
    assert distance_bound(DistanceProfile((3, 3), (2, 2, 2))) == 6


def test_profile_validation():
    with pytest.raises(ProfileError):
        DistanceProfile((1, 2), (1, 1))
    with pytest.raises(ProfileError):
        DistanceProfile((3,), (1, 1))


def test_admissibility_uses_both_constraints():
    p = DistanceProfile((3, 1, 1), (3, 2, 1))
    assert admissible(p, 1, 1)
    assert not admissible(p, 1, 2)  # row 1 needs 3 columns from column 2 on
    assert not admissible(p, 2, 1)  # column 1 needs 3 rows from row 2 on
    assert (3, 3) in anchors(p)
    with pytest.raises(ProfileError):
        inner_via_maxflow(p, 2, 1)


@settings(max_examples=300, deadline=None)
@given(p=profiles())
def test_maxflow_matches_closed_form_at_every_anchor(p):
    for i, j in anchors(p):
        assert inner_via_maxflow(p, i, j) == inner_max(p, i, j)


@settings(max_examples=200, deadline=None)
@given(p=profiles(max_m=4, max_n=4))
def test_bound_matches_witness_oracle(p):
    w, M = min_weight_oracle(p)
    assert is_witness(p, M)
    assert distance_bound(p) == w


@settings(max_examples=40, deadline=None)
@given(p=profiles(max_m=3, max_n=3))
def test_dp_oracle_matches_brute_force(p):
    assert min_weight_oracle(p)[0] == brute_force_min_weight(p)


def test_oracle_size_limit():
    with pytest.raises(ValueError):
        min_weight_oracle(DistanceProfile((1,) * 6, (1,) * 6))


@pytest.mark.parametrize("d,dp", [((2, 2, 2), (2, 2, 2)), ((3, 2, 1), (2, 2, 1)),
                                  ((4, 3, 3, 1), (4, 2, 2, 2)), ((2, 2), (2, 1, 1))])
def test_achievability(d, dp):
    p = DistanceProfile(d, dp)
    got = achieve_distance(p, F7)
    assert got.bound == distance_bound(p)
    assert got.code.is_codeword(got.witness)
    assert int(np.count_nonzero(got.witness)) == got.bound
    for i, c in enumerate(got.code.row_codes):
        assert c.n - c.k + 1 == d[i]
    for j, c in enumerate(got.code.col_codes):
        assert c.n - c.k + 1 == dp[j]
    if got.code.dimension() <= 4:
        assert got.code.min_distance() == got.bound


def _small_nested_specs():
    F = Field.prime(5)
    for m, n in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        for a in itertools.combinations_with_replacement(range(1, n + 1), m):
            for b in itertools.combinations_with_replacement(range(1, m + 1), n):
                spec = CodeSpec(F, m, n, a, b)
                if 0 < dimension(spec) <= 4:
                    yield spec


def test_nested_rs_product_distance_respects_bound():
    count = 0
    for spec in _small_nested_specs():
        p = DistanceProfile([spec.n - x + 1 for x in spec.a], [spec.m - x + 1 for x in spec.b])
        assert build_code(spec).min_distance() >= distance_bound(p)
        count += 1
    assert count > 50
