import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ipcodes.galois import Field, FieldError, rank
from ipcodes.mds import (ERASED, DecodeFailure, LinearCode, NotACodewordError, erasure_decode,
                         is_mds, make_family, scaled_code_containing)
from ipcodes.mds import encode as rs_encode

F7 = Field.prime(7)
F8 = Field.gf2e(3)


def test_vandermonde_rows_and_encode():
    fam = make_family(F7, 3)
    assert fam.rows.tolist() == [[1, 1, 1], [0, 1, 2], [0, 1, 4]]
    fam = make_family(F7, 3, eval_points=(1, 2, 3))
    assert fam.rows.tolist() == [[1, 1, 1], [1, 2, 3], [1, 4, 2]]
    assert rs_encode(fam, 2, [1, 1]).tolist() == [2, 3, 4]
    assert erasure_decode(fam, 2, [2, ERASED, 4]).tolist() == [2, 3, 4]


@pytest.mark.parametrize("F", [F7, F8, Field.prime(5)])
def test_every_member_is_mds_by_enumeration(F):
    n = min(F.q, 5)
    fam = make_family(F, n)
    for k in range(n + 1):
        c = fam.code(k)
        assert c.k == k
        # brute-force distance over all q^k codewords
        assert c.min_distance() == n - k + 1
        assert is_mds(c)


def test_nesting():
    fam = make_family(F8, 7)
    for k in range(7):
        small, big = fam.code(k), fam.code(k + 1)
        stacked = np.vstack([big.generator, small.generator])
        assert rank(F8, stacked) == k + 1
        for word in small.codewords() if k <= 2 else []:
            assert big.contains(word)


@settings(max_examples=300, deadline=None)
@given(k=st.integers(0, 7), data=st.data())
def test_round_trip_with_tolerable_erasures(k, data):
    fam = make_family(F8, 7)
    msg = data.draw(st.lists(st.integers(0, 7), min_size=k, max_size=k))
    cw = fam.code(k).encode(msg)
    erased = data.draw(st.sets(st.integers(0, 6), max_size=7 - k))
    rx = cw.copy()
    rx[list(erased)] = ERASED
    assert np.array_equal(fam.code(k).erasure_decode(rx), cw)
    assert fam.code(k).contains(cw)


def test_decode_errors():
    c = make_family(F7, 5).code(3)
    cw = c.encode([1, 2, 3])
    rx = cw.copy()
    rx[:3] = ERASED
    with pytest.raises(DecodeFailure):
        c.erasure_decode(rx)
    rx = cw.copy()
    rx[4] = (rx[4] + 1) % 7
    with pytest.raises(NotACodewordError):
        c.erasure_decode(rx)


def test_family_preconditions():
    with pytest.raises(FieldError):
        make_family(F7, 8)
    with pytest.raises(ValueError):
        make_family(F7, 3, eval_points=(1, 1, 2))
    with pytest.raises(ValueError):
        make_family(F7, 3).code(4)


def test_zero_dimension_code():
    c = make_family(F7, 4).code(0)
    assert c.k == 0
    assert c.parity_check.shape == (4, 4)
    assert c.erasure_decode([ERASED] * 4).tolist() == [0, 0, 0, 0]
    assert c.min_distance() == 5


def test_scaled_code_known_example():
    fam = make_family(F7, 3, eval_points=(1, 2, 3))
    sc = scaled_code_containing(fam, 2, [0, 1, 1])
    assert sc.column_scalars == (1, 1, 4)
    assert sc.contains([0, 1, 1])
    assert sc.min_distance() == 2


@pytest.mark.parametrize("n,k", [(4, 2), (5, 3), (5, 1), (6, 4), (4, 4)])
def test_scaled_code_contains_every_admissible_target(n, k):
    fam = make_family(F7, n)
    for w in range(n - k + 1, n + 1):
        for support in itertools.combinations(range(n), w):
            t = np.zeros(n, dtype=np.int64)
            t[list(support)] = 1
            sc = scaled_code_containing(fam, k, t)
            assert sc.contains(t)
            assert is_mds(sc)


def test_scaled_code_rejects_light_target():
    fam = make_family(F7, 5)
    with pytest.raises(ValueError):
        scaled_code_containing(fam, 2, [1, 1, 0, 0, 0])


def test_linear_code_from_arbitrary_generator():
    c = LinearCode(Field.prime(2), np.array([[1, 1, 1]]))
    assert c.min_distance() == 3
    assert not c.contains([1, 0, 1])
