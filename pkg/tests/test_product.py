import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ipcodes.galois import Field, rank
from ipcodes.mds import make_family
from ipcodes.product import (CodeSpec, IrregularProductCode, SpecError, build_code, dimension,
                             dimension_oracle, encode, extract_info, is_codeword, mark_schedule)

F5 = Field.prime(5)
F7 = Field.prime(7)
F8 = Field.gf2e(3)


def monotone(draw, length, top):
    return sorted(draw(st.lists(st.integers(0, top), min_size=length, max_size=length)))


@st.composite
def specs(draw, max_side=5, fields=(F7, F8)):
    F = draw(st.sampled_from(fields))
    m = draw(st.integers(1, max_side))
    n = draw(st.integers(1, max_side))
    return CodeSpec(F, m, n, monotone(draw, m, n), monotone(draw, n, m))


def test_examples():
    assert dimension(CodeSpec.regular(F7, 4, 4, 3, 2)) == 6
    assert dimension(CodeSpec(F7, 3, 3, (1, 2, 3), (1, 2, 3))) == 3
    assert dimension(CodeSpec(F7, 3, 3, (0, 0, 0), (3, 3, 3))) == 0
    assert dimension_oracle(CodeSpec(F7, 3, 3, (0, 0, 0), (3, 3, 3))) == 0
    s = mark_schedule(CodeSpec(F7, 2, 2, (1, 2), (1, 2)))
    assert s.generating == ((0, 0), (1, 1))
    full = CodeSpec.regular(F5, 3, 4, 4, 3)
    assert len(mark_schedule(full).generating) == 12
    assert all(not step.coords for step in mark_schedule(full).steps)


def test_validation_names_first_offender():
    with pytest.raises(SpecError) as ei:
        CodeSpec(F7, 4, 4, (1, 2, 3, 2), (1, 1, 1, 1))
    assert ei.value.field == "a[3]"
    with pytest.raises(SpecError) as ei:
        CodeSpec(F7, 2, 2, (1, 1), (0, 3))
    assert ei.value.field == "b[1]"
    with pytest.raises(SpecError) as ei:
        CodeSpec(F5, 6, 2, (1,) * 6, (1, 1))
    assert ei.value.field == "field"
    with pytest.raises(SpecError) as ei:
        CodeSpec(F5, 2, 2, (1,), (1, 1))
    assert ei.value.field == "a"


@settings(max_examples=150, deadline=None)
@given(spec=specs())
def test_dimension_formula_matches_rank(spec):
    assert dimension(spec) == dimension_oracle(spec)


@settings(max_examples=150, deadline=None)
@given(spec=specs(max_side=6))
def test_schedule_invariants(spec):
    s = mark_schedule(spec)
    assert len(s.generating) == dimension(spec)
    seen = list(s.generating) + [c for step in s.steps for c in step.coords]
    assert len(seen) == len(set(seen)) == spec.m * spec.n
    # replay and check prefix property independently of the library's own asserts
    marked = np.zeros((spec.m, spec.n), dtype=bool)
    gen = set(s.generating)
    for step in s.steps:
        line = marked[step.index] if step.kind == "row" else marked[:, step.index]
        k = spec.a[step.index] if step.kind == "row" else spec.b[step.index]
        # generating coordinates of a row are placed right before that row is filled
        if step.kind == "row":
            for j in range(spec.n):
                if (step.index, j) in gen:
                    marked[step.index, j] = True
        assert line.sum() >= k
        for i, j in step.coords:
            marked[i, j] = True
        for r in marked:
            assert r[: r.sum()].all()
        for c in marked.T:
            assert c[: c.sum()].all()
    assert marked.all()


@settings(max_examples=60, deadline=None)
@given(spec=specs(), data=st.data())
def test_encode_is_systematic_codeword(spec, data):
    k = dimension(spec)
    info = np.array(data.draw(st.lists(st.integers(0, spec.field.q - 1), min_size=k, max_size=k)),
                    dtype=np.int64)
    M = encode(spec, None, info)
    assert is_codeword(spec, M)
    assert np.array_equal(extract_info(spec, None, M), info)


@pytest.mark.parametrize("spec", [CodeSpec.regular(F7, 4, 4, 3, 2),
                                  CodeSpec(F7, 5, 5, (1, 2, 2, 4, 5), (0, 2, 3, 3, 5)),
                                  CodeSpec(F7, 4, 5, (2, 3, 3, 5), (1, 1, 2, 3, 4))])
def test_unit_encodings_span_the_code(spec):
    k = dimension(spec)
    rows = [encode(spec, None, np.eye(k, dtype=np.int64)[t]).ravel() for t in range(k)]
    assert rank(F7, np.array(rows)) == k == build_code(spec).dimension()


def test_many_random_messages_round_trip():
    spec = CodeSpec(F8, 5, 6, (2, 3, 4, 4, 6), (1, 2, 2, 3, 4, 5))
    rng = np.random.default_rng(7)
    k = dimension(spec)
    assert np.array_equal(encode(spec, None, np.zeros(k, dtype=np.int64)), np.zeros((5, 6)))
    for _ in range(1000):
        info = rng.integers(0, 8, k)
        M = encode(spec, None, info)
        assert is_codeword(spec, M)
        assert np.array_equal(extract_info(spec, None, M), info)


def test_perturbation_breaks_membership():
    spec = CodeSpec.regular(F7, 4, 4, 3, 2)
    M = encode(spec, None, np.arange(1, 7))
    for i in range(4):
        for j in range(4):
            for delta in range(1, 7):
                P = M.copy()
                P[i, j] = (P[i, j] + delta) % 7
                assert not is_codeword(spec, P)


def test_encode_rejects_bad_info():
    spec = CodeSpec.regular(F7, 4, 4, 3, 2)
    with pytest.raises(ValueError):
        encode(spec, None, [1, 2, 3])
    with pytest.raises(ValueError):
        encode(spec, None, [7, 0, 0, 0, 0, 0])


@settings(max_examples=60, deadline=None)
@given(spec=specs(max_side=5, fields=(F7,)), seed=st.integers(0, 2**32 - 1))
def test_formula_bounds_non_nested_mds_products(spec, seed):
    """Every line gets its own RS evaluation points, so nesting is lost."""
    rng = np.random.default_rng(seed)
    F = spec.field

    def code(length, k):
        pts = rng.permutation(F.q)[:length]
        return make_family(F, length, eval_points=pts).code(k)

    c = IrregularProductCode(F, [code(spec.n, k) for k in spec.a],
                             [code(spec.m, k) for k in spec.b])
    assert c.dimension() <= dimension(spec)


def test_iterative_decode_recovers_tolerable_block():
    spec = CodeSpec.regular(F7, 4, 4, 3, 2)
    code = build_code(spec)
    M = encode(spec, None, [1, 2, 3, 4, 5, 6])
    R = M.copy()
    R[:2, :3] = -1
    out, rounds = code.iterative_decode(R)
    assert np.array_equal(out, M)
    assert rounds == 1
