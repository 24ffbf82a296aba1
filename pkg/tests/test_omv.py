import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dyncolor import DimensionMismatch, FormatError, NotConsecutiveOnes
from dyncolor import omv


def random_c1(rng, n, p_empty=0.1):
    """Dense n x n consecutive-ones matrix."""
    m = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        if rng.random() >= p_empty:
            a, b = sorted(rng.integers(0, n, size=2))
            m[i, a : b + 1] = 1
    return m


def random_c1_vector(rng, n, p_empty=0.1):
    v = np.zeros(n, dtype=np.uint8)
    if rng.random() >= p_empty:
        a, b = sorted(rng.integers(0, n, size=2))
        v[a : b + 1] = 1
    return v


def test_row_span_examples():
    assert omv.ones_span([0, 0, 1, 1, 0]) == (2, 3)
    assert omv.ones_span([0, 0, 0]) is None
    with pytest.raises(NotConsecutiveOnes) as err:
        omv.preprocess(np.array([[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]))
    assert err.value.row == 1


def test_identity():
    n = 9
    idx = omv.preprocess(np.eye(n, dtype=np.uint8))
    assert [(iv.lo, iv.hi) for iv in idx.rows] == [(i, i) for i in range(n)]
    v = np.array([0, 0, 1, 1, 1, 0, 0, 0, 0])
    assert omv.multiply(idx, v).tolist() == v.astype(bool).tolist()


def test_zero_vector_and_rows():
    m = np.zeros((4, 4), dtype=np.uint8)
    m[1, 1:3] = 1
    idx = omv.preprocess(m)
    assert not omv.multiply(idx, np.zeros(4)).any()
    assert omv.multiply(idx, [1, 1, 1, 1]).tolist() == [False, True, False, False]


def test_naive_examples():
    assert omv.naive_multiply([[1, 1], [0, 1]], [0, 1]).tolist() == [True, True]
    assert not omv.naive_multiply(np.zeros((3, 3)), [1, 1, 1]).any()
    with pytest.raises(DimensionMismatch):
        omv.naive_multiply(np.eye(3), [1, 0])


def test_dimension_and_shape_errors():
    idx = omv.preprocess(np.eye(3))
    with pytest.raises(DimensionMismatch):
        omv.multiply(idx, [1, 0])
    with pytest.raises(NotConsecutiveOnes):
        omv.multiply(idx, [1, 0, 1])
    with pytest.raises(DimensionMismatch):
        omv.preprocess(np.ones((2, 3)))


@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
@settings(max_examples=200, deadline=None)
def test_multiply_matches_naive(n, seed):
    rng = np.random.default_rng(seed)
    m = random_c1(rng, n)
    idx = omv.preprocess(m)
    for _ in range(5):
        v = random_c1_vector(rng, n)
        assert np.array_equal(omv.multiply(idx, v), omv.naive_multiply(m, v))


def test_text_formats_round_trip():
    lines = ["3\n", "110\n", "011\n", "000\n"]
    m = omv.parse_matrix(lines)
    assert m.tolist() == [[1, 1, 0], [0, 1, 1], [0, 0, 0]]
    vecs = list(omv.iter_vectors(["100\n", "\n", "001\n"], 3))
    outs = [omv.format_bits(o) for o in omv.answer_online(m, vecs)]
    assert outs == ["100", "010"]
    assert outs == [omv.format_bits(o) for o in omv.answer_online(m, vecs, naive=True)]


@pytest.mark.parametrize("lines", [
    [],
    ["x\n"],
    ["2\n", "10\n"],
    ["2\n", "10\n", "1\n"],
    ["2\n", "10\n", "12\n"],
    ["1\n", "1\n", "0\n"],
])
def test_bad_matrix_files(lines):
    with pytest.raises(FormatError):
        omv.parse_matrix(lines)


def test_answers_are_online():
    # each answer must be produced before the next vector is requested
    m = np.eye(3, dtype=np.uint8)
    pulled = []

    def vectors():
        for v in ([1, 0, 0], [0, 1, 0]):
            pulled.append(v)
            yield np.array(v)

    answers = omv.answer_online(m, vectors())
    next(answers)
    assert len(pulled) == 1
