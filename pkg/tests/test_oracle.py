import numpy as np
import pytest
from hypothesis import given, strategies as st

from dyckedit.core import ParenSeq, height_profile
from dyckedit.encoding import parse_ascii
from dyckedit.oracle import (EXHAUSTIVE_MAX_LEN, INF, all_sequences, cross_check_rows, dp_cubic,
                             exhaustive_distance, minplus_naive)

seqs = st.lists(st.integers(0, 3), max_size=12).map(lambda c: ParenSeq(c, 2))


def test_exhaustive_examples():
    assert exhaustive_distance(parse_ascii("")) == 0
    assert exhaustive_distance(parse_ascii("(")) == 1
    assert exhaustive_distance(parse_ascii("([)]")) == 2
    assert exhaustive_distance(parse_ascii("([)]"), 1) == 2
    assert exhaustive_distance(parse_ascii("([)]"), 0) == 1
    with pytest.raises(ValueError):
        exhaustive_distance(ParenSeq([0] * (EXHAUSTIVE_MAX_LEN + 1)))


def test_dp_cubic_examples():
    assert dp_cubic(parse_ascii("()"), 2).distance == 0
    assert dp_cubic(parse_ascii("(]"), 2).distance == 1
    assert dp_cubic(parse_ascii("([)]"), 3).distance == 2
    t = dp_cubic(parse_ascii("([)]"), 1)
    assert t.cap == 2 and t.distance == 2 and t[1, 3] == 1


@given(seqs, st.integers(0, 6))
def test_dp_matches_exhaustive(s, k):
    assert dp_cubic(s, k).distance == exhaustive_distance(s, k)


@given(seqs)
def test_table_basics_and_substrings(s):
    n = len(s)
    D = dp_cubic(s, n).values
    for i in range(n + 1):
        assert D[i, i] == 0
        if i < n:
            assert D[i, i + 1] == 1
    for i in range(n + 1):
        for j in range(i, n + 1):
            assert D[i, j] == dp_cubic(s[i:j], n).distance


@given(seqs)
def test_table_is_fully_bd(s):
    n = len(s)
    U = dp_cubic(s, n).values
    for i in range(n):
        for j in range(i + 1, n + 1):
            assert abs(U[i, j] - U[i + 1, j]) <= 1
            assert abs(U[i, j - 1] - U[i, j]) <= 1


@given(seqs, st.integers(0, 5))
def test_height_bounds_under_threshold(s, k):
    D = dp_cubic(s, k).values
    h = height_profile(s).heights
    for i in range(len(s) + 1):
        for j in range(i, len(s) + 1):
            if D[i, j] <= k:
                assert h[i:j + 1].min() >= max(h[i], h[j]) - 2 * k


def test_minplus_naive_examples():
    assert minplus_naive([[0]], [[0]]).tolist() == [[0]]
    assert minplus_naive([[0], [1]], [[0, 1]]).tolist() == [[0, 1], [1, 2]]
    out = minplus_naive([[INF, 0]], [[1], [INF]])
    assert out.tolist() == [[INF]]
    rng = np.random.default_rng(0)
    A = rng.integers(-9, 9, (5, 3))
    B = rng.integers(-9, 9, (3, 5))
    want = [[min(A[i, l] + B[l, j] for l in range(3)) for j in range(5)] for i in range(5)]
    assert minplus_naive(A, B).tolist() == want
    assert minplus_naive(np.array([[0.0, np.inf]]), np.array([[1.0], [0.0]])).tolist() == [[1]]


def test_batch_cross_check():
    rows = all_sequences(6, 2)
    assert rows.shape == (4 ** 6, 6)
    ex, dp = cross_check_rows(rows)
    assert np.array_equal(ex, dp)
