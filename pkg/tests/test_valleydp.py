import numpy as np
from hypothesis import given, strategies as st

from dyckedit.core import ParenSeq, height_profile, midpoint_set, reduce_valleys
from dyckedit.encoding import parse_ascii
from dyckedit.generate import planted_instance
from dyckedit.oracle import dp_cubic
from dyckedit.valleydp import dp_restricted, split_candidates


def test_examples():
    assert dp_restricted(parse_ascii("()"), 1).distance == 0
    s = parse_ascii("()()")
    mids = midpoint_set(height_profile(s))
    assert mids.tolist() == [1, 2, 3]
    assert dp_restricted(s, 2).distance == 0
    assert 2 in split_candidates(0, 4, mids)


def test_candidate_set():
    mids = np.array([5, 9, 10, 11])
    c = split_candidates(3, 12, mids)
    assert c.tolist() == sorted({4, 5, 9, 10, 11})
    assert len(split_candidates(0, 100, mids)) <= len(mids) + 4
    assert split_candidates(4, 5, mids).size == 0


@given(st.lists(st.integers(0, 5), max_size=30).map(lambda c: ParenSeq(c, 3)), st.integers(0, 8))
def test_equals_cubic_unreduced(s, k):
    assert np.array_equal(dp_restricted(s, k).upper(), dp_cubic(s, k).upper())


def test_equals_cubic_on_perturbed_dyck():
    rng = np.random.default_rng(11)
    for _ in range(200):
        k = int(rng.integers(0, 9))
        s = planted_instance(int(rng.integers(0, 61)), int(rng.integers(1, 4)),
                             int(rng.integers(0, 6)), rng).seq
        r = reduce_valleys(s, k).seq
        assert np.array_equal(dp_restricted(r, k).upper(), dp_cubic(r, k).upper())
