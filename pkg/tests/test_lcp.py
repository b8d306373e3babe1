import numpy as np
from hypothesis import given, strategies as st

from dyckedit.core import ParenSeq, reverse_complement
from dyckedit.encoding import parse_ascii
from dyckedit.lcp import build_lcp_index, suffix_array


def naive_lcp(x, y) -> int:
    n = 0
    while n < len(x) and n < len(y) and x[n] == y[n]:
        n += 1
    return n


@given(st.lists(st.integers(0, 3), max_size=60))
def test_suffix_array_sorted(text):
    t = np.asarray(text, dtype=np.int64)
    want = sorted(range(len(t)), key=lambda i: t[i:].tolist())
    assert suffix_array(t).tolist() == want


def test_examples():
    idx = build_lcp_index(parse_ascii("()()"))
    # the text is S + rc(S) = "()()()()"
    assert idx.query(0, 2) == 6 and idx.query(0, 2, 2) == 2
    s = parse_ascii("(()")
    idx = build_lcp_index(s)
    # rc(S[0..1)) = ")" against S[2..3) = ")"
    assert idx.extend(1, 0, 2, 3) == 1
    assert idx.text.tolist() == s.codes.tolist() + reverse_complement(s).codes.tolist()


def test_random_queries_match_naive():
    rng = np.random.default_rng(2)
    for _ in range(10):
        n = int(rng.integers(1, 201))
        s = ParenSeq(rng.integers(0, 4, n), 2)
        idx = build_lcp_index(s)
        T = idx.text.tolist()
        for _ in range(50):
            p, q = (int(x) for x in rng.integers(0, 2 * n, 2))
            assert idx.query(p, q) == naive_lcp(T[p:], T[q:])
            m = int(rng.integers(0, 5))
            assert idx.query(p, q, m) == min(m, naive_lcp(T[p:], T[q:]))
        for _ in range(50):
            ls, le = sorted(int(x) for x in rng.integers(0, n + 1, 2))
            rs, re = sorted(int(x) for x in rng.integers(0, n + 1, 2))
            left = reverse_complement(s[ls:le]).codes.tolist()
            right = s.codes[rs:re].tolist()
            assert idx.extend(le, ls, rs, re) == naive_lcp(left, right)
