"""Longest-common-prefix queries over ``S`` followed by its reverse complement.

Suffix ranks come from prefix doubling, the LCP array from Kasai's scan, and
range minima from a sparse table, so each query is two lookups and a min.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import ParenSeq


def suffix_array(text: np.ndarray) -> np.ndarray:
    text = np.asarray(text, dtype=np.int64)
    n = text.size
    if n == 0:
        return np.zeros(0, np.int64)
    _, rank = np.unique(text, return_inverse=True)
    rank = rank.astype(np.int64)
    step = 1
    while True:
        second = np.full(n, -1, np.int64)
        if step < n:
            second[: n - step] = rank[step:]
        sa = np.lexsort((second, rank))
        r1, r2 = rank[sa], second[sa]
        fresh = np.empty(n, np.int64)
        fresh[0] = 0
        np.cumsum((r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1]), out=fresh[1:])
        rank = np.empty(n, np.int64)
        rank[sa] = fresh
        if fresh[-1] == n - 1 or step >= n:
            return sa.astype(np.int64)
        step *= 2


@njit(cache=True)
def _kasai(text, sa, rank):
    n = text.size
    lcp = np.zeros(n, np.int64)  # lcp[r] = lcp(sa[r-1], sa[r])
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        while i + h < n and j + h < n and text[i + h] == text[j + h]:
            h += 1
        lcp[r] = h
        if h > 0:
            h -= 1
    return lcp


def _sparse_table(values: np.ndarray) -> np.ndarray:
    n = values.size
    levels = max(1, int(n).bit_length())
    table = np.empty((levels, max(n, 1)), np.int64)
    if n:
        table[0] = values
    for lv in range(1, levels):
        span = 1 << (lv - 1)
        table[lv] = table[lv - 1]
        np.minimum(table[lv - 1][: n - span], table[lv - 1][span:], out=table[lv][: n - span])
    return table


@njit(cache=True)
def lcp_query(rank, table, length, p, q):
    """LCP of the suffixes starting at ``p`` and ``q`` of the indexed text."""
    if p == q:
        return length - p
    if p >= length or q >= length:
        return 0
    r1 = rank[p]
    r2 = rank[q]
    if r1 > r2:
        r1, r2 = r2, r1
    lo = r1 + 1
    span = r2 - lo + 1
    lv = 0
    while (2 << lv) <= span:
        lv += 1
    a = table[lv, lo]
    b = table[lv, r2 - (1 << lv) + 1]
    return a if a < b else b


@dataclass(frozen=True)
class LcpIndex:
    """Index over ``T = S · rc(S)`` of length ``2n``."""

    n: int
    text: np.ndarray
    sa: np.ndarray
    rank: np.ndarray
    table: np.ndarray

    def query(self, p: int, q: int, maxlen: int | None = None) -> int:
        v = int(lcp_query(self.rank, self.table, self.text.size, p, q))
        return v if maxlen is None else min(v, maxlen)

    def rc_pos(self, end: int) -> int:
        """Text position where ``rc(S[..end))`` starts, read right to left from ``end``."""
        return 2 * self.n - end

    def extend(self, left_end: int, left_start: int, right_start: int, right_end: int) -> int:
        """``lcp(rc(S[left_start..left_end)), S[right_start..right_end))``."""
        cap = min(left_end - left_start, right_end - right_start)
        if cap <= 0:
            return 0
        return self.query(self.rc_pos(left_end), right_start, cap)


def build_lcp_index(s: ParenSeq) -> LcpIndex:
    codes = np.ascontiguousarray(s.codes, dtype=np.int64)
    text = np.concatenate([codes, codes[::-1] ^ 1])
    sa = suffix_array(text)
    rank = np.empty(text.size, np.int64)
    rank[sa] = np.arange(text.size)
    lcp = _kasai(text, sa, rank) if text.size else np.zeros(0, np.int64)
    return LcpIndex(len(codes), text, sa, rank, _sparse_table(lcp))
