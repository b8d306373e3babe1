"""The O(n^2 k) DP: the cubic recursion with split points restricted to valley neighbours."""
from __future__ import annotations

import numpy as np
from numba import njit

from .core import ParenSeq, height_profile, midpoint_set, pair_cost_code
from .oracle import CostTable


@njit(cache=True)
def _dp_restricted_codes(codes, mids, cap):
    n = codes.size
    D = np.zeros((n + 1, n + 1), np.int64)
    nm = mids.size
    # first[i]: index into mids of the first midpoint strictly greater than i
    first = np.searchsorted(mids, np.arange(n + 1), side="right")
    for i in range(n - 1, -1, -1):
        D[i, i + 1] = min(1, cap)
        for j in range(i + 2, n + 1):
            best = pair_cost_code(codes[i], codes[j - 1]) + D[i + 1, j - 1]
            # the four fixed neighbours; duplicates are harmless for a minimum
            for m in (i + 1, i + 2, j - 2, j - 1):
                if i < m < j:
                    v = D[i, m] + D[m, j]
                    if v < best:
                        best = v
            q = first[i]
            while q < nm and mids[q] < j:
                m = mids[q]
                v = D[i, m] + D[m, j]
                if v < best:
                    best = v
                q += 1
            D[i, j] = min(best, cap)
    return D


def dp_restricted(s: ParenSeq, k: int) -> CostTable:
    """Capped table using only splits in ``(i..j)`` that are near a valley or near an end."""
    if k < 0:
        raise ValueError("k must be non-negative")
    mids = midpoint_set(height_profile(s))
    codes = np.ascontiguousarray(s.codes, dtype=np.int64)
    return CostTable(len(s), k + 1, _dp_restricted_codes(codes, mids, k + 1))


def split_candidates(i: int, j: int, mids: np.ndarray) -> np.ndarray:
    """Sorted split points the restricted recursion considers for cell ``(i, j)``."""
    mids = np.asarray(mids, dtype=np.int64)
    cand = np.concatenate([mids, [i + 1, i + 2, j - 2, j - 1]])
    cand = cand[(cand > i) & (cand < j)]
    return np.unique(cand)
