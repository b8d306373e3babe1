"""Instance builders shared by the test modules."""
from __future__ import annotations

import numpy as np

from dyckedit.core import ParenSeq, pair_cost_code
from dyckedit.oracle import dp_cubic

ACCEPTANCE: list[str] = []
"""One pass/fail line per acceptance criterion, echoed in the pytest summary."""


def random_dyck_codes(m: int, t: int, rng: np.random.Generator) -> list[int]:
    out: list[int] = []
    stack: list[int] = []
    while len(out) < 2 * m:
        if stack and (len(stack) + len(out) >= 2 * m or rng.random() < 0.5):
            out.append(stack.pop() ^ 1)
        else:
            c = 2 * int(rng.integers(t))
            stack.append(c)
            out.append(c)
    return out


def tall_trapezoid_seq(rng: np.random.Generator, k: int, t: int, max_pad: int = 8) -> ParenSeq:
    """A long run of openings, a perturbed Dyck core, and a perturbed mirror run of closings."""
    h = 2 * k + int(rng.integers(0, 25))
    left = [2 * int(rng.integers(t)) for _ in range(h)]
    right = [c ^ 1 for c in left[::-1]]
    for _ in range(int(rng.integers(0, k + 2))):
        right[int(rng.integers(h))] = 2 * int(rng.integers(t)) + 1
    inner = random_dyck_codes(int(rng.integers(1, 15)), t, rng)
    for _ in range(int(rng.integers(0, k + 2))):
        inner[int(rng.integers(len(inner)))] = int(rng.integers(2 * t))
    pre = random_dyck_codes(int(rng.integers(0, max_pad)), t, rng)
    post = random_dyck_codes(int(rng.integers(0, max_pad)), t, rng)
    return ParenSeq(pre + left + inner + right + post, t)


def column_bd(rows: int, cols: int, rng: np.random.Generator, spread: int = 30) -> np.ndarray:
    A = np.empty((rows, cols), np.int64)
    A[0] = rng.integers(-spread, spread + 1, size=cols)
    if rows > 1:
        A[1:] = rng.integers(-1, 2, size=(rows - 1, cols))
    return np.cumsum(A, axis=0)


def bd_pair(rng: np.random.Generator, n: int, s: int, m: int, spread: int = 30):
    """Column-BD ``n x s`` and row-BD ``s x m``."""
    return column_bd(n, s, rng, spread), np.ascontiguousarray(column_bd(m, s, rng, spread).T)


def harvested_pair(rng: np.random.Generator, max_side: int = 128, max_inner: int = 11):
    """Operands cut from a real cost table: rows left of the inner points, columns right of them."""
    n = int(rng.integers(12, 2 * max_side + 24))
    s = ParenSeq(rng.integers(0, 4, size=n), 2)
    D = dp_cubic(s, n).values
    lo = int(rng.integers(1, n // 3))
    hi = int(rng.integers(2 * n // 3, n))
    inner = np.sort(rng.choice(np.arange(lo, hi + 1), size=min(max_inner, hi - lo + 1), replace=False))
    rows = np.arange(max(0, inner[0] - max_side), inner[0] + 1)
    cols = np.arange(inner[-1], min(n, inner[-1] + max_side - 1) + 1)
    A = np.ascontiguousarray(D[np.ix_(rows, inner)])
    B = np.ascontiguousarray(D[np.ix_(inner, cols)])
    return A, B


def dp_callback(codes):
    """Restricted recursion written cell by cell, as a plain Python callback."""
    def fn(A, i, j, best):
        if j - i <= 1:
            return j - i
        cands = [best, pair_cost_code(codes[i], codes[j - 1]) + A[i + 1, j - 1],
                 A[i, i + 1] + A[i + 1, j], A[i, j - 1] + A[j - 1, j]]
        if i + 2 < j:
            cands += [A[i, i + 2] + A[i + 2, j], A[i, j - 2] + A[j - 2, j]]
        return int(min(cands))
    return fn
