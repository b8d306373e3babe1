"""Reference engines: exhaustive edit-script search, the cubic DP and naive min-plus.

Everything else in the package is checked against these.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit, types
from numba.typed import Dict

from .core import ParenSeq, pair_cost_code

INF = 1 << 40
"""Min-plus infinity. Any value ``>= INF`` is treated as infinite."""

EXHAUSTIVE_MAX_LEN = 14


@dataclass(frozen=True)
class CostTable:
    """``values[i, j] = min(ed_D(S[i..j)), cap)`` for ``0 <= i <= j <= n``.

    Entries below the diagonal carry no meaning.
    """

    n: int
    cap: int
    values: np.ndarray

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not 0 <= i <= j <= self.n:
            raise IndexError(f"({i}, {j}) outside 0 <= i <= j <= {self.n}")
        return int(self.values[i, j])

    @property
    def distance(self) -> int:
        return int(self.values[0, self.n])

    def upper(self) -> np.ndarray:
        """Values with the unused lower triangle masked to -1."""
        out = self.values.copy()
        out[np.tril_indices(self.n + 1, -1)] = -1
        return out


@njit(cache=True)
def _exhaustive_codes(codes, bound):
    n = codes.size
    # relabel types by first occurrence; one spare type stands in for every unused one
    relabel = np.full(2 * n + 2 if n else 2, -1, np.int64)
    seen = 0
    local = np.empty(n, np.int64)
    for p in range(n):
        ty = codes[p] >> 1
        if ty >= relabel.size:
            grown = np.full(2 * ty + 2, -1, np.int64)
            grown[: relabel.size] = relabel
            relabel = grown
        if relabel[ty] < 0:
            relabel[ty] = seen
            seen += 1
        local[p] = relabel[ty]
    t_eff = seen + 1
    # net height of each suffix; every edit moves the final depth by at most 2
    rest = np.zeros(n + 1, np.int64)
    for p in range(n - 1, -1, -1):
        rest[p] = rest[p + 1] + (1 if codes[p] & 1 == 0 else -1)

    best = bound + 1
    memo = Dict.empty(key_type=types.int64, value_type=types.int64)
    f_pos = np.zeros(n + 2, np.int64)
    f_depth = np.zeros(n + 2, np.int64)
    f_num = np.zeros(n + 2, np.int64)
    f_cost = np.zeros(n + 2, np.int64)
    f_opt = np.zeros(n + 2, np.int64)
    n_opts = 3 + t_eff
    sp = 1
    f_opt[0] = -1
    while sp > 0:
        f = sp - 1
        pos = f_pos[f]
        depth = f_depth[f]
        num = f_num[f]
        cost = f_cost[f]
        if f_opt[f] == -1:
            gap = depth + rest[pos]
            if gap < 0:
                gap = -gap
            if cost + (gap + 1) // 2 >= best:
                sp -= 1
                continue
            if pos == n:
                if depth == 0:
                    best = cost
                sp -= 1
                continue
            key = (((pos << 4) | depth) << 40) | num
            prev = memo.get(key, best + 1)
            if cost >= prev:
                sp -= 1
                continue
            memo[key] = cost
            f_opt[f] = 0
        opt = f_opt[f]
        if opt >= n_opts:
            sp -= 1
            continue
        f_opt[f] = opt + 1

        opening = codes[pos] & 1 == 0
        ty = local[pos]
        top = num % t_eff if depth > 0 else -1
        # option -> (push type | -1 for pop | -2 for no stack change, extra cost)
        action = -3
        extra = 1
        if opt == 0:
            extra = 0
            if opening:
                action = ty
            elif top == ty:
                action = -1
        elif opt == 1:
            action = -2
        elif opt < 2 + t_eff:
            u = opt - 2
            if not (opening and u == ty):
                action = u
        else:
            if depth > 0 and not ((not opening) and ty == top):
                action = -1
        if action == -3:
            continue
        if action >= 0:
            nd = depth + 1
            nn = num * t_eff + action
        elif action == -1:
            nd = depth - 1
            nn = num // t_eff
        else:
            nd = depth
            nn = num
        if nd > n - pos - 1:
            continue
        f_pos[sp] = pos + 1
        f_depth[sp] = nd
        f_num[sp] = nn
        f_cost[sp] = cost + extra
        f_opt[sp] = -1
        sp += 1
    return best


def exhaustive_distance(s: ParenSeq, bound: int | None = None) -> int:
    """``min(ed_D(s), bound + 1)`` by branch-and-bound over edit scripts.

    The search scans left to right keeping the stack of still-open types, and
    at each symbol tries keeping it, deleting it or substituting it. A state
    (position, stack) reached again at no lower cost is pruned.
    """
    if len(s) > EXHAUSTIVE_MAX_LEN:
        raise ValueError(f"exhaustive search limited to length <= {EXHAUSTIVE_MAX_LEN}, got {len(s)}")
    if bound is None:
        bound = len(s)
    if bound < 0:
        raise ValueError("bound must be non-negative")
    return int(_exhaustive_codes(np.ascontiguousarray(s.codes, dtype=np.int64), bound))


@njit(cache=True)
def _dp_cubic_codes(codes, cap):
    n = codes.size
    D = np.zeros((n + 1, n + 1), np.int64)
    for i in range(n):
        D[i, i + 1] = min(1, cap)
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            j = i + length
            best = pair_cost_code(codes[i], codes[j - 1]) + D[i + 1, j - 1]
            for m in range(i + 1, j):
                v = D[i, m] + D[m, j]
                if v < best:
                    best = v
            D[i, j] = min(best, cap)
    return D


def dp_cubic(s: ParenSeq, k: int) -> CostTable:
    if k < 0:
        raise ValueError("k must be non-negative")
    codes = np.ascontiguousarray(s.codes, dtype=np.int64)
    return CostTable(len(s), k + 1, _dp_cubic_codes(codes, k + 1))


def as_minplus(x) -> np.ndarray:
    """Convert to an int64 matrix, mapping float infinities to :data:`INF`."""
    arr = np.asarray(x)
    if arr.dtype.kind == "f":
        out = np.where(np.isinf(arr) & (arr > 0), INF, arr)
        if np.isnan(out).any() or (np.isinf(out)).any():
            raise ValueError("only +inf is allowed as a non-finite entry")
        return np.minimum(out.astype(np.int64), INF)
    return np.minimum(arr.astype(np.int64), INF)


def minplus_naive(A, B) -> np.ndarray:
    A = as_minplus(A)
    B = as_minplus(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    C = np.full((A.shape[0], B.shape[1]), INF, dtype=np.int64)
    a_inf = A >= INF
    b_inf = B >= INF
    has_inf = a_inf.any() or b_inf.any()
    for l in range(A.shape[1]):
        cand = A[:, l, None] + B[None, l, :]
        if has_inf:
            cand[a_inf[:, l, None] | b_inf[None, l, :]] = INF
        np.minimum(C, cand, out=C)
    return C


def all_sequences(n: int, t: int) -> np.ndarray:
    """Every code sequence of length ``n`` over ``t`` types, one per row."""
    base = 2 * t
    idx = np.arange(base**n, dtype=np.int64)
    out = np.empty((idx.size, n), dtype=np.int64)
    for p in range(n - 1, -1, -1):
        out[:, p] = idx % base
        idx //= base
    return out


@njit(cache=True)
def _cross_check_rows(rows, bound):
    m = rows.shape[0]
    n = rows.shape[1]
    exh = np.empty(m, np.int64)
    cub = np.empty(m, np.int64)
    for r in range(m):
        codes = rows[r].copy()
        exh[r] = _exhaustive_codes(codes, bound)
        cub[r] = _dp_cubic_codes(codes, bound + 1)[0, n]
    return exh, cub


def cross_check_rows(rows: np.ndarray, bound: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Exhaustive and cubic-DP distances for each row of a code matrix."""
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    if rows.ndim != 2 or rows.shape[1] > EXHAUSTIVE_MAX_LEN:
        raise ValueError("rows must be a 2-D array with at most 14 columns")
    if bound is None:
        bound = rows.shape[1]
    return _cross_check_rows(rows, bound)
