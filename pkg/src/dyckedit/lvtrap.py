"""Processing one tall trapezoid with Landau-Vishkin style diagonal frontiers.

For a tall trapezoid ``(a, b, c, d)`` the costs near its top edge determine the
costs near its bottom edge. Along diagonal ``delta`` (cells with
``i + j = b + c + delta``) the cost is monotone, so for each budget ``v`` it is
enough to track the furthest ``j`` reachable, ``L_v[delta]``. Each frontier is
seeded from five neighbours at budget ``v - 1`` and then slid outward over a
run of matched pairs in one LCP query.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .geometry import Trapezoid
from .lcp import LcpIndex, lcp_query

NEG = np.int64(-(1 << 62))


@dataclass(frozen=True)
class Band:
    """Capped costs for every pair ``i <= j`` of a small position set."""

    positions: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        m = len(self.positions)
        if self.values.shape != (m, m):
            raise ValueError(f"band values must be {m}x{m}, got {self.values.shape}")

    def local(self, pos: int) -> int:
        r = int(np.searchsorted(self.positions, pos))
        if r == len(self.positions) or self.positions[r] != pos:
            raise KeyError(f"position {pos} not in band")
        return r

    def get(self, i: int, j: int) -> int:
        return int(self.values[self.local(i), self.local(j)])

    @classmethod
    def from_table(cls, positions: np.ndarray, table: np.ndarray) -> "Band":
        """Slice a full ``(n+1) x (n+1)`` cost table down to ``positions``."""
        pos = np.asarray(positions, dtype=np.int64)
        return cls(pos, np.ascontiguousarray(table[np.ix_(pos, pos)]))


@dataclass(frozen=True)
class DiagonalTable:
    """``values[v, delta + 2k] = L_v[delta]``, with :data:`NEG` for minus infinity."""

    k: int
    b: int
    c: int
    values: np.ndarray
    ops: int = 0

    def frontier(self, v: int, delta: int) -> int:
        if not (0 <= v <= self.k and -2 * self.k <= delta <= 2 * self.k):
            return int(NEG)
        return int(self.values[v, delta + 2 * self.k])

    def reaches(self, i: int, j: int, v: int) -> bool:
        """Whether the table certifies ``D[i, j] <= v``."""
        return self.frontier(v, i + j - self.b - self.c) >= j


@njit(cache=True)
def _diagonal_kernel(a, b, c, d, k, seeds, rank, table, tlen, n):
    width = 4 * k + 1
    L = np.full((k + 1, width), NEG, np.int64)
    ops = 0
    for v in range(k + 1):
        for delta in range(-2 * v, 2 * v + 1):
            x = delta + 2 * k
            dplus = delta if delta > 0 else 0
            dminus = delta if delta < 0 else 0
            best = NEG
            if v > 0:
                # (offset, gain): j' - 2, j' - 1 from the left neighbours, the
                # diagonal itself one step in, and i' + 1, i' + 2 from the right
                for off in range(-2, 3):
                    y = x + off
                    if 0 <= y < width and L[v - 1, y] != NEG:
                        if off == -2:
                            cand = L[v - 1, y] + 2
                        elif off == -1 or off == 0:
                            cand = L[v - 1, y] + 1
                        else:
                            cand = L[v - 1, y]
                        if cand > best:
                            best = cand
                if best != NEG:
                    hi = d + dminus
                    if best > hi:
                        best = hi
            if seeds[v, x] > best:
                best = seeds[v, x]
            if best != NEG:
                iend = b + c + delta - best
                cap = iend - a
                if d - best < cap:
                    cap = d - best
                if cap > 0:
                    ext = lcp_query(rank, table, tlen, 2 * n - iend, best)
                    best += ext if ext < cap else cap
            L[v, x] = best
            ops += 1
    return L, ops


def _check_band(t: Trapezoid, k: int, band: Band) -> None:
    want = t.top_band(k)
    if not np.array_equal(band.positions, want):
        raise ValueError(f"input band for ({t.a},{t.b},{t.c},{t.d}) must cover "
                         f"[b-2k..b] ∪ [c..c+2k] = {want.tolist()}")


def _seed_frontiers(t: Trapezoid, k: int, band: Band) -> np.ndarray:
    """``seeds[v, delta + 2k]``: largest ``j`` of an input cell on diagonal ``delta`` with cost ``<= v``.

    The corner cell of each diagonal is not always enough: a cell just outside
    the input square can owe its cost to a neighbour two steps inside it.
    """
    pos = band.positions
    rows = np.flatnonzero(pos <= t.b)
    cols = np.flatnonzero(pos >= t.c)
    ii, jj = np.meshgrid(pos[rows], pos[cols], indexing="ij")
    vals = band.values[np.ix_(rows, cols)]
    delta = ii + jj - t.b - t.c
    ok = (ii <= jj) & (np.abs(delta) <= 2 * k) & (vals <= k)
    seeds = np.full((k + 1, 4 * k + 1), NEG, np.int64)
    x, j, cost = delta[ok] + 2 * k, jj[ok], vals[ok]
    for v in range(k + 1):
        sel = cost <= v
        np.maximum.at(seeds[v], x[sel], j[sel])
    return seeds


def diagonal_tables(t: Trapezoid, k: int, band: Band, idx: LcpIndex) -> DiagonalTable:
    """The frontiers ``L_v[delta]`` for ``v <= k``, ``|delta| <= 2k``."""
    if not t.is_tall(k):
        raise ValueError(f"trapezoid of height {t.height} is not tall for k={k}")
    _check_band(t, k, band)
    L, ops = _diagonal_kernel(t.a, t.b, t.c, t.d, k, _seed_frontiers(t, k, band),
                              idx.rank, idx.table, idx.text.size, idx.n)
    return DiagonalTable(k, t.b, t.c, L, int(ops))


def process_trapezoid(t: Trapezoid, k: int, band: Band, idx: LcpIndex) -> Band:
    """Costs over ``[a..a+2k] ∪ [d-2k..d]`` from costs over ``[b-2k..b] ∪ [c..c+2k]``."""
    table = diagonal_tables(t, k, band, idx)
    pos = t.bottom_band(k)
    cap = k + 1
    m = len(pos)
    out = np.full((m, m), cap, dtype=np.int64)
    left = pos <= t.a + 2 * k
    right = pos >= t.d - 2 * k
    L = table.values
    for p in range(m):
        i = int(pos[p])
        for q in range(p, m):
            j = int(pos[q])
            if (left[p] and left[q]) or (right[p] and right[q]):
                out[p, q] = min((j - i + 1) // 2, cap)
            elif t.b - 2 * k <= i <= t.b and t.c <= j <= t.c + 2 * k:
                out[p, q] = band.get(i, j)
            else:
                delta = i + j - t.b - t.c
                if -2 * k <= delta <= 2 * k:
                    hit = np.flatnonzero(L[:, delta + 2 * k] >= j)
                    if hit.size:
                        out[p, q] = hit[0]
    return Band(pos, out)
