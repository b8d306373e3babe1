"""Trapezoids, clusters and the decomposition tree linking them.

A trapezoid ``(a, b, c, d)`` is an opening run ``S[a..b)`` and a closing run
``S[c..d)`` at mirrored heights with nothing in between dipping below ``H(b)``.
Cutting every tall maximal trapezoid out of the position cycle leaves
clusters; clusters and trapezoids then alternate along a rooted tree.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .core import ParenSeq, heights_of, midpoint_set, height_profile

NO_MATCH = np.iinfo(np.int64).max


@dataclass(frozen=True)
class Trapezoid:
    a: int
    b: int
    c: int
    d: int

    @property
    def height(self) -> int:
        return self.b - self.a

    def is_tall(self, k: int) -> bool:
        return self.height >= 2 * k

    def legs(self) -> np.ndarray:
        return np.concatenate([np.arange(self.a, self.b), np.arange(self.c, self.d)])

    def top_band(self, k: int) -> np.ndarray:
        """``[b-2k..b] ∪ [c..c+2k]``: the pairs handed in from the child cluster."""
        return np.union1d(np.arange(self.b - 2 * k, self.b + 1), np.arange(self.c, self.c + 2 * k + 1))

    def bottom_band(self, k: int) -> np.ndarray:
        """``[a..a+2k] ∪ [d-2k..d]``: the pairs handed up to the parent cluster."""
        return np.union1d(np.arange(self.a, self.a + 2 * k + 1), np.arange(self.d - 2 * k, self.d + 1))


@dataclass
class Cluster:
    id: int
    positions: np.ndarray
    child_trapezoids: list[int] = field(default_factory=list)
    parent_trapezoid: int | None = None
    extended: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64))
    midpoints: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64))

    def rank(self, pos: int) -> int:
        """Local index of a global position inside ``extended``."""
        r = int(np.searchsorted(self.extended, pos))
        if r == len(self.extended) or self.extended[r] != pos:
            raise KeyError(f"position {pos} not in E(C) of cluster {self.id}")
        return r


@dataclass
class DecompTree:
    n: int
    k: int
    clusters: list[Cluster]
    trapezoids: list[Trapezoid]
    trap_parent: list[int]
    trap_child: list[int]
    root: int

    def postorder(self) -> list[tuple[str, int]]:
        """Nodes as ``("cluster", idx)`` / ``("trapezoid", idx)``, children first."""
        out: list[tuple[str, int]] = []
        stack: list[tuple[str, int, bool]] = [("cluster", self.root, False)]
        while stack:
            kind, idx, expanded = stack.pop()
            if expanded:
                out.append((kind, idx))
                continue
            stack.append((kind, idx, True))
            if kind == "cluster":
                for t in reversed(self.clusters[idx].child_trapezoids):
                    stack.append(("trapezoid", t, False))
            else:
                stack.append(("cluster", self.trap_child[idx], False))
        return out

    def dump(self) -> str:
        lines: list[str] = []

        def walk(ci: int, depth: int) -> None:
            c = self.clusters[ci]
            lines.append(f"{'  ' * depth}cluster {c.id}: |C|={len(c.positions)} "
                         f"|E|={len(c.extended)} |M|={len(c.midpoints)}")
            for t in c.child_trapezoids:
                tr = self.trapezoids[t]
                lines.append(f"{'  ' * (depth + 1)}trapezoid ({tr.a},{tr.b},{tr.c},{tr.d}) h={tr.height}")
                walk(self.trap_child[t], depth + 2)

        walk(self.root, 0)
        return "\n".join(lines)


@njit(cache=True)
def _matching_heights(codes):
    n = codes.size
    B = np.full(n, NO_MATCH, np.int64)
    stack = np.empty(n, np.int64)
    top = 0
    for q in range(n):
        if codes[q] & 1 == 0:
            stack[top] = q
            top += 1
        elif top > 0:
            top -= 1
            B[stack[top]] = q + 1
    return B


def compute_matching_heights(s: ParenSeq) -> np.ndarray:
    """``B[p]``: first ``r > p`` with ``H(r) = H(p)`` for opening ``p``; ``NO_MATCH`` otherwise."""
    return _matching_heights(np.ascontiguousarray(s.codes, dtype=np.int64))


def _trapezoid_arrays(codes: np.ndarray) -> np.ndarray:
    B = _matching_heights(codes)
    p = np.flatnonzero(B != NO_MATCH)
    if p.size == 0:
        return np.zeros((0, 4), np.int64)
    key = p + B[p]
    # a segment continues while positions stay consecutive and i + B(i) stays fixed
    brk = np.ones(p.size, dtype=bool)
    brk[1:] = (np.diff(p) != 1) | (np.diff(key) != 0)
    starts = np.flatnonzero(brk)
    ends = np.append(starts[1:], p.size) - 1
    a = p[starts]
    b = p[ends] + 1
    d = B[a]
    c = B[p[ends]] - 1
    return np.stack([a, b, c, d], axis=1)


def maximal_trapezoids(s: ParenSeq) -> list[Trapezoid]:
    arr = _trapezoid_arrays(np.ascontiguousarray(s.codes, dtype=np.int64))
    return [Trapezoid(*map(int, row)) for row in arr]


def _extended_set(lo: int, hi: int, gaps: list[tuple[int, int]]) -> np.ndarray:
    """``[lo..hi]`` minus the open intervals in ``gaps``."""
    parts = []
    cur = lo
    for g0, g1 in sorted(gaps):
        if g0 >= cur:
            parts.append(np.arange(cur, g0 + 1))
        cur = max(cur, g0 + 1, g1)
    if cur <= hi:
        parts.append(np.arange(cur, hi + 1))
    return np.concatenate(parts).astype(np.int64) if parts else np.zeros(0, np.int64)


def build_decomposition(s: ParenSeq, k: int) -> DecompTree:
    if k < 0:
        raise ValueError("k must be non-negative")
    n = len(s)
    codes = np.ascontiguousarray(s.codes, dtype=np.int64)
    arr = _trapezoid_arrays(codes)
    tall = arr[(arr[:, 1] - arr[:, 0]) >= 2 * k] if arr.size else arr
    traps = [Trapezoid(*map(int, row)) for row in tall]

    # cycle on [0..n] with leg edges removed and (a, d), (b, c) added
    keep = np.ones(n + 1, dtype=bool)
    alive = np.ones(n + 1, dtype=bool)
    for t in traps:
        keep[t.a:t.b] = False
        keep[t.c:t.d] = False
        alive[t.a + 1:t.b] = False
        alive[t.c + 1:t.d] = False
    src = np.flatnonzero(keep[:n])
    dst = src + 1
    if n > 0:
        src = np.append(src, n)
        dst = np.append(dst, 0)
    if traps:
        src = np.concatenate([src, tall[:, 0], tall[:, 1]])
        dst = np.concatenate([dst, tall[:, 3], tall[:, 2]])
    graph = coo_matrix((np.ones(src.size, np.int8), (src, dst)), shape=(n + 1, n + 1))
    _, labels = connected_components(graph, directed=False)

    verts = np.flatnonzero(alive)
    vl = labels[verts]
    order = np.argsort(vl, kind="stable")
    verts, vl = verts[order], vl[order]
    cuts = np.flatnonzero(np.diff(vl)) + 1
    groups = np.split(verts, cuts)
    groups.sort(key=lambda g: int(g[0]))
    clusters = [Cluster(int(g[0]), g.astype(np.int64)) for g in groups]
    label_to_cluster = {int(labels[c.id]): i for i, c in enumerate(clusters)}

    trap_parent: list[int] = []
    trap_child: list[int] = []
    for ti, t in enumerate(traps):
        par = label_to_cluster[int(labels[t.a])]
        ch = label_to_cluster[int(labels[t.b])]
        trap_parent.append(par)
        trap_child.append(ch)
        clusters[par].child_trapezoids.append(ti)
        clusters[ch].parent_trapezoid = ti
    root = label_to_cluster[int(labels[0])]

    mids = midpoint_set(height_profile(s))
    for c in clusters:
        gaps = [(traps[q].a + 2 * k, traps[q].d - 2 * k) for q in c.child_trapezoids]
        if c.parent_trapezoid is None:
            c.extended = _extended_set(0, n, gaps)
        else:
            t = traps[c.parent_trapezoid]
            c.extended = _extended_set(t.b - 2 * k, t.c + 2 * k, gaps)
        c.midpoints = np.intersect1d(mids, c.extended)
    return DecompTree(n, k, clusters, traps, trap_parent, trap_child, root)


def height_bound_violated(s: ParenSeq, k: int) -> bool:
    """True when the whole-string height profile already forces distance above ``k``."""
    h = heights_of(s.codes)
    end = int(h[-1])
    return abs(end) > 2 * k or int(h.min()) < max(0, end) - 2 * k
