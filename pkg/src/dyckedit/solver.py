"""End-to-end solvers built on the decomposition tree.

``solve_k5`` walks the tree bottom-up: tall trapezoids go through the
diagonal-frontier routine, clusters through the restricted recursion over
their extended position set. ``solve_fast`` is the same walk with large
clusters filled by the Valiant-style recursion over a bounded-difference
min-plus kernel.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numba import njit

from .core import ParenSeq, pair_cost_code, reduce_valleys
from .geometry import DecompTree, build_decomposition, height_bound_violated
from .lcp import build_lcp_index
from .lvtrap import Band, process_trapezoid
from .valleydp import dp_restricted

VALIANT_MIN_CLUSTER = 64
"""Clusters with fewer extended positions are filled naively in ``solve_fast``."""


@dataclass
class SolveStats:
    clusters: int = 0
    trapezoids: int = 0
    extended_total: int = 0
    midpoints_total: int = 0
    valiant_clusters: int = 0
    kernel_calls: int = 0
    trapezoid_ops: int = 0
    triples_covered: int = 0
    extra: dict = field(default_factory=dict)


@njit(cache=True)
def _fill_cluster(E, codes, mloc, preset, A, cap):
    m = E.size
    nm = mloc.size
    for p in range(m - 1, -1, -1):
        start = np.searchsorted(mloc, p, side="right")
        for q in range(p, m):
            if preset[p, q]:
                continue
            i = E[p]
            j = E[q]
            if j - i <= 1:
                A[p, q] = min(j - i, cap)
                continue
            best = cap
            inner_l = p + 1 < m and E[p + 1] == i + 1
            inner_r = q >= 1 and E[q - 1] == j - 1
            if inner_l and inner_r:
                v = pair_cost_code(codes[i], codes[j - 1]) + A[p + 1, q - 1]
                if v < best:
                    best = v
            if inner_l and p + 1 < q:
                v = A[p, p + 1] + A[p + 1, q]
                if v < best:
                    best = v
            if p + 2 < q and E[p + 2] == i + 2:
                v = A[p, p + 2] + A[p + 2, q]
                if v < best:
                    best = v
            if inner_r and q - 1 > p:
                v = A[p, q - 1] + A[q - 1, q]
                if v < best:
                    best = v
            if q - 2 > p and E[q - 2] == j - 2:
                v = A[p, q - 2] + A[q - 2, q]
                if v < best:
                    best = v
            r = start
            while r < nm and mloc[r] < q:
                x = mloc[r]
                v = A[p, x] + A[x, q]
                if v < best:
                    best = v
                r += 1
            A[p, q] = best if best < cap else cap
    return A


@dataclass
class ClusterProblem:
    """A cluster's fill expressed over local indices into ``E(C)``."""

    extended: np.ndarray
    mloc: np.ndarray
    preset: np.ndarray
    table: np.ndarray
    cap: int


def cluster_problem(tree: DecompTree, ci: int, k: int, inputs: dict[int, Band]) -> ClusterProblem:
    c = tree.clusters[ci]
    E = c.extended
    m = len(E)
    cap = k + 1
    A = np.full((m, m), cap, dtype=np.int64)
    preset = np.zeros((m, m), dtype=bool)
    for q in c.child_trapezoids:
        if q not in inputs:
            raise ValueError(f"missing output band of child trapezoid {q} for cluster {c.id}")
        band = inputs[q]
        t = tree.trapezoids[q]
        if not np.array_equal(band.positions, t.bottom_band(k)):
            raise ValueError(f"band of child trapezoid {q} is misaligned")
        loc = np.searchsorted(E, band.positions)
        if np.any(loc >= m) or not np.array_equal(E[np.minimum(loc, m - 1)], band.positions):
            raise ValueError(f"band of child trapezoid {q} falls outside E(C)")
        A[np.ix_(loc, loc)] = np.minimum(band.values, cap)
        preset[np.ix_(loc, loc)] = True
    mloc = np.searchsorted(E, c.midpoints).astype(np.int64)
    return ClusterProblem(E, mloc, preset, A, cap)


def _cluster_output(tree: DecompTree, ci: int, k: int, A: np.ndarray) -> Band | int:
    c = tree.clusters[ci]
    E = c.extended
    if c.parent_trapezoid is None:
        return int(A[0, len(E) - 1])
    pos = tree.trapezoids[c.parent_trapezoid].top_band(k)
    loc = np.searchsorted(E, pos)
    return Band(pos, np.ascontiguousarray(A[np.ix_(loc, loc)]))


def process_cluster(tree: DecompTree, ci: int, s: ParenSeq, k: int, inputs: dict[int, Band],
                    mode: str = "naive", kernel: Callable | None = None,
                    stats: SolveStats | None = None, debug: bool = False) -> Band | int:
    """Fill ``min(D[i,j], k+1)`` over ``E(C)`` and return the parent band, or ``D[0,n]`` at the root."""
    prob = cluster_problem(tree, ci, k, inputs)
    codes = np.ascontiguousarray(s.codes, dtype=np.int64)
    if mode == "naive":
        A = _fill_cluster(prob.extended, codes, prob.mloc, prob.preset, prob.table, prob.cap)
    elif mode == "valiant":
        from .valiant import fill_cluster_valiant
        A = fill_cluster_valiant(prob, codes, kernel, stats, debug)
    else:
        raise ValueError(f"unknown cluster mode {mode!r}")
    if stats is not None:
        stats.clusters += 1
        stats.extended_total += len(prob.extended)
        stats.midpoints_total += len(prob.mloc)
    return _cluster_output(tree, ci, k, A)


def _run_tree(s: ParenSeq, k: int, choose_mode: Callable[[int, int], str],
              kernel: Callable | None, stats: SolveStats | None, debug: bool = False) -> int:
    red = reduce_valleys(s, k)
    if red.rejected or height_bound_violated(red.seq, k):
        return k + 1
    r = red.seq
    if len(r) == 0:
        return 0
    idx = build_lcp_index(r)
    tree = build_decomposition(r, k)
    bottom: dict[int, Band] = {}
    top: dict[int, Band] = {}
    answer = k + 1
    for kind, i in tree.postorder():
        if kind == "trapezoid":
            bottom[i] = process_trapezoid(tree.trapezoids[i], k, top.pop(i), idx)
            if stats is not None:
                stats.trapezoids += 1
        else:
            c = tree.clusters[i]
            mode = choose_mode(len(c.extended), len(c.midpoints))
            inputs = {q: bottom.pop(q) for q in c.child_trapezoids}
            out = process_cluster(tree, i, r, k, inputs, mode, kernel, stats, debug)
            if c.parent_trapezoid is None:
                answer = int(out)
            else:
                top[c.parent_trapezoid] = out
    return min(answer, k + 1)


def solve_k5(s: ParenSeq, k: int, stats: SolveStats | None = None) -> int:
    """``min(ed_D(s), k + 1)`` through trapezoids and naive cluster fills."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return _run_tree(s, k, lambda e, m: "naive", None, stats)


def solve_fast(s: ParenSeq, k: int, kernel_params=None, stats: SolveStats | None = None,
               min_cluster: int = VALIANT_MIN_CLUSTER, debug: bool = False) -> int:
    """As :func:`solve_k5`, with clusters of ``|E(C)| >= min_cluster`` filled by the Valiant recursion.

    ``debug`` checks every kernel operand for bounded differences and the
    pending minima at each ``complete``, raising ``InvariantViolation``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    from .valiant import bd_kernel
    kernel = bd_kernel(kernel_params)

    def choose(e: int, m: int) -> str:
        return "valiant" if e >= min_cluster else "naive"

    out = _run_tree(s, k, choose, kernel, stats, debug)
    if stats is not None:
        stats.triples_covered += kernel.stats.triples_covered
        stats.extra["bd_calls"] = stats.extra.get("bd_calls", 0) + kernel.stats.calls
        stats.extra["naive_calls"] = stats.extra.get("naive_calls", 0) + kernel.naive_calls
    return out


def solve_quadratic(s: ParenSeq, k: int) -> int:
    if k < 0:
        raise ValueError("k must be non-negative")
    red = reduce_valleys(s, k)
    if red.rejected:
        return k + 1
    return dp_restricted(red.seq, k).distance
