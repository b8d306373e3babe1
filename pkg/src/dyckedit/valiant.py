"""Valiant-style recursion: weight-balanced intervals with compute / complete / update.

Fills a table ``A[0..n, 0..n]`` whose entries satisfy

* (1) ``A[i, j]`` follows from entries ``A[i', j']`` with ``i <= i' <= j' <= j``
  and from ``min(A[i, m] + A[m, j])`` over distinguished ``m`` strictly inside;
* (2) along every distinguished ``m`` consecutive ``A[i, m]`` and ``A[m, j]``
  differ by at most one,

so every cross-interval contribution is a single column-BD by row-BD
min-plus product handed to a pluggable kernel.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numba import njit

from .core import ParenSeq, midpoint_set, height_profile, pair_cost_code
from .minplus import MinPlusParams, ProductStats, minplus_bd
from .oracle import INF, minplus_naive


class InvariantViolation(RuntimeError):
    """A debug-mode check on the recursion failed."""


# ---------------------------------------------------------------- decomposition

@dataclass
class WeightedDecomposition:
    """Binary interval tree over ``[0..n]``; intervals are inclusive ``(lo, hi)``."""

    n: int
    mids: np.ndarray
    depth: int
    lo: np.ndarray
    hi: np.ndarray
    level: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def size(self) -> int:
        return len(self.lo)

    def is_leaf(self, v: int) -> bool:
        return self.left[v] < 0

    def weight(self, v: int) -> int:
        return _scaled_weight(self.lo[v], self.hi[v], self.n, self._prefix)

    def mid_count(self, v: int) -> int:
        return int(self._prefix[self.hi[v] + 1] - self._prefix[self.lo[v]])

    def levels(self) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = [[] for _ in range(int(self.level.max()) + 1)]
        for v in range(self.size):
            out[self.level[v]].append((int(self.lo[v]), int(self.hi[v])))
        return out

    _prefix: np.ndarray = field(default=None, repr=False)


def _scaled_weight(lo: int, hi: int, n: int, prefix: np.ndarray) -> int:
    inside = int(prefix[hi + 1] - prefix[lo])
    total = int(prefix[-1])
    return n * inside + (hi - lo + 1 - inside) * total


def weighted_decomposition(n: int, mids) -> WeightedDecomposition:
    """Split ``[0..n]`` recursively at the leftmost balanced point.

    Scaled weights ``w'(I) = n |I & M| + |I \\ M| |M|`` are ``n`` times the
    plain weights; both halves of a split weigh at most ``(w'(I) + n) / 2``.
    Recursion stops at depth ``floor(log2 W)``, at intervals holding at most
    two distinguished points, and at singletons.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    mids = np.unique(np.asarray(mids, dtype=np.int64))
    if mids.size and (mids[0] < 0 or mids[-1] > n):
        raise ValueError("distinguished points must lie in [0..n]")
    flag = np.zeros(n + 1, np.int64)
    flag[mids] = 1
    prefix = np.concatenate([[0], np.cumsum(flag)])
    scale = max(n, 1)
    total = _scaled_weight(0, n, scale, prefix)
    depth = 0
    while scale << (depth + 1) <= total:
        depth += 1
    lo, hi, level, left, right = [], [], [], [], []

    def node(a: int, b: int, d: int) -> int:
        v = len(lo)
        lo.append(a), hi.append(b), level.append(d), left.append(-1), right.append(-1)
        if d >= depth or b == a or prefix[b + 1] - prefix[a] <= 2:
            return v
        w = _scaled_weight(a, b, scale, prefix)
        bound = (w + scale) / 2
        for t in range(a, b):
            if (_scaled_weight(a, t, scale, prefix) <= bound
                    and _scaled_weight(t + 1, b, scale, prefix) <= bound):
                break
        else:
            raise AssertionError("no balanced split")
        left[v] = node(a, t, d + 1)
        right[v] = node(t + 1, b, d + 1)
        return v

    node(0, n, 0)
    arr = lambda x: np.asarray(x, dtype=np.int64)
    return WeightedDecomposition(n, mids, depth, arr(lo), arr(hi), arr(level),
                                 arr(left), arr(right), prefix)


# ---------------------------------------------------------------- rules

@njit(cache=True)
def _rule_block(A, P, E, codes, mloc, preset, cap, i_lo, i_hi, j_lo, j_hi):
    m = E.size
    for p in range(i_hi, i_lo - 1, -1):
        for q in range(max(j_lo, p), j_hi + 1):
            if preset[p, q]:
                continue
            i = E[p]
            j = E[q]
            if j - i <= 1:
                A[p, q] = min(j - i, cap)
                continue
            best = min(P[p, q], cap)
            inner_l = p + 1 < m and E[p + 1] == i + 1
            inner_r = q >= 1 and E[q - 1] == j - 1
            if inner_l and inner_r:
                best = min(best, pair_cost_code(codes[i], codes[j - 1]) + A[p + 1, q - 1])
            if inner_l and p + 1 < q:
                best = min(best, A[p, p + 1] + A[p + 1, q])
            if p + 2 < q and E[p + 2] == i + 2:
                best = min(best, A[p, p + 2] + A[p + 2, q])
            if inner_r and q - 1 > p:
                best = min(best, A[p, q - 1] + A[q - 1, q])
            if q - 2 > p and E[q - 2] == j - 2:
                best = min(best, A[p, q - 2] + A[q - 2, q])
            for r in range(mloc.size):
                x = mloc[r]
                if x <= p:
                    continue
                if x >= q:
                    break
                if x <= i_hi or x >= j_lo:
                    v = A[p, x] + A[x, q]
                    if v < best:
                        best = v
            A[p, q] = best
    return A


class Rule:
    """Entry completion: fills ``I x J`` (``i`` descending, ``j`` ascending) from
    ``P`` plus the distinguished points inside ``I`` or ``J``."""

    size: int
    mids: np.ndarray

    def initial(self) -> np.ndarray:
        raise NotImplementedError

    def fill(self, A: np.ndarray, P: np.ndarray, i_lo: int, i_hi: int, j_lo: int, j_hi: int) -> None:
        raise NotImplementedError


class ExtendedRule(Rule):
    """Restricted recursion over an increasing position list ``E``.

    Outer-pair and one/two-step splits are used only when the neighbouring
    positions belong to ``E``; cells flagged in ``preset`` keep their value.
    With ``E = [0..n]`` and no presets this is the valley-restricted DP.
    """

    def __init__(self, E, codes, mloc, preset=None, cap: int = INF):
        self.E = np.ascontiguousarray(E, dtype=np.int64)
        self.codes = np.ascontiguousarray(codes, dtype=np.int64)
        self.mids = np.ascontiguousarray(mloc, dtype=np.int64)
        self.size = len(self.E)
        self.preset = (np.zeros((self.size, self.size), dtype=bool) if preset is None
                       else np.ascontiguousarray(preset, dtype=bool))
        self.cap = int(cap)
        self.start: np.ndarray | None = None

    def initial(self) -> np.ndarray:
        if self.start is not None:
            return self.start.copy()
        return np.full((self.size, self.size), self.cap, dtype=np.int64)

    def fill(self, A, P, i_lo, i_hi, j_lo, j_hi):
        _rule_block(A, P, self.E, self.codes, self.mids, self.preset, self.cap,
                    i_lo, i_hi, j_lo, j_hi)


class FunctionRule(Rule):
    """Wraps ``fn(A, i, j, restricted_min) -> value`` for small experiments."""

    def __init__(self, n: int, mids, fn: Callable[[np.ndarray, int, int, int], int]):
        self.size = n + 1
        self.mids = np.unique(np.asarray(mids, dtype=np.int64))
        self.fn = fn

    def initial(self) -> np.ndarray:
        return np.full((self.size, self.size), INF, dtype=np.int64)

    def fill(self, A, P, i_lo, i_hi, j_lo, j_hi):
        for i in range(i_hi, i_lo - 1, -1):
            for j in range(max(j_lo, i), j_hi + 1):
                best = int(P[i, j])
                for m in self.mids:
                    if i < m < j and (m <= i_hi or m >= j_lo):
                        best = min(best, int(A[i, m] + A[m, j]))
                A[i, j] = self.fn(A, i, j, best)


def restricted_rule(s: ParenSeq, k: int | None = None) -> ExtendedRule:
    """Valley-restricted DP as a rule over ``[0..n]``; ``k`` caps values at ``k + 1``."""
    n = len(s)
    cap = INF if k is None else k + 1
    return ExtendedRule(np.arange(n + 1), s.codes, midpoint_set(height_profile(s)), cap=cap)


# ---------------------------------------------------------------- recursion

@dataclass
class RecursionStats:
    computes: int = 0
    completes: int = 0
    updates: int = 0
    base_fills: int = 0
    kernel_calls: int = 0


@dataclass
class RecursionContext:
    rule: Rule
    kernel: Callable[[np.ndarray, np.ndarray], np.ndarray]
    tree: WeightedDecomposition
    A: np.ndarray
    P: np.ndarray
    debug: bool = False
    stats: RecursionStats = field(default_factory=RecursionStats)


def make_context(rule: Rule, kernel=None, debug: bool = False) -> RecursionContext:
    tree = weighted_decomposition(rule.size - 1, rule.mids)
    A = rule.initial()
    P = np.full((rule.size, rule.size), INF, dtype=np.int64)
    return RecursionContext(rule, kernel or minplus_naive, tree, A, P, debug)


def _check_bd(M: np.ndarray, axis: int, what: str) -> None:
    if M.shape[axis] > 1 and int(np.abs(np.diff(M, axis=axis)).max()) > 1:
        raise InvariantViolation(f"{what} operand of an update is not bounded-difference")


def op_update(I: int, K: int, J: int, ctx: RecursionContext) -> None:
    """Relax ``P`` over ``I x J`` by the distinguished points of ``K``."""
    t = ctx.tree
    mids = ctx.rule.mids
    km = mids[(mids >= t.lo[K]) & (mids <= t.hi[K])]
    ctx.stats.updates += 1
    if km.size == 0:
        return
    rows = np.arange(t.lo[I], t.hi[I] + 1)
    cols = np.arange(t.lo[J], t.hi[J] + 1)
    left = np.ascontiguousarray(ctx.A[np.ix_(rows, km)])
    right = np.ascontiguousarray(ctx.A[np.ix_(km, cols)])
    if ctx.debug:
        _check_bd(left, 0, "left")
        _check_bd(right, 1, "right")
    prod = ctx.kernel(left, right)
    ctx.stats.kernel_calls += 1
    block = ctx.P[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1]
    np.minimum(block, prod, out=block)


def _check_pending(I: int, J: int, ctx: RecursionContext) -> None:
    t = ctx.tree
    mids = ctx.rule.mids
    between = mids[(mids > t.hi[I]) & (mids < t.lo[J])]
    for i in range(t.lo[I], t.hi[I] + 1):
        for j in range(t.lo[J], t.hi[J] + 1):
            want = min((int(ctx.A[i, m] + ctx.A[m, j]) for m in between), default=INF)
            if int(ctx.P[i, j]) != want:
                raise InvariantViolation(f"P[{i},{j}] = {ctx.P[i, j]} but pending minimum is {want}")


def op_complete(I: int, J: int, ctx: RecursionContext) -> None:
    """Finalise ``A`` over ``I x J`` given ``I x I``, ``J x J`` and everything in between."""
    t = ctx.tree
    ctx.stats.completes += 1
    if ctx.debug:
        _check_pending(I, J, ctx)
    if t.is_leaf(I) or t.is_leaf(J):
        ctx.stats.base_fills += 1
        ctx.rule.fill(ctx.A, ctx.P, t.lo[I], t.hi[I], t.lo[J], t.hi[J])
        return
    Il, Ir, Jl, Jr = t.left[I], t.right[I], t.left[J], t.right[J]
    op_complete(Ir, Jl, ctx)
    op_update(Il, Ir, Jl, ctx)
    op_complete(Il, Jl, ctx)
    op_update(Ir, Jl, Jr, ctx)
    op_complete(Ir, Jr, ctx)
    op_update(Il, Ir, Jr, ctx)
    op_update(Il, Jl, Jr, ctx)
    op_complete(Il, Jr, ctx)


def op_compute(I: int, ctx: RecursionContext) -> None:
    """Finalise ``A[i, j]`` for ``i <= j`` inside interval ``I``."""
    t = ctx.tree
    ctx.stats.computes += 1
    if t.is_leaf(I):
        ctx.stats.base_fills += 1
        ctx.rule.fill(ctx.A, ctx.P, t.lo[I], t.hi[I], t.lo[I], t.hi[I])
        return
    op_compute(t.left[I], ctx)
    op_compute(t.right[I], ctx)
    op_complete(t.left[I], t.right[I], ctx)


def valiant_fill(rule: Rule, kernel=None, debug: bool = False) -> RecursionContext:
    ctx = make_context(rule, kernel, debug)
    op_compute(0, ctx)
    return ctx


# ---------------------------------------------------------------- kernels

class BDKernel:
    """``minplus_bd`` as a recursion kernel, with call counters.

    Products whose every dimension is below ``min_side`` go to the naive
    kernel, where the blocked product has nothing to gain.
    """

    def __init__(self, params: MinPlusParams | None = None, min_side: int = 8):
        self.params = params or MinPlusParams()
        self.min_side = min_side
        self.stats = ProductStats()
        self.naive_calls = 0

    def __call__(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if max(A.shape[0], B.shape[1]) < self.min_side:
            self.naive_calls += 1
            return minplus_naive(A, B)
        return minplus_bd(A, B, self.params, self.stats)


def bd_kernel(params: MinPlusParams | None = None, min_side: int = 8) -> BDKernel:
    return BDKernel(params, min_side)


def fill_cluster_valiant(prob, codes, kernel=None, stats=None, debug: bool = False) -> np.ndarray:
    """Valiant fill of a cluster problem over its local ``E(C)`` indices."""
    rule = ExtendedRule(prob.extended, codes, prob.mloc, prob.preset, prob.cap)
    rule.start = prob.table
    ctx = valiant_fill(rule, kernel or bd_kernel(), debug)
    if stats is not None:
        stats.valiant_clusters += 1
        stats.kernel_calls += ctx.stats.kernel_calls
    return ctx.A
