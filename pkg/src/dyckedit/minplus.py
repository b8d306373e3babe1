"""Min-plus products: a small-entry kernel and the blocked bounded-difference product.

The bounded-difference product multiplies a column-BD ``A`` (``N x s``) by a
row-BD ``B`` (``s x M``) in three phases:

1. exact values at block representatives give an approximation ``C~`` that
   is off by at most ``2 * delta`` everywhere;
2. ``rho`` sampling rounds shift ``A`` and ``B`` around a pivot so that the
   useful entries become small, and multiply only those with the small-entry
   kernel;
3. every representative triple that looks relevant but was never covered by
   a round is relaxed directly over its ``delta x delta`` block.

Blocks are ``[x*delta, (x+1)*delta)`` and the representative of a block is
its last index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil

import numpy as np
from numba import njit

from .boolmat import bool_matmul
from .oracle import INF, as_minplus, minplus_naive

STRATEGIES = ("random", "greedy")


def _finite(M: np.ndarray) -> bool:
    return bool(np.all(M < INF))


def is_column_bd(M) -> bool:
    M = as_minplus(M)
    return _finite(M) and (M.shape[0] < 2 or int(np.abs(np.diff(M, axis=0)).max(initial=0)) <= 1)


def is_row_bd(M) -> bool:
    M = as_minplus(M)
    return _finite(M) and (M.shape[1] < 2 or int(np.abs(np.diff(M, axis=1)).max(initial=0)) <= 1)


@dataclass(frozen=True)
class BDMatrix:
    values: np.ndarray
    column_bd: bool
    row_bd: bool

    @classmethod
    def of(cls, M) -> "BDMatrix":
        M = as_minplus(M)
        if M.ndim != 2:
            raise ValueError("BDMatrix needs a 2-D array")
        return cls(M, is_column_bd(M), is_row_bd(M))

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class MinPlusParams:
    """``delta`` / ``rho`` default to ``ceil(n ** 0.25)`` for the larger outer dimension ``n``."""

    delta: int | None = None
    rho: int | None = None
    strategy: str = "greedy"
    seed: int = 0

    def resolve(self, n: int) -> tuple[int, int]:
        default = max(1, ceil(max(n, 1) ** 0.25))
        delta = default if self.delta is None else int(self.delta)
        rho = default if self.rho is None else int(self.rho)
        if delta < 1 or rho < 0:
            raise ValueError("need delta >= 1 and rho >= 0")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        return delta, rho


@dataclass
class SampleState:
    delta: int
    rho: int
    strategy: str
    shape: tuple[int, int]
    corners: np.ndarray
    pivots: list[tuple[int, int]] = field(default_factory=list)
    survivors: list[np.ndarray] = field(default_factory=list)
    covered: list[int] = field(default_factory=list)
    greedy_gain: list[int] = field(default_factory=list)

    @property
    def sizes(self) -> list[int]:
        return [len(x) for x in self.survivors]


# ---------------------------------------------------------------- small entries

@njit(cache=True)
def _top_digit_product(EA, EB):
    n, s = EA.shape
    m = EB.shape[1]
    top = np.full((n, m), -1, np.int64)
    for i in range(n):
        for l in range(s):
            ea = EA[i, l]
            if ea < 0:
                continue
            for j in range(m):
                eb = EB[l, j]
                if eb >= 0 and ea + eb > top[i, j]:
                    top[i, j] = ea + eb
    return top


def _bigint_top_digits(EA: np.ndarray, EB: np.ndarray) -> np.ndarray:
    base = EA.shape[1] + 1
    enc_a = [[base ** int(e) if e >= 0 else 0 for e in row] for row in EA]
    enc_b = [[base ** int(e) if e >= 0 else 0 for e in row] for row in EB]
    top = np.full((EA.shape[0], EB.shape[1]), -1, np.int64)
    for i, row in enumerate(enc_a):
        for j in range(EB.shape[1]):
            total = sum(row[l] * enc_b[l][j] for l in range(EA.shape[1]))
            e = -1
            while total:
                total //= base
                e += 1
            top[i, j] = e
    return top


def minplus_small_entries(A, B, R: int, method: str = "digits") -> np.ndarray:
    """Exact product for entries in ``[-R..R]`` plus infinity.

    Entry ``a`` becomes the digit ``1`` at exponent ``R - a`` in base
    ``s + 1``; an ordinary product of such encodings never carries, so the
    position of its top nonzero digit is ``2R - min(a + b)``. ``"bigint"``
    multiplies the encodings as Python integers; ``"digits"`` reads the top
    digit position off directly.
    """
    A = as_minplus(A)
    B = as_minplus(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    for M in (A, B):
        fin = M[M < INF]
        if fin.size and (fin.min() < -R or fin.max() > R):
            raise ValueError(f"finite entries must lie in [-{R}..{R}]")
    EA = np.where(A < INF, R - A, -1)
    EB = np.where(B < INF, R - B, -1)
    if method == "digits":
        top = _top_digit_product(EA, EB)
    elif method == "bigint":
        top = _bigint_top_digits(EA, EB)
    else:
        raise ValueError(f"unknown method {method!r}")
    return np.where(top >= 0, 2 * R - top, INF)


# ---------------------------------------------------------------- padding

def _pad(A: np.ndarray, B: np.ndarray, delta: int) -> tuple[np.ndarray, np.ndarray]:
    N, M = A.shape[0], B.shape[1]
    pn = -N % delta
    pm = -M % delta
    if pn:
        A = np.vstack([A, np.repeat(A[-1:], pn, axis=0)])
    if pm:
        B = np.hstack([B, np.repeat(B[:, -1:], pm, axis=1)])
    return np.ascontiguousarray(A), np.ascontiguousarray(B)


def _pad_like(C: np.ndarray, rows: int, cols: int) -> np.ndarray:
    out = C
    if rows > C.shape[0]:
        out = np.vstack([out, np.repeat(out[-1:], rows - C.shape[0], axis=0)])
    if cols > C.shape[1]:
        out = np.hstack([out, np.repeat(out[:, -1:], cols - C.shape[1], axis=1)])
    return np.ascontiguousarray(out)


def _reps(count: int, delta: int) -> np.ndarray:
    return np.arange(count, dtype=np.int64) * delta + delta - 1


def _operands(A, B) -> tuple[np.ndarray, np.ndarray]:
    A = A.values if isinstance(A, BDMatrix) else as_minplus(A)
    B = B.values if isinstance(B, BDMatrix) else as_minplus(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    if not (_finite(A) and _finite(B)):
        raise ValueError("bounded-difference operands must be finite")
    return A, B


# ---------------------------------------------------------------- phase 1

def _corner_values(Ap: np.ndarray, Bp: np.ndarray, delta: int) -> np.ndarray:
    rr = _reps(Ap.shape[0] // delta, delta)
    cr = _reps(Bp.shape[1] // delta, delta)
    return minplus_naive(Ap[rr], Bp[:, cr])


def _broadcast(corners: np.ndarray, delta: int) -> np.ndarray:
    return np.repeat(np.repeat(corners, delta, axis=0), delta, axis=1)


def phase1_block_approx(A, B, delta: int) -> np.ndarray:
    """``C~``: each entry replaced by the exact product at its block representative."""
    A, B = _operands(A, B)
    if delta < 1:
        raise ValueError("delta must be positive")
    Ap, Bp = _pad(A, B, delta)
    return _broadcast(_corner_values(Ap, Bp, delta), delta)[: A.shape[0], : B.shape[1]]


def _corners_from(Ct: np.ndarray, delta: int, rows: int, cols: int) -> np.ndarray:
    rr = np.minimum(_reps(-(-rows // delta), delta), rows - 1)
    cr = np.minimum(_reps(-(-cols // delta), delta), cols - 1)
    return Ct[np.ix_(rr, cr)]


# ---------------------------------------------------------------- phase 2

@njit(cache=True)
def _greedy_counts(Arep, Brep, Cr, weak_unc, todo, delta):
    nbx, s = Arep.shape
    nby = Brep.shape[1]
    count = np.zeros((nbx, nby), np.int64)
    W = np.zeros((nby, nby), np.int64)
    lim_cov = 48 * delta
    lim_rel = 16 * delta
    for l in range(s):
        # W[q, y]: representative triples (x, l, y) still to do whose A-side
        # would be inside the window for a pivot in block column q
        W[:, :] = 0
        for x in range(nbx):
            for q in range(nby):
                if abs(Arep[x, l] + Brep[l, q] - Cr[x, q]) <= lim_cov:
                    for y in range(nby):
                        if todo[l, x, y]:
                            W[q, y] += 1
        for p in range(nbx):
            for q in range(nby):
                if not weak_unc[l, p, q]:
                    continue
                if abs(Arep[p, l] + Brep[l, q] - Cr[p, q]) > lim_rel:
                    continue
                shift = Cr[p, q] - Brep[l, q]
                tot = 0
                for y in range(nby):
                    if abs(Brep[l, y] + shift - Cr[p, y]) <= lim_cov:
                        tot += W[q, y]
                count[p, q] += tot
    return count


class _Sampler:
    """Shared bookkeeping of phases 2 and 3 over padded operands."""

    def __init__(self, Ap: np.ndarray, Bp: np.ndarray, corners: np.ndarray, delta: int):
        self.Ap, self.Bp, self.delta = Ap, Bp, delta
        self.Cr = corners
        self.Ct = _broadcast(corners, delta)
        self.rr = _reps(corners.shape[0], delta)
        self.cr = _reps(corners.shape[1], delta)
        self.Arep = np.ascontiguousarray(Ap[self.rr])
        self.Brep = np.ascontiguousarray(Bp[:, self.cr])
        s = Ap.shape[1]
        # A[x', l] + B[l, y'] - C~[x', y'] over representative triples, as (l, x, y)
        self.rep_gap = self.Arep.T[:, :, None] + self.Brep[:, None, :] - corners[None, :, :]
        shape = (s,) + corners.shape
        self.weak_unc = np.ones(shape, dtype=bool)
        self.approx_unc = np.ones(shape, dtype=bool)
        self.approx_rel = np.abs(self.rep_gap) <= 8 * delta

    def shifted_rep(self, x: int, y: int) -> tuple[np.ndarray, np.ndarray]:
        """``A^r`` at representative rows (x, l) and ``B^r`` at representative columns (l, y)."""
        d = self.delta
        j = y * d + d - 1
        Ar = self.Arep + self.Bp[:, j][None, :] - self.Cr[:, y][:, None]
        Br = self.Brep - self.Bp[:, j][:, None] + self.Cr[x, y] - self.Cr[x, :][None, :]
        return Ar, Br

    def survivors(self, x: int, y: int) -> np.ndarray:
        rel = np.abs(self.rep_gap[:, x, y]) <= 16 * self.delta
        return np.flatnonzero(rel & self.weak_unc[:, x, y])

    def greedy_pick(self) -> tuple[int, int, int]:
        todo = self.approx_rel & self.approx_unc
        counts = _greedy_counts(self.Arep, self.Brep, self.Cr, self.weak_unc, todo, self.delta)
        flat = int(np.argmax(counts))
        x, y = divmod(flat, counts.shape[1])
        return x, y, int(counts[x, y])

    def absorb(self, x: int, y: int, surv: np.ndarray) -> None:
        Ar, Br = self.shifted_rep(x, y)
        d = self.delta
        a_in = np.abs(Ar.T)[:, :, None]
        b_in = np.abs(Br)[:, None, :]
        self.weak_unc &= ~((a_in <= 40 * d) & (b_in <= 40 * d))
        mask = np.zeros(self.Ap.shape[1], dtype=bool)
        mask[surv] = True
        self.approx_unc &= ~(mask[:, None, None] & (a_in <= 44 * d) & (b_in <= 44 * d))

    def round_product(self, x: int, y: int, surv: np.ndarray) -> tuple[np.ndarray, int]:
        d = self.delta
        i = x * d + d - 1
        j = y * d + d - 1
        Ap, Bp, Ct = self.Ap, self.Bp, self.Ct
        Ar = Ap[:, surv] + Bp[surv, j][None, :] - Ct[:, j][:, None]
        Br = Bp[surv] - Bp[surv, j][:, None] + Ct[i, j] - Ct[i, :][None, :]
        R = 48 * d
        a_ok = np.abs(Ar) <= R
        b_ok = np.abs(Br) <= R
        covered = int((a_ok.sum(axis=0) * b_ok.sum(axis=1)).sum())
        P = minplus_small_entries(np.where(a_ok, Ar, INF), np.where(b_ok, Br, INF), R)
        hat = P + Ct[:, j][:, None] - Ct[i, j] + Ct[i, :][None, :]
        return np.where(P < INF, hat, INF), covered


def _phase2(sampler: _Sampler, rho: int, strategy: str, seed: int,
            state: SampleState) -> np.ndarray:
    rng = np.random.default_rng(seed)
    Chat = np.full((sampler.Ap.shape[0], sampler.Bp.shape[1]), INF, dtype=np.int64)
    nbx, nby = sampler.Cr.shape
    for _ in range(rho):
        if strategy == "greedy":
            x, y, gain = sampler.greedy_pick()
            state.greedy_gain.append(gain)
        else:
            x = int(rng.integers(nbx))
            y = int(rng.integers(nby))
        surv = sampler.survivors(x, y)
        hat, covered = sampler.round_product(x, y, surv)
        np.minimum(Chat, hat, out=Chat)
        sampler.absorb(x, y, surv)
        d = sampler.delta
        state.pivots.append((x * d + d - 1, y * d + d - 1))
        state.survivors.append(surv)
        state.covered.append(covered)
    return Chat


def phase2_sampled_products(A, B, Ct: np.ndarray, rho: int, delta: int,
                            strategy: str = "greedy", seed: int = 0) -> tuple[np.ndarray, SampleState]:
    """``rho`` shifted small-entry products folded into ``C^``; never below the true product."""
    A, B = _operands(A, B)
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}")
    Ap, Bp = _pad(A, B, delta)
    corners = _corners_from(as_minplus(Ct), delta, A.shape[0], B.shape[1])
    sampler = _Sampler(Ap, Bp, corners, delta)
    state = SampleState(delta, rho, strategy, (A.shape[0], B.shape[1]), corners)
    Chat = _phase2(sampler, rho, strategy, seed, state)
    return Chat[: A.shape[0], : B.shape[1]], state


# ---------------------------------------------------------------- phase 3

@njit(cache=True)
def _relax_blocks(Chat, Ap, Bp, xs, ls, ys, delta):
    for t in range(xs.size):
        x0 = xs[t] * delta
        y0 = ys[t] * delta
        l = ls[t]
        for i in range(x0, x0 + delta):
            a = Ap[i, l]
            for j in range(y0, y0 + delta):
                v = a + Bp[l, j]
                if v < Chat[i, j]:
                    Chat[i, j] = v
    return Chat


def interesting_triples(sampler: _Sampler, state: SampleState) -> np.ndarray:
    """Representative triples ``(x, l, y)`` that look relevant and no round covered.

    A round only covers ``l`` if ``l`` survived its filter, so the uncovered
    test counts round ``r`` for ``l`` only when ``l`` is in ``L_r``.
    """
    d = sampler.delta
    s = sampler.Ap.shape[1]
    nbx, nby = sampler.Cr.shape
    rounds = len(state.pivots)
    shifted = []
    for (i, j) in state.pivots:
        shifted.append(sampler.shifted_rep(i // d, j // d))
    member = np.zeros((rounds, s), dtype=bool)
    for r, surv in enumerate(state.survivors):
        member[r, surv] = True
    found = []
    for l in range(s):
        U = np.zeros((nbx, rounds), dtype=bool)
        V = np.zeros((rounds, nby), dtype=bool)
        for r, (Ar, Br) in enumerate(shifted):
            if member[r, l]:
                U[:, r] = np.abs(Ar[:, l]) <= 44 * d
                V[r, :] = np.abs(Br[l, :]) <= 44 * d
        covered = bool_matmul(U, V)
        hit = np.argwhere(sampler.approx_rel[l] & ~covered)
        if hit.size:
            found.append(np.column_stack([hit[:, 0], np.full(len(hit), l), hit[:, 1]]))
    if not found:
        return np.zeros((0, 3), np.int64)
    return np.concatenate(found).astype(np.int64)


def _phase3(sampler: _Sampler, Chat: np.ndarray, state: SampleState) -> tuple[np.ndarray, int]:
    trip = interesting_triples(sampler, state)
    out = _relax_blocks(Chat.copy(), sampler.Ap, sampler.Bp,
                        np.ascontiguousarray(trip[:, 0]), np.ascontiguousarray(trip[:, 1]),
                        np.ascontiguousarray(trip[:, 2]), sampler.delta)
    return out, len(trip)


def phase3_complete(A, B, Ct: np.ndarray, Chat: np.ndarray, state: SampleState) -> np.ndarray:
    A, B = _operands(A, B)
    d = state.delta
    Ap, Bp = _pad(A, B, d)
    sampler = _Sampler(Ap, Bp, _corners_from(as_minplus(Ct), d, A.shape[0], B.shape[1]), d)
    # replay the rounds so the uncovered bookkeeping matches the recorded state
    for (i, j), surv in zip(state.pivots, state.survivors):
        sampler.absorb(i // d, j // d, surv)
    padded = _pad_like(as_minplus(Chat), Ap.shape[0], Bp.shape[1])
    out, _ = _phase3(sampler, padded, state)
    return out[: A.shape[0], : B.shape[1]]


def classify_triples(A, B, state: SampleState) -> dict[str, np.ndarray]:
    """Relevance / uncoveredness classes of every triple ``(i, l, j)`` as ``(N, s, M)`` masks.

    Uses the plain definitions, without the survivor-set refinement used by
    :func:`interesting_triples`; meant for small instances.
    """
    A, B = _operands(A, B)
    d = state.delta
    Ap, Bp = _pad(A, B, d)
    N, M = A.shape[0], B.shape[1]
    C = minplus_naive(A, B)
    Ct = _broadcast(state.corners, d)
    bi = (np.arange(N) // d) * d + d - 1
    bj = (np.arange(M) // d) * d + d - 1
    exact = A.T[:, :, None] + B[:, None, :] - C[None, :, :]
    approx = Ap[bi].T[:, :, None] + Bp[:, bj][:, None, :] - Ct[np.ix_(bi, bj)][None, :, :]
    out = {
        "strong_rel": exact == 0,
        "approx_rel": np.abs(approx) <= 8 * d,
        "weak_rel": np.abs(exact) <= 16 * d,
    }
    s = A.shape[1]
    unc = {name: np.ones((s, N, M), dtype=bool) for name in ("strong_unc", "approx_unc", "weak_unc")}
    for (pi, pj) in state.pivots:
        Ar = Ap + Bp[:, pj][None, :] - Ct[:, pj][:, None]
        Br = Bp - Bp[:, pj][:, None] + Ct[pi, pj] - Ct[pi, :][None, :]
        full_a = np.abs(Ar[:N]).T[:, :, None]
        full_b = np.abs(Br[:, :M])[:, None, :]
        rep_a = np.abs(Ar[bi]).T[:, :, None]
        rep_b = np.abs(Br[:, bj])[:, None, :]
        unc["strong_unc"] &= (full_a > 48 * d) | (full_b > 48 * d)
        unc["approx_unc"] &= (rep_a > 44 * d) | (rep_b > 44 * d)
        unc["weak_unc"] &= (full_a > 40 * d) | (full_b > 40 * d)
    out.update(unc)
    return {k: np.ascontiguousarray(v.transpose(1, 0, 2)) for k, v in out.items()}


# ---------------------------------------------------------------- driver

@dataclass
class ProductStats:
    calls: int = 0
    triples_covered: int = 0
    interesting: int = 0
    survivors: int = 0


def minplus_bd(A, B, params: MinPlusParams | None = None, stats: ProductStats | None = None,
               state_out: list | None = None) -> np.ndarray:
    """Exact ``A * B`` (min-plus) for column-BD ``A`` and row-BD ``B``."""
    params = params or MinPlusParams()
    A, B = _operands(A, B)
    N, M = A.shape[0], B.shape[1]
    if N == 0 or M == 0:
        return np.zeros((N, M), np.int64)
    if A.shape[1] == 0:
        return np.full((N, M), INF, np.int64)
    delta, rho = params.resolve(max(N, M))
    Ap, Bp = _pad(A, B, delta)
    corners = _corner_values(Ap, Bp, delta)
    sampler = _Sampler(Ap, Bp, corners, delta)
    state = SampleState(delta, rho, params.strategy, (N, M), corners)
    Chat = _phase2(sampler, rho, params.strategy, params.seed, state)
    out, n_interesting = _phase3(sampler, Chat, state)
    if stats is not None:
        stats.calls += 1
        stats.triples_covered += sum(state.covered)
        stats.interesting += n_interesting
        stats.survivors += sum(state.sizes)
    if state_out is not None:
        state_out.append(state)
    return out[:N, :M]
