"""Parenthesis sequences, height profiles and the valley reduction.

Symbols are stored as small integer codes: ``2 * type + 1`` for a closing
parenthesis and ``2 * type`` for an opening one, so flipping the orientation
is ``code ^ 1`` and a matched pair is ``(c, c + 1)`` with ``c`` even.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np
from numba import njit


class Symbol(NamedTuple):
    opening: bool
    type: int

    @property
    def code(self) -> int:
        return 2 * self.type + (0 if self.opening else 1)

    @classmethod
    def from_code(cls, code: int) -> "Symbol":
        return cls(code % 2 == 0, int(code) // 2)


@dataclass(frozen=True)
class ParenAlphabet:
    type_count: int

    def __post_init__(self) -> None:
        if self.type_count < 1:
            raise ValueError(f"type_count must be positive, got {self.type_count}")

    def symbols(self) -> list[Symbol]:
        return [Symbol(o, t) for t in range(self.type_count) for o in (True, False)]

    def __contains__(self, sym: object) -> bool:
        return isinstance(sym, Symbol) and 0 <= sym.type < self.type_count


class ParenSeq:
    """Immutable parenthesis sequence over ``type_count`` parenthesis types."""

    __slots__ = ("codes", "type_count")

    def __init__(self, codes: Iterable[int] | np.ndarray, type_count: int | None = None):
        arr = np.array(codes, dtype=np.int64).reshape(-1)
        if arr.size and arr.min() < 0:
            raise ValueError("symbol codes must be non-negative")
        needed = int(arr.max()) // 2 + 1 if arr.size else 1
        if type_count is None:
            type_count = needed
        elif needed > type_count:
            raise ValueError(f"symbol type {needed - 1} out of range for t={type_count}")
        if type_count < 1:
            raise ValueError("type_count must be positive")
        arr.setflags(write=False)
        object.__setattr__(self, "codes", arr)
        object.__setattr__(self, "type_count", int(type_count))

    def __setattr__(self, name, value):
        raise AttributeError("ParenSeq is immutable")

    @classmethod
    def from_symbols(cls, symbols: Iterable[Symbol | tuple[bool, int]],
                     type_count: int | None = None) -> "ParenSeq":
        return cls([Symbol(*s).code for s in symbols], type_count)

    @property
    def alphabet(self) -> ParenAlphabet:
        return ParenAlphabet(self.type_count)

    @property
    def opening(self) -> np.ndarray:
        return (self.codes & 1) == 0

    @property
    def types(self) -> np.ndarray:
        return self.codes >> 1

    def __len__(self) -> int:
        return int(self.codes.size)

    def __iter__(self) -> Iterator[Symbol]:
        return (Symbol.from_code(c) for c in self.codes)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return ParenSeq(self.codes[idx], self.type_count)
        return Symbol.from_code(self.codes[idx])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParenSeq):
            return NotImplemented
        return self.type_count == other.type_count and np.array_equal(self.codes, other.codes)

    def __hash__(self) -> int:
        return hash((self.type_count, self.codes.tobytes()))

    def __repr__(self) -> str:
        body = " ".join(("o" if c % 2 == 0 else "c") + str(c // 2) for c in self.codes[:40])
        more = " ..." if len(self) > 40 else ""
        return f"ParenSeq(t={self.type_count}, [{body}{more}])"


@dataclass(frozen=True)
class HeightProfile:
    heights: np.ndarray
    valleys: np.ndarray
    peaks: np.ndarray

    @property
    def n(self) -> int:
        return len(self.heights) - 1


@dataclass(frozen=True)
class Reduced:
    seq: ParenSeq
    rejected: bool


def heights_of(codes: np.ndarray) -> np.ndarray:
    steps = np.where((np.asarray(codes) & 1) == 0, 1, -1)
    out = np.zeros(len(steps) + 1, dtype=np.int64)
    np.cumsum(steps, out=out[1:])
    return out


def _extrema(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if len(h) < 3:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy()
    mid, left, right = h[1:-1], h[:-2], h[2:]
    valleys = np.flatnonzero((left > mid) & (mid < right)) + 1
    peaks = np.flatnonzero((left < mid) & (mid > right)) + 1
    return valleys.astype(np.int64), peaks.astype(np.int64)


def height_profile(s: ParenSeq) -> HeightProfile:
    h = heights_of(s.codes)
    valleys, peaks = _extrema(h)
    return HeightProfile(h, valleys, peaks)


def pair_cost(x: Symbol, y: Symbol) -> int:
    """Dyck edit distance of the two-symbol string ``xy``."""
    if x.opening and not y.opening:
        return 0 if x.type == y.type else 1
    if not x.opening and y.opening:
        return 2
    return 1


@njit(cache=True, inline="always")
def pair_cost_code(x: int, y: int) -> int:
    if x & 1 == 0:
        if y & 1 == 1:
            return 0 if y == x + 1 else 1
        return 1
    return 2 if y & 1 == 0 else 1


@njit(cache=True)
def _stack_reduce(codes: np.ndarray) -> np.ndarray:
    out = np.empty(codes.size, dtype=np.int64)
    top = 0
    for c in codes:
        if c & 1 == 1 and top > 0 and out[top - 1] == c - 1:
            top -= 1
        else:
            out[top] = c
            top += 1
    return out[:top].copy()


def reduce_valleys(s: ParenSeq, k: int) -> Reduced:
    """Strip matched adjacent pairs, then reject when more than ``2k`` valleys remain.

    Removing an adjacent ``(_x )_x`` never changes the Dyck edit distance, and
    the scan removes them until none is left. A residual string with more than
    ``2k`` valleys has distance above ``k``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    residual = ParenSeq(_stack_reduce(np.ascontiguousarray(s.codes)), s.type_count)
    valleys, _ = _extrema(heights_of(residual.codes))
    return Reduced(residual, bool(len(valleys) > 2 * k))


def midpoint_set(p: HeightProfile) -> np.ndarray:
    v = np.asarray(p.valleys, dtype=np.int64)
    if v.size == 0:
        return np.zeros(0, dtype=np.int64)
    cand = np.concatenate([v - 1, v, v + 1])
    cand = cand[(cand >= 0) & (cand <= p.n)]
    return np.unique(cand)


def reverse_complement(s: ParenSeq) -> ParenSeq:
    return ParenSeq(s.codes[::-1] ^ 1, s.type_count)


def is_balanced(s: ParenSeq | Sequence[int]) -> bool:
    codes = s.codes if isinstance(s, ParenSeq) else np.asarray(s, dtype=np.int64)
    return _stack_reduce(np.ascontiguousarray(codes, dtype=np.int64)).size == 0
