"""Random test inputs: uniform Dyck shapes with planted edits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ParenSeq


@dataclass(frozen=True)
class Planted:
    seq: ParenSeq
    base: ParenSeq
    edits: int


def random_dyck(m: int, types: int, rng: np.random.Generator) -> ParenSeq:
    """Uniformly random balanced shape with ``m`` pairs, each pair given a random type.

    Shape by the cycle lemma: of the rotations of a shuffled word with ``m``
    up-steps and ``m + 1`` down-steps exactly one has all proper prefixes
    non-negative, and dropping its final down-step leaves a Dyck path.
    """
    if m < 0 or types < 1:
        raise ValueError("need m >= 0 and types >= 1")
    steps = np.concatenate([np.ones(m, np.int64), -np.ones(m + 1, np.int64)])
    rng.shuffle(steps)
    prefix = np.cumsum(steps)
    start = int(np.argmin(prefix)) + 1
    shape = np.roll(steps, -start)[:-1]
    codes = np.empty(2 * m, np.int64)
    stack = []
    pair_types = rng.integers(0, types, size=m)
    used = 0
    for p, st in enumerate(shape):
        if st > 0:
            codes[p] = 2 * pair_types[used]
            stack.append(p)
            used += 1
        else:
            codes[p] = codes[stack.pop()] + 1
    return ParenSeq(codes, types)


def apply_edits(s: ParenSeq, edits: int, rng: np.random.Generator) -> ParenSeq:
    """Apply ``edits`` random deletions / substitutions; each raises the distance by at most one."""
    codes = list(s.codes)
    symbols = 2 * s.type_count
    for _ in range(edits):
        if not codes:
            break
        p = int(rng.integers(len(codes)))
        if symbols == 1 or rng.random() < 0.5:
            del codes[p]
        else:
            shift = int(rng.integers(1, symbols))
            codes[p] = (codes[p] + shift) % symbols
    return ParenSeq(codes, s.type_count)


def planted_instance(n: int, types: int, edits: int, rng: np.random.Generator) -> Planted:
    base = random_dyck(n // 2, types, rng)
    return Planted(apply_edits(base, edits, rng), base, edits)


def nested_instance(depth: int, types: int, edits: int, rng: np.random.Generator) -> Planted:
    """``depth`` nested pairs with random types, then planted edits; produces tall trapezoids."""
    opens = 2 * rng.integers(0, types, size=depth)
    base = ParenSeq(np.concatenate([opens, opens[::-1] + 1]), types)
    return Planted(apply_edits(base, edits, rng), base, edits)
