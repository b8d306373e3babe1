"""Boolean matrix product with the inner dimension packed into 64-bit words."""
from __future__ import annotations

import numpy as np
from numba import njit


def pack_rows(M: np.ndarray) -> np.ndarray:
    """Pack each row of a Boolean matrix into ``ceil(cols / 64)`` uint64 words."""
    M = np.asarray(M, dtype=bool)
    rows, cols = M.shape
    words = max(1, (cols + 63) // 64)
    padded = np.zeros((rows, words * 64), dtype=bool)
    padded[:, :cols] = M
    as_bytes = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(as_bytes).view(np.uint64).reshape(rows, words)


@njit(cache=True)
def _packed_product(up, vp):
    nx, w = up.shape
    ny = vp.shape[0]
    out = np.zeros((nx, ny), np.bool_)
    for x in range(nx):
        for y in range(ny):
            for t in range(w):
                if up[x, t] & vp[y, t]:
                    out[x, y] = True
                    break
    return out


def bool_matmul(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """``Z[x, y] = OR_r (U[x, r] AND V[r, y])``."""
    U = np.asarray(U, dtype=bool)
    V = np.asarray(V, dtype=bool)
    if U.ndim != 2 or V.ndim != 2 or U.shape[1] != V.shape[0]:
        raise ValueError(f"shape mismatch {U.shape} x {V.shape}")
    if U.shape[1] == 0:
        return np.zeros((U.shape[0], V.shape[1]), dtype=bool)
    return _packed_product(pack_rows(U), pack_rows(V.T))
