"""Pure-numpy Gauss-Jordan elimination over GF(p).

Fallback for the compiled kernel in ``_rowred.pyx``; both expose the same
``rref_mod_p`` contract (in-place RREF on a uint8 array, pivot columns
returned).  Row updates are vectorised; entries stay below 256 because
(p-1)**2 + (p-1) < 256 for the supported primes.
"""

from __future__ import annotations

import numpy as np


def rref_mod_p(a: np.ndarray, p: int) -> list[int]:
    """Reduce ``a`` to reduced row echelon form; return pivot columns."""
    if p < 2 or p > 16:
        raise ValueError("prime out of supported range")
    rows, cols = a.shape
    inv = [0] * p
    for x in range(1, p):
        inv[x] = pow(x, -1, p)
    pivots: list[int] = []
    r = 0
    for col in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv], col:] = a[[piv, r], col:]
        f = inv[int(a[r, col])]
        if f != 1:
            a[r, col:] = (a[r, col:] * f) % p
        other = np.nonzero(a[:, col])[0]
        other = other[other != r]
        if other.size:
            factors = (p - a[other, col]).astype(np.uint8)
            a[other, col:] = (a[other, col:] + factors[:, None] * a[r, col:]) % p
        pivots.append(col)
        r += 1
    return pivots
