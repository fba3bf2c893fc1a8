"""Exact dense linear algebra over the prime field GF(p).

All quantities downstream (cohomology dimensions, module generator
counts, Mayer-Vietoris ranks) are exact integers computed from the rank
machinery here.  Matrices hold uint8 residues in [0, p); the row
reduction kernel is the compiled extension when available, with a
pure-numpy fallback selected at import (set ``GOGENDS_PURE=1`` to force
the fallback).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

if os.environ.get("GOGENDS_PURE"):
    from . import _rowred_np as _kernel

    KERNEL = "python"
else:
    try:
        from . import _rowred as _kernel  # type: ignore[no-redef]

        KERNEL = "compiled"
    except ImportError:
        from . import _rowred_np as _kernel  # type: ignore[no-redef]

        KERNEL = "python"


class NotASubspace(ValueError):
    """Raised when a claimed subspace containment fails."""


class NoSolution(ValueError):
    """Raised by ``solve`` when the linear system is inconsistent."""


def _as_residues(data, prime: int) -> np.ndarray:
    arr = np.asarray(data)
    if arr.dtype != np.uint8:
        arr = np.mod(arr, prime).astype(np.uint8)
    arr = np.ascontiguousarray(arr)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
    if arr.size and int(arr.max()) >= prime:
        raise ValueError("entries must be residues in [0, p)")
    return arr


class FpMatrix:
    """Dense matrix over GF(p).  Immutable by convention."""

    __slots__ = ("data", "prime")

    def __init__(self, data, prime: int):
        if prime < 2:
            raise ValueError("prime must be at least 2")
        self.prime = prime
        self.data = _as_residues(data, prime)

    @classmethod
    def zeros(cls, rows: int, cols: int, prime: int) -> "FpMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8), prime)

    @classmethod
    def identity(cls, n: int, prime: int) -> "FpMatrix":
        return cls(np.eye(n, dtype=np.uint8), prime)

    @classmethod
    def from_rows(cls, rows, prime: int, cols: int | None = None) -> "FpMatrix":
        rows = list(rows)
        if not rows:
            if cols is None:
                raise ValueError("cols required for an empty row list")
            return cls.zeros(0, cols, prime)
        return cls(np.array(rows), prime)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def matmul(self, other: "FpMatrix") -> "FpMatrix":
        if self.prime != other.prime:
            raise ValueError("prime mismatch")
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        prod = self.data.astype(np.int64) @ other.data.astype(np.int64)
        return FpMatrix(prod % self.prime, self.prime)

    def mul_vec(self, vec) -> np.ndarray:
        v = np.asarray(vec, dtype=np.int64)
        if v.shape != (self.cols,):
            raise ValueError("vector length mismatch")
        return ((self.data.astype(np.int64) @ v) % self.prime).astype(np.uint8)

    def transpose(self) -> "FpMatrix":
        return FpMatrix(np.ascontiguousarray(self.data.T), self.prime)

    def copy_data(self) -> np.ndarray:
        return np.ascontiguousarray(self.data.copy())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpMatrix)
            and self.prime == other.prime
            and self.data.shape == other.data.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.prime, self.data.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix({self.rows}x{self.cols} mod {self.prime})"


def rref(m: FpMatrix) -> tuple[FpMatrix, list[int]]:
    """Reduced row echelon form plus pivot columns (input untouched)."""
    work = m.copy_data()
    pivots = _kernel.rref_mod_p(work, m.prime)
    return FpMatrix(work, m.prime), list(pivots)


@dataclass(frozen=True)
class Subspace:
    """Subspace of GF(p)^n held as a canonical RREF basis (full row rank)."""

    prime: int
    ambient_dim: int
    basis: FpMatrix
    pivots: tuple[int, ...]

    @classmethod
    def from_vectors(cls, vectors, ambient_dim: int, prime: int) -> "Subspace":
        mat = FpMatrix.from_rows(vectors, prime, cols=ambient_dim)
        if mat.cols != ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        reduced, pivots = rref(mat)
        basis = FpMatrix(reduced.data[: len(pivots)], prime)
        return cls(prime, ambient_dim, basis, tuple(pivots))

    @classmethod
    def zero(cls, ambient_dim: int, prime: int) -> "Subspace":
        return cls.from_vectors([], ambient_dim, prime)

    @classmethod
    def full(cls, ambient_dim: int, prime: int) -> "Subspace":
        return cls.from_vectors(np.eye(ambient_dim, dtype=np.uint8), ambient_dim, prime)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def reduce(self, vec) -> np.ndarray:
        """Remainder of ``vec`` after elimination against the basis."""
        v = np.mod(np.asarray(vec, dtype=np.int64), self.prime)
        if v.shape != (self.ambient_dim,):
            raise ValueError("vector length mismatch")
        b = self.basis.data
        for i, c in enumerate(self.pivots):
            f = int(v[c])
            if f:
                v = (v - f * b[i].astype(np.int64)) % self.prime
        return v.astype(np.uint8)

    def contains(self, vec) -> bool:
        return not self.reduce(vec).any()

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis.data)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.prime == other.prime
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.prime, self.ambient_dim, self.basis))


@dataclass(frozen=True)
class RankProfile:
    rank: int
    nullspace: Subspace
    row_space: Subspace


def rank_profile(m: FpMatrix) -> RankProfile:
    """Rank plus canonical echelon bases of nullspace and row space."""
    reduced, pivots = rref(m)
    rank = len(pivots)
    row_space = Subspace(m.prime, m.cols, FpMatrix(reduced.data[:rank], m.prime), tuple(pivots))
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    null_vectors = np.zeros((len(free_cols), m.cols), dtype=np.uint8)
    for k, fc in enumerate(free_cols):
        null_vectors[k, fc] = 1
        for i, pc in enumerate(pivots):
            null_vectors[k, pc] = (m.prime - int(reduced.data[i, fc])) % m.prime
    nullspace = Subspace.from_vectors(null_vectors, m.cols, m.prime)
    assert rank + nullspace.dim == m.cols
    return RankProfile(rank, nullspace, row_space)


def rank(m: FpMatrix) -> int:
    work = m.copy_data()
    return len(_kernel.rref_mod_p(work, m.prime))


def solve(m: FpMatrix, rhs) -> np.ndarray:
    """A particular solution of m x = rhs; raises NoSolution if none."""
    b = np.mod(np.asarray(rhs, dtype=np.int64), m.prime).astype(np.uint8)
    if b.shape != (m.rows,):
        raise ValueError("rhs length mismatch")
    aug = np.concatenate([m.data, b[:, None]], axis=1)
    pivots = _kernel.rref_mod_p(np.ascontiguousarray(aug), m.prime)
    if m.cols in pivots:
        raise NoSolution("inconsistent system")
    x = np.zeros(m.cols, dtype=np.uint8)
    for i, c in enumerate(pivots):
        x[c] = aug[i, -1]
    return x


def quotient_dim(space: Subspace, sub: Subspace) -> int:
    """dim(space) - dim(sub), after verifying sub is inside space."""
    if space.ambient_dim != sub.ambient_dim or space.prime != sub.prime:
        raise NotASubspace("ambient mismatch")
    if not space.contains_subspace(sub):
        raise NotASubspace("claimed subspace is not contained in the space")
    return space.dim - sub.dim


def vstack(mats: list[FpMatrix], prime: int, cols: int | None = None) -> FpMatrix:
    blocks = [m.data for m in mats if m.rows]
    if not blocks:
        if cols is None:
            raise ValueError("cols required when all blocks are empty")
        return FpMatrix.zeros(0, cols, prime)
    return FpMatrix(np.concatenate(blocks, axis=0), prime)


def hstack(mats: list[FpMatrix], prime: int) -> FpMatrix:
    return FpMatrix(np.concatenate([m.data for m in mats], axis=1), prime)
