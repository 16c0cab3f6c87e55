"""Fixed-bandwidth matrix storage.

A BandedMatrix of size n and half-bandwidth k keeps the 2k+1 diagonals in the
LAPACK band layout ``ab[k + i - j, j] = A[i, j]``: row k + offset holds the
diagonal with that offset (offset = i - j, positive below the main diagonal),
indexed by matrix column.  Entries outside the band are structurally zero.
This is the exact layout scipy.linalg.solve_banded consumes, so the
Crank-Nicolson solve never reshuffles storage.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

__all__ = ["BandedMatrix"]


@dataclass(frozen=True)
class BandedMatrix:
    """Square banded matrix of size n with half-bandwidth k.

    Attributes
    ----------
    n : int
        Matrix dimension.
    k : int
        Half-bandwidth; diagonals at offsets -k..k may be nonzero.
    ab : ndarray of shape (2k+1, n)
        Diagonal storage, LAPACK band layout (see module docstring).
    """

    n: int
    k: int
    ab: np.ndarray

    def __post_init__(self):
        if self.n < 1 or self.k < 0:
            raise ParameterError(f"invalid banded shape n={self.n}, k={self.k}")
        if self.ab.shape != (2 * self.k + 1, self.n):
            raise ParameterError(
                f"band storage shape {self.ab.shape} does not match "
                f"(2k+1, n) = {(2 * self.k + 1, self.n)}"
            )

    @classmethod
    def zeros(cls, n: int, k: int) -> "BandedMatrix":
        return cls(n, k, np.zeros((2 * k + 1, n)))

    @classmethod
    def from_dense(cls, dense: np.ndarray, k: int) -> "BandedMatrix":
        """Pack a dense matrix; entries outside the band must be zero."""
        dense = np.asarray(dense, dtype=float)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise ParameterError(f"expected a square matrix, got {dense.shape}")
        n = dense.shape[0]
        ab = np.zeros((2 * k + 1, n))
        for off in range(-k, k + 1):
            j0, j1 = max(0, -off), n - max(0, off)
            ab[k + off, j0:j1] = dense[np.arange(j0, j1) + off, np.arange(j0, j1)]
        out = cls(n, k, ab)
        if not np.array_equal(out.to_dense(), dense):
            raise ParameterError(f"matrix has entries outside half-bandwidth {k}")
        return out

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n, self.n))
        for off in range(-self.k, self.k + 1):
            j0, j1 = max(0, -off), self.n - max(0, off)
            js = np.arange(j0, j1)
            dense[js + off, js] = self.ab[self.k + off, j0:j1]
        return dense

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n,):
            raise ParameterError(f"vector shape {v.shape} does not match n={self.n}")
        y = np.zeros(self.n)
        for off in range(-self.k, self.k + 1):
            j0, j1 = max(0, -off), self.n - max(0, off)
            y[j0 + off : j1 + off] += self.ab[self.k + off, j0:j1] * v[j0:j1]
        return y

    def __matmul__(self, v: np.ndarray) -> np.ndarray:
        return self.matvec(v)

    def scaled(self, c: float) -> "BandedMatrix":
        return BandedMatrix(self.n, self.k, c * self.ab)

    def plus(self, other: "BandedMatrix") -> "BandedMatrix":
        if other.n != self.n:
            raise ParameterError("cannot add banded matrices of different sizes")
        k = max(self.k, other.k)
        ab = np.zeros((2 * k + 1, self.n))
        ab[k - self.k : k + self.k + 1] += self.ab
        ab[k - other.k : k + other.k + 1] += other.ab
        return BandedMatrix(self.n, k, ab)

    def __add__(self, other: "BandedMatrix") -> "BandedMatrix":
        return self.plus(other)

    def plus_identity(self, c: float = 1.0) -> "BandedMatrix":
        """Return self + c*I."""
        ab = self.ab.copy()
        ab[self.k] += c
        return BandedMatrix(self.n, self.k, ab)
