"""
Dense reference evolution for small grids.

The step operator is assembled as an explicit ``4N x 4N`` matrix product
``S @ C @ Q`` straight from the operator definitions. Nothing here calls the
fast kernels in :mod:`akrwalk.walk`; only the documented basis layout is
shared, so agreement between the two is evidence rather than tautology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .walk import ConfigurationError, GridGeometry, MarkedSet

__all__ = ["MAX_DENSE_DIM", "DenseSizeError", "DenseOperator", "build_step_matrix", "evolve_dense"]

MAX_DENSE_DIM = 4096

GROVER = 0.5 * np.array(
    [
        [-1.0, 1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0, 1.0],
        [1.0, 1.0, 1.0, -1.0],
    ]
)

UP, DOWN, LEFT, RIGHT = range(4)

# |i, j, d> -> |i + di, j + dj, d'>
SHIFT_TABLE = {
    UP: (0, -1, DOWN),
    DOWN: (0, 1, UP),
    LEFT: (-1, 0, RIGHT),
    RIGHT: (1, 0, LEFT),
}


class DenseSizeError(ConfigurationError):
    pass


@dataclass(frozen=True)
class DenseOperator:
    matrix: NDArray[np.float64]

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def orthogonality_error(self) -> float:
        m = self.matrix
        return float(np.abs(m.T @ m - np.eye(self.dimension)).max())

    def __matmul__(self, other):
        if isinstance(other, DenseOperator):
            return DenseOperator(self.matrix @ other.matrix)
        return self.matrix @ other


def _basis(n: int, i: int, j: int, d: int) -> int:
    return 4 * (j * n + i) + d


def _guard(n: int) -> int:
    dim = 4 * n * n
    if dim > MAX_DENSE_DIM:
        raise DenseSizeError(f"dense mode needs 4N <= {MAX_DENSE_DIM}; n={n} gives {dim}")
    return dim


def _marked_sites(n: int, marked: MarkedSet) -> set[tuple[int, int]]:
    sites = set(marked.locations)
    for i, j in sites:
        if not (0 <= i < n and 0 <= j < n):
            raise ConfigurationError(f"marked location {(i, j)} outside the {n}x{n} grid")
    return sites


def query_matrix(n: int, marked: MarkedSet) -> NDArray[np.float64]:
    dim = _guard(n)
    diag = np.ones(dim)
    for i, j in _marked_sites(n, marked):
        for d in range(4):
            diag[_basis(n, i, j, d)] = -1.0
    return np.diag(diag)


def coin_matrix(n: int, marked: MarkedSet) -> NDArray[np.float64]:
    dim = _guard(n)
    sites = _marked_sites(n, marked)
    c = np.zeros((dim, dim))
    for j in range(n):
        for i in range(n):
            block = np.eye(4) if (i, j) in sites else GROVER
            lo = _basis(n, i, j, 0)
            c[lo : lo + 4, lo : lo + 4] = block
    return c


def shift_matrix(n: int) -> NDArray[np.float64]:
    dim = _guard(n)
    s = np.zeros((dim, dim))
    for j in range(n):
        for i in range(n):
            for d, (di, dj, d2) in SHIFT_TABLE.items():
                src = _basis(n, i, j, d)
                dst = _basis(n, (i + di) % n, (j + dj) % n, d2)
                s[dst, src] = 1.0
    return s


def build_step_matrix(geometry: GridGeometry, marked: MarkedSet) -> DenseOperator:
    n = geometry.n
    return DenseOperator(shift_matrix(n) @ coin_matrix(n, marked) @ query_matrix(n, marked))


def evolve_dense(geometry: GridGeometry, marked: MarkedSet, steps: int) -> list[NDArray[np.float64]]:
    """Trajectory ``[psi(0), ..., psi(steps)]`` by repeated matrix-vector products."""
    u = build_step_matrix(geometry, marked).matrix
    dim = u.shape[0]
    psi = np.full(dim, 1.0 / np.sqrt(dim))
    out = [psi]
    for _ in range(steps):
        psi = u @ psi
        out.append(psi)
    return out
