"""
Grid geometry, walk states and the query / coin / shift step.

Basis layout
------------
A walk state on an ``n x n`` torus is a dense float64 vector of length ``4N``
(``N = n**2``). The basis state ``|x, y, d>`` lives at index

    4 * (y * n + x) + d

with directions ordered ``UP, DOWN, LEFT, RIGHT``. Reshaping the vector to
``(n, n, 4)`` therefore gives an array indexed ``[y, x, d]``. ``x`` is the
column (moved by LEFT/RIGHT), ``y`` the row (moved by UP/DOWN), and UP
decrements ``y``.

All operators are real orthogonal, so amplitudes are stored as reals only.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "ConfigurationError",
    "Direction",
    "GridGeometry",
    "MarkedSet",
    "WalkState",
    "uniform_state",
    "apply_query",
    "apply_coin",
    "apply_shift",
    "step",
    "evolve",
    "write_snapshot",
    "read_snapshot",
]


class ConfigurationError(ValueError):
    """Raised for invalid grids, marked sets or placement parameters."""


class Direction(IntEnum):
    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3

    @property
    def opposite(self) -> "Direction":
        return _OPPOSITE[self]

    @property
    def delta(self) -> tuple[int, int]:
        """Coordinate offset ``(dx, dy)`` of one move in this direction."""
        return _DELTA[self]

    @property
    def symbol(self) -> str:
        return "⇑⇓⇐⇒"[self]


_OPPOSITE = {
    Direction.UP: Direction.DOWN,
    Direction.DOWN: Direction.UP,
    Direction.LEFT: Direction.RIGHT,
    Direction.RIGHT: Direction.LEFT,
}
_DELTA = {
    Direction.UP: (0, -1),
    Direction.DOWN: (0, 1),
    Direction.LEFT: (-1, 0),
    Direction.RIGHT: (1, 0),
}


@dataclass(frozen=True)
class GridGeometry:
    """Periodic ``n x n`` grid with ``N = n**2`` locations."""

    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise ConfigurationError(f"grid side must be an integer, got {self.n!r}")
        if self.n < 2:
            raise ConfigurationError(f"grid side must be >= 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def N(self) -> int:
        return self.n * self.n

    @property
    def dim(self) -> int:
        """Number of basis states, ``4N``."""
        return 4 * self.N

    def wrap(self, x: int, y: int) -> tuple[int, int]:
        return x % self.n, y % self.n

    def neighbor(self, x: int, y: int, d: Direction) -> tuple[int, int]:
        dx, dy = Direction(d).delta
        return self.wrap(x + dx, y + dy)

    def site(self, x: int, y: int) -> int:
        return y * self.n + x

    def index(self, x: int, y: int, d: Direction) -> int:
        return 4 * (y * self.n + x) + int(d)

    def unindex(self, i: int) -> tuple[int, int, Direction]:
        site, d = divmod(int(i), 4)
        y, x = divmod(site, self.n)
        return x, y, Direction(d)

    def in_range(self, x: int, y: int) -> bool:
        return 0 <= x < self.n and 0 <= y < self.n

    @cached_property
    def shift_permutation(self) -> NDArray[np.intp]:
        """Gather indices of the flip-flop shift: ``shifted = amps[perm]``.

        The shift is an involution, so the same array also serves as the
        scatter map.
        """
        n = self.n
        y, x = np.divmod(np.arange(self.N), n)
        perm = np.empty((self.N, 4), dtype=np.intp)
        # amplitude at (x, y, d) arrives from neighbor(x, y, d) pointing back
        for d in Direction:
            dx, dy = d.delta
            src = ((y + dy) % n) * n + (x + dx) % n
            perm[:, d] = 4 * src + d.opposite
        perm = perm.ravel()
        perm.setflags(write=False)
        return perm


@dataclass(frozen=True)
class MarkedSet:
    """Set of marked ``(x, y)`` locations.

    Coordinates are range-checked against a geometry when the set is used
    (:meth:`site_mask`), not at construction.
    """

    locations: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __init__(self, locations: Iterable[tuple[int, int]] = ()):
        locs = frozenset((int(x), int(y)) for x, y in locations)
        object.__setattr__(self, "locations", locs)

    def __len__(self) -> int:
        return len(self.locations)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.locations))

    def __contains__(self, xy) -> bool:
        return tuple(xy) in self.locations

    def validate(self, geometry: GridGeometry) -> None:
        bad = [xy for xy in sorted(self.locations) if not geometry.in_range(*xy)]
        if bad:
            raise ConfigurationError(
                f"marked locations {bad} are outside the {geometry.n}x{geometry.n} grid"
            )

    def site_mask(self, geometry: GridGeometry) -> NDArray[np.bool_]:
        """Boolean mask of length ``N`` over sites ``y * n + x``."""
        self.validate(geometry)
        mask = np.zeros(geometry.N, dtype=bool)
        for x, y in self.locations:
            mask[geometry.site(x, y)] = True
        return mask

    def basis_mask(self, geometry: GridGeometry) -> NDArray[np.bool_]:
        """Boolean mask of length ``4N`` over basis indices."""
        return np.repeat(self.site_mask(geometry), 4)

    def translated(self, dx: int, dy: int, geometry: GridGeometry) -> "MarkedSet":
        return MarkedSet(geometry.wrap(x + dx, y + dy) for x, y in self.locations)

    def digest(self) -> str:
        """Stable sha256 hex digest of the sorted coordinate list."""
        text = ";".join(f"{x},{y}" for x, y in sorted(self.locations))
        return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True, eq=False)
class WalkState:
    """Immutable real amplitude vector over the ``(x, y, d)`` basis."""

    geometry: GridGeometry
    amplitudes: NDArray[np.float64]

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.float64, copy=True)
        if amps.shape != (self.geometry.dim,):
            raise ConfigurationError(
                f"expected {self.geometry.dim} amplitudes, got shape {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def _wrap(cls, geometry: GridGeometry, amps: NDArray[np.float64]) -> "WalkState":
        # skips the defensive copy for arrays this module just allocated
        state = object.__new__(cls)
        amps.setflags(write=False)
        object.__setattr__(state, "geometry", geometry)
        object.__setattr__(state, "amplitudes", amps)
        return state

    def amplitude(self, x: int, y: int, d: Direction) -> float:
        return float(self.amplitudes[self.geometry.index(x, y, d)])

    def grid(self) -> NDArray[np.float64]:
        """Read-only ``(n, n, 4)`` view indexed ``[y, x, d]``."""
        n = self.geometry.n
        return self.amplitudes.reshape(n, n, 4)

    def norm_squared(self) -> float:
        return float(np.dot(self.amplitudes, self.amplitudes))


def uniform_state(geometry: GridGeometry) -> WalkState:
    amps = np.full(geometry.dim, 1.0 / math.sqrt(geometry.dim))
    return WalkState._wrap(geometry, amps)


def _check_geometry(state: WalkState, geometry: GridGeometry | None = None):
    if geometry is not None and state.geometry != geometry:
        raise ConfigurationError("state and marked set use different geometries")


def apply_query(state: WalkState, marked: MarkedSet) -> WalkState:
    """Negate all four direction amplitudes at every marked location."""
    mask = marked.basis_mask(state.geometry)
    amps = state.amplitudes.copy()
    amps[mask] = -amps[mask]
    return WalkState._wrap(state.geometry, amps)


def _diffuse(a: NDArray[np.float64]) -> NDArray[np.float64]:
    # a has shape (sites, 4); the fixed summation order keeps results
    # independent of how numpy chooses to reduce
    s = a[:, 0] + a[:, 1] + a[:, 2] + a[:, 3]
    return 0.5 * s[:, None] - a


def apply_coin(state: WalkState, marked: MarkedSet) -> WalkState:
    """Grover diffusion at unmarked locations, identity at marked ones."""
    g = state.geometry
    site_mask = marked.site_mask(g)
    a = state.amplitudes.reshape(g.N, 4)
    out = _diffuse(a)
    out[site_mask] = a[site_mask]
    return WalkState._wrap(g, out.ravel())


def apply_shift(state: WalkState) -> WalkState:
    """Flip-flop shift: move one site along the direction, then reverse it."""
    g = state.geometry
    return WalkState._wrap(g, state.amplitudes[g.shift_permutation])


def _step_array(
    amps: NDArray[np.float64],
    site_mask: NDArray[np.bool_],
    perm: NDArray[np.intp],
) -> NDArray[np.float64]:
    # fused Q, C, S; bit-identical to applying the three factors in turn
    a = amps.reshape(-1, 4)
    out = _diffuse(a)
    out[site_mask] = -a[site_mask]
    return out.ravel()[perm]


def step(state: WalkState, marked: MarkedSet) -> WalkState:
    """One search step: shift(coin(query(state)))."""
    g = state.geometry
    amps = _step_array(state.amplitudes, marked.site_mask(g), g.shift_permutation)
    return WalkState._wrap(g, amps)


def evolve(
    geometry: GridGeometry,
    marked: MarkedSet,
    steps: int,
    initial: WalkState | None = None,
) -> Iterator[tuple[int, NDArray[np.float64]]]:
    """Yield ``(t, amplitudes)`` for ``t = 0 .. steps``.

    The yielded arrays are fresh and read-only; holding on to them is safe.
    """
    if steps < 0:
        raise ConfigurationError(f"steps must be >= 0, got {steps}")
    state = uniform_state(geometry) if initial is None else initial
    _check_geometry(state, geometry)
    site_mask = marked.site_mask(geometry)
    perm = geometry.shift_permutation
    amps = state.amplitudes
    yield 0, amps
    for t in range(1, steps + 1):
        amps = _step_array(amps, site_mask, perm)
        amps.setflags(write=False)
        yield t, amps


def write_snapshot(path, state: WalkState, marked: MarkedSet, t: int) -> None:
    """Write a textual snapshot: a 4-line header then one amplitude per line.

    Amplitudes use ``repr`` formatting, so a round trip is exact.
    """
    lines = [
        "# akrwalk-snapshot v1",
        f"n = {state.geometry.n}",
        f"t = {t}",
        f"marked_sha256 = {marked.digest()}",
    ]
    lines.extend(repr(float(a)) for a in state.amplitudes)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_snapshot(path) -> tuple[WalkState, int, str]:
    """Inverse of :func:`write_snapshot`; returns ``(state, t, marked_sha256)``."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("# akrwalk-snapshot"):
        raise ConfigurationError(f"{path}: not a walk snapshot")
    header = {}
    for line in lines[1:4]:
        key, _, value = line.partition("=")
        header[key.strip()] = value.strip()
    geometry = GridGeometry(int(header["n"]))
    amps = np.array([float(v) for v in lines[4:]])
    return WalkState(geometry, amps), int(header["t"]), header["marked_sha256"]
