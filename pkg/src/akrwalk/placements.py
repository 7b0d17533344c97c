"""
Marked-location configurations.

Five kinds are supported:

``single``       one marked location at ``anchor``.
``distributed``  ``k`` locations on a square lattice with spacing ``n / sqrt(k)``.
``block``        a filled ``sqrt(k) x sqrt(k)`` square with its corner at ``anchor``.
``perimeter``    only the boundary ring of that square, ``4 (sqrt(k) - 1)`` cells.
``custom``       an explicit coordinate list.

Squares may wrap around the torus edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .walk import ConfigurationError, GridGeometry, MarkedSet

__all__ = [
    "KINDS",
    "PlacementSpec",
    "generate",
    "interior",
    "perimeter_cells",
    "block_side",
    "interior_count",
]

KINDS = ("single", "distributed", "block", "perimeter", "custom")


def _isqrt_exact(k: int) -> int | None:
    r = math.isqrt(k)
    return r if r * r == k else None


@dataclass(frozen=True)
class PlacementSpec:
    kind: str
    k: int = 1
    anchor: tuple[int, int] = (0, 0)
    locations: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(
                f"unknown placement kind {self.kind!r}; expected one of {', '.join(KINDS)}"
            )
        object.__setattr__(self, "anchor", (int(self.anchor[0]), int(self.anchor[1])))
        if self.kind == "custom":
            if self.locations is None:
                raise ConfigurationError("custom placement needs an explicit location list")
            locs = tuple(sorted({(int(x), int(y)) for x, y in self.locations}))
            object.__setattr__(self, "locations", locs)
            object.__setattr__(self, "k", len(locs))
            return
        if self.locations is not None:
            raise ConfigurationError(
                f"explicit locations given for a {self.kind!r} placement; use kind 'custom'"
            )
        if self.kind == "single":
            object.__setattr__(self, "k", 1)
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise ConfigurationError(f"k must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))

    @property
    def side(self) -> int | None:
        """``sqrt(k)`` for square-based kinds, else ``None``."""
        if self.kind in ("distributed", "block", "perimeter"):
            return _isqrt_exact(self.k)
        return None

    def validate(self, geometry: GridGeometry) -> None:
        """Raise :class:`ConfigurationError` naming the violated constraint."""
        n = geometry.n
        if not geometry.in_range(*self.anchor):
            raise ConfigurationError(f"anchor {self.anchor} is outside the {n}x{n} grid")
        if self.kind == "custom":
            bad = [xy for xy in self.locations if not geometry.in_range(*xy)]
            if bad:
                raise ConfigurationError(f"custom locations {bad} are outside the {n}x{n} grid")
            return
        if self.kind == "single":
            return
        side = self.side
        if side is None:
            raise ConfigurationError(f"{self.kind} placement needs k to be a perfect square, got k={self.k}")
        if self.kind == "distributed":
            if n % side:
                raise ConfigurationError(
                    f"distributed placement needs sqrt(k)={side} to divide n={n}"
                )
            return
        if side > n:
            raise ConfigurationError(f"{self.kind} side sqrt(k)={side} exceeds grid side n={n}")
        if self.kind == "perimeter" and side < 2:
            raise ConfigurationError("perimeter placement needs sqrt(k) >= 2")

    def with_k(self, k: int) -> "PlacementSpec":
        return PlacementSpec(self.kind, k, self.anchor, self.locations)

    def with_anchor(self, anchor: tuple[int, int]) -> "PlacementSpec":
        return PlacementSpec(self.kind, self.k, anchor, self.locations)

    def label(self) -> str:
        if self.kind == "custom":
            return f"custom{len(self.locations)}"
        if self.kind == "single":
            return f"single_x{self.anchor[0]}_y{self.anchor[1]}"
        return f"{self.kind}_k{self.k}_x{self.anchor[0]}_y{self.anchor[1]}"


def _square(spec: PlacementSpec, geometry: GridGeometry) -> list[tuple[int, int, bool]]:
    # (x, y, on_boundary) for every cell of the sqrt(k) square
    side = spec.side
    ax, ay = spec.anchor
    cells = []
    for b in range(side):
        for a in range(side):
            edge = a in (0, side - 1) or b in (0, side - 1)
            cells.append((*geometry.wrap(ax + a, ay + b), edge))
    return cells


def generate(spec: PlacementSpec, geometry: GridGeometry) -> MarkedSet:
    spec.validate(geometry)
    if spec.kind == "single":
        return MarkedSet([spec.anchor])
    if spec.kind == "custom":
        return MarkedSet(spec.locations)
    if spec.kind == "distributed":
        side = spec.side
        gap = geometry.n // side
        ax, ay = spec.anchor
        return MarkedSet(
            geometry.wrap(ax + a * gap, ay + b * gap) for a in range(side) for b in range(side)
        )
    cells = _square(spec, geometry)
    if spec.kind == "block":
        return MarkedSet((x, y) for x, y, _ in cells)
    return MarkedSet((x, y) for x, y, edge in cells if edge)


def _require_square_kind(spec: PlacementSpec) -> None:
    if spec.kind not in ("block", "perimeter"):
        raise ConfigurationError(f"expected a block or perimeter placement, got {spec.kind!r}")


def interior(spec: PlacementSpec, geometry: GridGeometry) -> frozenset[tuple[int, int]]:
    """Cells strictly inside the square, ``(sqrt(k) - 2)**2`` of them."""
    _require_square_kind(spec)
    spec.validate(geometry)
    return frozenset((x, y) for x, y, edge in _square(spec, geometry) if not edge)


def perimeter_cells(spec: PlacementSpec, geometry: GridGeometry) -> frozenset[tuple[int, int]]:
    _require_square_kind(spec)
    spec.validate(geometry)
    return frozenset((x, y) for x, y, edge in _square(spec, geometry) if edge)


def block_side(k: int) -> int:
    side = _isqrt_exact(k)
    if side is None:
        raise ConfigurationError(f"k must be a perfect square, got k={k}")
    return side


def interior_count(k: int) -> int:
    """Basis states of the inner part of a filled square: ``4(k - 3 sqrt(k) + 2)``.

    Zero for ``k in (1, 4)``.
    """
    side = block_side(k)
    if side < 2:
        return 0
    return 4 * (side - 2) ** 2 + 4 * (side - 2)
