"""
Per-step metrics, trajectories and stopping-point detection.

Two stopping notions are reported for every run:

``t_overlap_zero``
    The first step at which the overlap with the initial state is within
    ``threshold`` of zero, or the step nearest its first sign change.

``t_peak``
    The earliest step maximizing the marked probability inside the first
    search window ``[0, min(horizon, 2 * t_overlap_zero)]``. The overlap
    behaves like ``cos(theta t)``, so after ``2 * t_overlap_zero`` the walk
    rotates back towards the initial state and later maxima are revivals,
    not extra search progress. The earliest maximizer over the whole
    horizon is kept as ``t_peak_global``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.typing import NDArray

from .walk import ConfigurationError, GridGeometry, MarkedSet, WalkState, evolve

__all__ = [
    "OVERLAP_THRESHOLD",
    "StepMetrics",
    "StoppingReport",
    "RunResult",
    "default_horizon",
    "overlap_with_initial",
    "marked_probability",
    "detect_stopping",
    "run",
]

OVERLAP_THRESHOLD = 0.01


def default_horizon(geometry: GridGeometry) -> int:
    """``ceil(2 sqrt(N ln N))`` steps."""
    N = geometry.N
    return math.ceil(2.0 * math.sqrt(N * math.log(N)))


def _amps(state) -> NDArray[np.float64]:
    return state.amplitudes if isinstance(state, WalkState) else np.asarray(state)


def overlap_with_initial(state) -> float:
    """Inner product with the uniform initial state, ``sum(amps) / sqrt(4N)``."""
    a = _amps(state)
    return float(a.sum() / math.sqrt(a.size))


def marked_probability(state, marked: MarkedSet, geometry: GridGeometry | None = None) -> float:
    if geometry is None:
        if not isinstance(state, WalkState):
            raise ConfigurationError("a geometry is required for raw amplitude arrays")
        geometry = state.geometry
    a = _amps(state)
    sel = a[marked.basis_mask(geometry)]
    return float(np.dot(sel, sel))


@dataclass(frozen=True)
class StepMetrics:
    t: int
    overlap: float
    p_marked: float
    norm_error: float


@dataclass(frozen=True)
class StoppingReport:
    t_overlap_zero: int | None
    t_peak: int
    p_peak: float
    window: int
    horizon: int
    t_peak_global: int
    p_peak_global: float

    @property
    def cost(self) -> float:
        """Classical-repetition cost ``t_peak / p_peak`` (steps per success)."""
        return self.t_peak / self.p_peak if self.p_peak > 0 else math.inf

    def to_dict(self) -> dict:
        d = asdict(self)
        d["cost"] = self.cost
        return d


def _first_overlap_zero(overlap: NDArray[np.float64], threshold: float) -> int | None:
    for t in range(1, len(overlap)):
        if abs(overlap[t]) < threshold:
            return t
        if (overlap[t] < 0) != (overlap[t - 1] < 0):
            return t - 1 if abs(overlap[t - 1]) < abs(overlap[t]) else t
    return None


def detect_stopping(
    overlap: NDArray[np.float64],
    p_marked: NDArray[np.float64],
    threshold: float = OVERLAP_THRESHOLD,
) -> StoppingReport:
    """Stopping points of a trajectory sampled at ``t = 0 .. horizon``."""
    overlap = np.asarray(overlap)
    p_marked = np.asarray(p_marked)
    horizon = len(p_marked) - 1
    t_zero = _first_overlap_zero(overlap, threshold)
    window = horizon if t_zero is None else min(horizon, 2 * t_zero)
    # np.argmax returns the first maximizer
    t_peak = int(np.argmax(p_marked[: window + 1]))
    t_glob = int(np.argmax(p_marked))
    return StoppingReport(
        t_overlap_zero=t_zero,
        t_peak=t_peak,
        p_peak=float(p_marked[t_peak]),
        window=window,
        horizon=horizon,
        t_peak_global=t_glob,
        p_peak_global=float(p_marked[t_glob]),
    )


@dataclass
class RunResult:
    """Trajectory of per-step metrics plus stopping points for one run."""

    n: int
    marked: MarkedSet
    overlap: NDArray[np.float64]
    p_marked: NDArray[np.float64]
    norm_error: NDArray[np.float64]
    stopping: StoppingReport
    params: dict = field(default_factory=dict)

    @property
    def horizon(self) -> int:
        return len(self.overlap) - 1

    @property
    def metrics(self) -> list[StepMetrics]:
        return [
            StepMetrics(t, float(o), float(p), float(e))
            for t, (o, p, e) in enumerate(zip(self.overlap, self.p_marked, self.norm_error))
        ]

    @property
    def manifest(self) -> dict:
        return {
            "n": self.n,
            "marked_count": len(self.marked),
            "marked_sha256": self.marked.digest(),
            "horizon": self.horizon,
            **self.params,
        }


class MetricRecorder:
    """Accumulates metrics step by step; used where several runs advance in lockstep."""

    def __init__(self, geometry: GridGeometry, marked: MarkedSet, horizon: int):
        self.geometry = geometry
        self.marked = marked
        self._mask = marked.basis_mask(geometry)
        self._scale = 1.0 / math.sqrt(geometry.dim)
        self.overlap = np.empty(horizon + 1)
        self.p_marked = np.empty(horizon + 1)
        self.norm_error = np.empty(horizon + 1)

    def record(self, t: int, amps: NDArray[np.float64]) -> None:
        sel = amps[self._mask]
        self.overlap[t] = amps.sum() * self._scale
        self.p_marked[t] = np.dot(sel, sel)
        self.norm_error[t] = abs(np.dot(amps, amps) - 1.0)

    def result(self, threshold: float = OVERLAP_THRESHOLD, **params) -> RunResult:
        return RunResult(
            n=self.geometry.n,
            marked=self.marked,
            overlap=self.overlap,
            p_marked=self.p_marked,
            norm_error=self.norm_error,
            stopping=detect_stopping(self.overlap, self.p_marked, threshold),
            params=params,
        )


def run(
    geometry: GridGeometry,
    marked: MarkedSet,
    horizon: int | None = None,
    threshold: float = OVERLAP_THRESHOLD,
) -> RunResult:
    """Evolve from the uniform state for ``horizon`` steps and record metrics.

    ``horizon`` defaults to :func:`default_horizon`.
    """
    if horizon is None:
        horizon = default_horizon(geometry)
    if horizon < 1:
        raise ConfigurationError(f"horizon must be >= 1, got {horizon}")
    rec = MetricRecorder(geometry, marked, horizon)
    for t, amps in evolve(geometry, marked, horizon):
        rec.record(t, amps)
    return rec.result(threshold)
