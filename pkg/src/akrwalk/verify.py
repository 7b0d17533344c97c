"""
Checkers for the exact and bounded claims about multi-marked searches.

Every checker returns a :class:`Report` holding one :class:`ClaimResult` per
claim. A claim's ``margin`` is ``bound - worst_value``; a negative margin
means the claim failed.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.typing import NDArray

from .analysis import MetricRecorder, RunResult, default_horizon, run
from .placements import PlacementSpec, generate, interior, interior_count, perimeter_cells
from .walk import (
    ConfigurationError,
    Direction,
    GridGeometry,
    MarkedSet,
    WalkState,
    evolve,
)

__all__ = [
    "EXACT_TOL",
    "BOUND_SLACK",
    "ClaimResult",
    "Report",
    "StatePartition",
    "mutual_pairs",
    "verify_adjacent_pair_invariant",
    "verify_all_adjacent_pairs",
    "state_partition",
    "partition_state",
    "compare_filled_vs_perimeter",
    "verify_distributed_periodicity",
    "compare_grouped_vs_distributed",
    "verification_suite",
]

EXACT_TOL = 1e-12
BOUND_SLACK = 1e-10


@dataclass
class ClaimResult:
    claim: str
    statement: str
    passed: bool
    worst_t: int | None
    worst_value: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound - self.worst_value

    def to_dict(self) -> dict:
        d = asdict(self)
        d["margin"] = self.margin
        return d

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        where = "" if self.worst_t is None else f" worst_t={self.worst_t}"
        return f"{status} {self.claim}: {self.statement} (worst={self.worst_value:.3e}, bound={self.bound:.3e}{where})"


@dataclass
class Report:
    title: str
    params: dict
    claims: list[ClaimResult] = field(default_factory=list)
    info: dict = field(default_factory=dict)
    runs: dict[str, RunResult] = field(default_factory=dict, repr=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def claim(self, name: str) -> ClaimResult:
        for c in self.claims:
            if c.claim == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "params": self.params,
            "passed": self.passed,
            "claims": [c.to_dict() for c in self.claims],
            "info": self.info,
        }

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False, default=_jsonable) + "\n"

    def summary(self) -> str:
        lines = [f"{self.title} {self.params}"]
        lines += ["  " + c.line() for c in self.claims]
        lines += [f"  {k}: {v}" for k, v in self.info.items()]
        return "\n".join(lines)


def _jsonable(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _max_claim(name, statement, deviations, bound) -> ClaimResult:
    # deviations[t] is the worst per-step deviation; smaller is better
    deviations = np.asarray(deviations)
    t = int(np.argmax(deviations))
    worst = float(deviations[t])
    return ClaimResult(name, statement, worst <= bound, t, worst, bound)


# -- adjacent marked pairs -------------------------------------------------


def mutual_pairs(geometry: GridGeometry, marked: MarkedSet) -> NDArray[np.intp]:
    """Basis-index pairs ``(|a, d>, |b, opposite(d)>)`` for marked neighbors ``a``, ``b``.

    Each unordered pair appears once; shape ``(pairs, 2)``.
    """
    marked.validate(geometry)
    pairs = set()
    for x, y in marked:
        for d in Direction:
            nb = geometry.neighbor(x, y, d)
            if nb in marked:
                i = geometry.index(x, y, d)
                j = geometry.index(*nb, d.opposite)
                pairs.add((min(i, j), max(i, j)))
    return np.array(sorted(pairs), dtype=np.intp).reshape(-1, 2)


def _sign_invariant_deviation(amps, idx, t, scale) -> float:
    expected = (-1.0) ** t * scale
    return float(np.max(np.abs(amps[idx] - expected))) if idx.size else 0.0


def verify_adjacent_pair_invariant(
    geometry: GridGeometry,
    marked: MarkedSet,
    pair: tuple[tuple[int, int], tuple[int, int]],
    horizon: int | None = None,
    tol: float = EXACT_TOL,
) -> Report:
    """Check the two mutually pointing amplitudes of one adjacent marked pair.

    Both must equal ``(-1)**t / sqrt(4N)`` at every step.
    """
    a, b = (geometry.wrap(*pair[0]), geometry.wrap(*pair[1]))
    for loc in (a, b):
        if loc not in marked:
            raise ConfigurationError(f"location {loc} is not marked")
    dirs = [d for d in Direction if geometry.neighbor(*a, d) == b]
    if not dirs or a == b:
        raise ConfigurationError(f"locations {a} and {b} are not adjacent")
    idx = np.array(
        [geometry.index(*a, d) for d in dirs] + [geometry.index(*b, d.opposite) for d in dirs]
    )
    return _pair_report(geometry, marked, idx, horizon, tol, {"pair": [list(a), list(b)]})


def verify_all_adjacent_pairs(
    geometry: GridGeometry,
    marked: MarkedSet,
    horizon: int | None = None,
    tol: float = EXACT_TOL,
) -> Report:
    """Check the sign invariant on every mutually pointing adjacent marked pair."""
    idx = mutual_pairs(geometry, marked).ravel()
    return _pair_report(geometry, marked, idx, horizon, tol, {"pairs": int(idx.size // 2)})


def _pair_report(geometry, marked, idx, horizon, tol, extra) -> Report:
    if horizon is None:
        horizon = default_horizon(geometry)
    scale = 1.0 / math.sqrt(geometry.dim)
    dev = np.empty(horizon + 1)
    for t, amps in evolve(geometry, marked, horizon):
        dev[t] = _sign_invariant_deviation(amps, idx, t, scale)
    claim = _max_claim(
        "adjacent-pair-invariant",
        "mutually pointing amplitudes of adjacent marked locations equal (-1)^t/sqrt(4N)",
        dev,
        tol,
    )
    params = {"n": geometry.n, "marked": len(marked), "horizon": horizon, **extra}
    return Report("adjacent-pair", params, [claim])


# -- state partition -------------------------------------------------------


@dataclass(frozen=True)
class StatePartition:
    """Disjoint basis-index sets around a marked square.

    ``per``: perimeter states pointing to another perimeter location.
    ``inner``: interior states plus perimeter states pointing inwards.
    ``out``: everything else.
    """

    out: NDArray[np.intp]
    inner: NDArray[np.intp]
    per: NDArray[np.intp]

    def split(self, amplitudes) -> tuple[NDArray, NDArray, NDArray]:
        a = amplitudes.amplitudes if isinstance(amplitudes, WalkState) else np.asarray(amplitudes)
        return a[self.out], a[self.inner], a[self.per]


def state_partition(geometry: GridGeometry, spec: PlacementSpec) -> StatePartition:
    if spec.kind not in ("block", "perimeter"):
        raise ConfigurationError(f"partition needs a block or perimeter placement, got {spec.kind!r}")
    if spec.side is None or spec.side < 2:
        raise ConfigurationError(f"partition needs sqrt(k) >= 2, got k={spec.k}")
    inside = interior(spec, geometry)
    ring = perimeter_cells(spec, geometry)
    labels = np.zeros(geometry.dim, dtype=np.int8)  # 0 out, 1 inner, 2 per
    for x, y in inside:
        for d in Direction:
            labels[geometry.index(x, y, d)] = 1
    for x, y in ring:
        for d in Direction:
            nb = geometry.neighbor(x, y, d)
            if nb in inside:
                labels[geometry.index(x, y, d)] = 1
            elif nb in ring:
                labels[geometry.index(x, y, d)] = 2
    return StatePartition(
        out=np.flatnonzero(labels == 0),
        inner=np.flatnonzero(labels == 1),
        per=np.flatnonzero(labels == 2),
    )


def partition_state(state: WalkState, spec: PlacementSpec) -> dict[str, NDArray[np.float64]]:
    """Project a state onto the out / inner / per parts of ``spec``'s square."""
    out, inner, per = state_partition(state.geometry, spec).split(state)
    return {"out": out, "inner": inner, "per": per}


# -- filled vs perimeter ---------------------------------------------------


def compare_filled_vs_perimeter(
    geometry: GridGeometry,
    k: int,
    horizon: int | None = None,
    anchor: tuple[int, int] = (0, 0),
    tol: float = EXACT_TOL,
    slack: float = BOUND_SLACK,
) -> Report:
    """Run filled and perimeter squares in lockstep and check the five claims.

    per-equal, out-equal (to ``tol``), overlap lower bound ``1 - 2c/4N``,
    marked-probability gap ``c/4N`` (both with ``slack``), and peak steps
    differing by at most one.
    """
    filled = PlacementSpec("block", k, anchor)
    ring = PlacementSpec("perimeter", k, anchor)
    filled.validate(geometry)
    ring.validate(geometry)
    if horizon is None:
        horizon = default_horizon(geometry)
    part = state_partition(geometry, filled)
    c = interior_count(k)
    dim = geometry.dim
    m_filled, m_ring = generate(filled, geometry), generate(ring, geometry)
    rec_f = MetricRecorder(geometry, m_filled, horizon)
    rec_r = MetricRecorder(geometry, m_ring, horizon)
    per_dev = np.empty(horizon + 1)
    out_dev = np.empty(horizon + 1)
    mutual = np.empty(horizon + 1)
    inner_overlap = np.empty(horizon + 1)
    identical = True
    for (t, psi), (_, phi) in zip(evolve(geometry, m_filled, horizon), evolve(geometry, m_ring, horizon)):
        rec_f.record(t, psi)
        rec_r.record(t, phi)
        diff = np.abs(psi - phi)
        per_dev[t] = diff[part.per].max() if part.per.size else 0.0
        out_dev[t] = diff[part.out].max() if part.out.size else 0.0
        mutual[t] = np.dot(psi, phi)
        inner_overlap[t] = np.dot(psi[part.inner], phi[part.inner])
        identical = identical and bool(np.array_equal(psi, phi))
    run_f = rec_f.result(kind="block", k=k, anchor=list(anchor))
    run_r = rec_r.result(kind="perimeter", k=k, anchor=list(anchor))

    overlap_bound = 1.0 - 2.0 * c / dim
    gap_bound = c / dim
    dt = abs(run_f.stopping.t_peak - run_r.stopping.t_peak)
    claims = [
        _max_claim("per-parts-equal", "perimeter-to-perimeter parts of both states coincide", per_dev, tol),
        _max_claim("out-parts-equal", "outer parts of both states coincide", out_dev, tol),
        # shortfall below 1 must stay within 2c/4N
        _max_claim(
            "overlap-bound",
            "<psi(t)|phi(t)> >= 1 - 2c(k)/(4N)",
            1.0 - mutual,
            1.0 - overlap_bound + slack,
        ),
        _max_claim(
            "probability-gap",
            "|p_marked(filled) - p_marked(perimeter)| <= c(k)/(4N)",
            np.abs(run_f.p_marked - run_r.p_marked),
            gap_bound + slack,
        ),
        ClaimResult(
            "peak-step-gap",
            "|t_peak(filled) - t_peak(perimeter)| <= 1",
            dt <= 1,
            None,
            float(dt),
            1.0,
        ),
    ]
    info = {
        "c_k": c,
        "overlap_bound_value": overlap_bound,
        "probability_gap_bound": gap_bound,
        "min_mutual_overlap": float(mutual.min()),
        "inner_overlap_range": [float(inner_overlap.min()), float(inner_overlap.max())],
        "states_identical": identical,
        "t_peak_filled": run_f.stopping.t_peak,
        "t_peak_perimeter": run_r.stopping.t_peak,
        "p_peak_filled": run_f.stopping.p_peak,
        "p_peak_perimeter": run_r.stopping.p_peak,
        "t_peak_global_filled": run_f.stopping.t_peak_global,
        "t_peak_global_perimeter": run_r.stopping.t_peak_global,
    }
    params = {"n": geometry.n, "k": k, "anchor": list(anchor), "horizon": horizon}
    return Report("filled-vs-perimeter", params, claims, info, {"filled": run_f, "perimeter": run_r})


# -- distributed placement -------------------------------------------------


def verify_distributed_periodicity(
    geometry: GridGeometry,
    k: int,
    horizon: int | None = None,
    anchor: tuple[int, int] = (0, 0),
    tol: float = EXACT_TOL,
) -> Report:
    """Check lattice periodicity of the distributed run and its reduction to one cell.

    The region ``[0, p) x [0, p)`` (``p = n / sqrt(k)``) of the distributed
    state, scaled by ``sqrt(k)``, is compared with an independent
    single-marked run on the ``p x p`` grid.
    """
    spec = PlacementSpec("distributed", k, anchor)
    spec.validate(geometry)
    if horizon is None:
        horizon = default_horizon(geometry)
    side = spec.side
    n = geometry.n
    p = n // side
    marked = generate(spec, geometry)
    small = GridGeometry(p) if p >= 2 else None
    small_marked = MarkedSet([(anchor[0] % p, anchor[1] % p)])

    rec = MetricRecorder(geometry, marked, horizon)
    period_dev = np.empty(horizon + 1)
    reduce_dev = np.zeros(horizon + 1)
    small_iter = evolve(small, small_marked, horizon) if small else None
    for t, amps in evolve(geometry, marked, horizon):
        rec.record(t, amps)
        g = amps.reshape(n, n, 4)
        period_dev[t] = max(
            np.abs(g - np.roll(g, p, axis=0)).max(),
            np.abs(g - np.roll(g, p, axis=1)).max(),
        )
        if small_iter is not None:
            _, s = next(small_iter)
            reduce_dev[t] = np.abs(g[:p, :p, :] * side - s.reshape(p, p, 4)).max()
    run_d = rec.result(kind="distributed", k=k, anchor=list(anchor))
    claims = [
        _max_claim("lattice-periodicity", f"amplitudes repeat with period n/sqrt(k) = {p}", period_dev, tol),
    ]
    info = {"period": p, "t_peak_distributed": run_d.stopping.t_peak}
    runs = {"distributed": run_d}
    if small is not None:
        run_s = run(small, small_marked, horizon)
        runs["single_cell"] = run_s
        claims.append(
            _max_claim(
                "cell-reduction",
                f"one cell evolves like a single-marked {p}x{p} walk (amplitudes x sqrt(k))",
                reduce_dev,
                tol,
            )
        )
        dt = abs(run_d.stopping.t_peak - run_s.stopping.t_peak)
        claims.append(
            ClaimResult("cell-peak-step", f"t_peak equals that of the single-marked {p}x{p} walk",
                        dt == 0, None, float(dt), 0.0)
        )
        info["t_peak_single_cell"] = run_s.stopping.t_peak
        info["t_peak_global_distributed"] = run_d.stopping.t_peak_global
        info["t_peak_global_single_cell"] = run_s.stopping.t_peak_global
    params = {"n": n, "k": k, "anchor": list(anchor), "horizon": horizon}
    return Report("distributed-periodicity", params, claims, info, runs)


# -- grouped vs distributed ------------------------------------------------


@dataclass
class GapReport:
    n: int
    k: int
    horizon: int
    grouped: RunResult = field(repr=False)
    distributed: RunResult = field(repr=False)

    @property
    def step_ratio(self) -> float:
        td = self.distributed.stopping.t_peak
        tg = self.grouped.stopping.t_peak
        if td == 0:
            return 1.0 if tg == 0 else math.inf
        return tg / td

    @property
    def runs(self) -> dict[str, RunResult]:
        return {"grouped": self.grouped, "distributed": self.distributed}

    def to_dict(self) -> dict:
        out = {"n": self.n, "k": self.k, "horizon": self.horizon, "step_ratio": self.step_ratio}
        for name, r in self.runs.items():
            out[name] = r.stopping.to_dict()
        return out

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def summary(self) -> str:
        lines = [f"grouped-vs-distributed n={self.n} k={self.k} horizon={self.horizon}"]
        for name, r in self.runs.items():
            s = r.stopping
            lines.append(
                f"  {name:<12} t_peak={s.t_peak} p_peak={s.p_peak:.6f} "
                f"t_overlap_zero={s.t_overlap_zero} cost={s.cost:.2f}"
            )
        lines.append(f"  step ratio grouped/distributed = {self.step_ratio:.4f}")
        return "\n".join(lines)


def compare_grouped_vs_distributed(
    geometry: GridGeometry,
    k: int,
    horizon: int | None = None,
    anchor: tuple[int, int] = (0, 0),
) -> GapReport:
    """Run a filled square and the evenly spread lattice of ``k`` marks."""
    grouped = PlacementSpec("block", k, anchor)
    spread = PlacementSpec("distributed", k, anchor)
    grouped.validate(geometry)
    spread.validate(geometry)
    if horizon is None:
        horizon = default_horizon(geometry)
    run_g = run(geometry, generate(grouped, geometry), horizon)
    run_d = run(geometry, generate(spread, geometry), horizon)
    run_g.params.update(kind="block", k=k, anchor=list(anchor))
    run_d.params.update(kind="distributed", k=k, anchor=list(anchor))
    return GapReport(geometry.n, k, horizon, run_g, run_d)


def verification_suite(
    geometry: GridGeometry, spec: PlacementSpec, horizon: int | None = None
) -> list[Report]:
    """Every checker that applies to ``spec``.

    Adjacent-pair invariant whenever two marked locations touch, lattice
    periodicity for distributed placements, and the filled-vs-perimeter
    claims for squares with ``sqrt(k) >= 2``.
    """
    spec.validate(geometry)
    marked = generate(spec, geometry)
    reports = []
    if mutual_pairs(geometry, marked).size:
        reports.append(verify_all_adjacent_pairs(geometry, marked, horizon))
    if spec.kind == "distributed":
        reports.append(verify_distributed_periodicity(geometry, spec.k, horizon, spec.anchor))
    if spec.kind in ("block", "perimeter") and spec.side >= 2:
        reports.append(compare_filled_vs_perimeter(geometry, spec.k, horizon, spec.anchor))
    return reports
