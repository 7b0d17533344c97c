"""
Config-driven experiments and sweeps.

Config files are INI-style with four sections::

    [grid]
    n = 16
    horizon = 200            # optional, default ceil(2 sqrt(N ln N))

    [placement]
    kind = block             # single | distributed | block | perimeter | custom
    k = 9
    anchor = 0, 0
    locations = 1,1; 1,2     # custom only

    [sweep]
    n = 16, 32               # optional, overrides [grid] n
    k = 4, 16                # optional, overrides [placement] k
    mode = single            # single | filled-vs-perimeter | grouped-vs-distributed
    workers = 1

    [output]
    directory = results

Each run writes per-step metrics as CSV (``t,overlap,p_marked,norm_error``)
and its stopping or comparison report as JSON. ``manifest.json`` lists
every file written plus any skipped sweep points.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .analysis import RunResult, default_horizon, run
from .placements import PlacementSpec, generate
from .verify import compare_filled_vs_perimeter, compare_grouped_vs_distributed
from .walk import ConfigurationError, GridGeometry

__all__ = [
    "MODES",
    "ExperimentConfig",
    "Job",
    "RunManifest",
    "load_config",
    "parse_config",
    "expand_jobs",
    "execute",
    "write_metrics_csv",
    "read_metrics_csv",
]

MODES = ("single", "filled-vs-perimeter", "grouped-vs-distributed")
_MODE_ALIASES = {
    "filled-perimeter": "filled-vs-perimeter",
    "grouped-distributed": "grouped-vs-distributed",
}
CSV_COLUMNS = ("t", "overlap", "p_marked", "norm_error")


def normalize_mode(mode: str) -> str:
    mode = _MODE_ALIASES.get(mode, mode)
    if mode not in MODES:
        raise ConfigurationError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    return mode


@dataclass(frozen=True)
class ExperimentConfig:
    n: int | None = None
    placement: PlacementSpec | None = None
    horizon: int | None = None
    output_dir: str = "results"
    sweep_n: tuple[int, ...] = ()
    sweep_k: tuple[int, ...] = ()
    mode: str = "single"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mode", normalize_mode(self.mode))
        if self.horizon is not None and self.horizon < 1:
            raise ConfigurationError(f"horizon must be >= 1, got {self.horizon}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        if self.n is None and not self.sweep_n:
            raise ConfigurationError("no grid size: set [grid] n or [sweep] n")
        if self.placement is None:
            raise ConfigurationError("no placement given")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sweep_n"] = list(self.sweep_n)
        d["sweep_k"] = list(self.sweep_k)
        return d

    def digest(self) -> str:
        # output_dir and workers do not change results, so they are excluded
        d = self.to_dict()
        d.pop("output_dir")
        d.pop("workers")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(";", ",").split(",") if v.strip())
    except ValueError as exc:
        raise ConfigurationError(f"expected a comma-separated integer list, got {text!r}") from exc


def parse_pair(text: str) -> tuple[int, int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise ConfigurationError(f"expected 'x, y', got {text!r}")
    return vals


def parse_locations(text: str) -> tuple[tuple[int, int], ...]:
    """Parse ``"x,y; x,y; ..."``."""
    return tuple(parse_pair(chunk) for chunk in text.split(";") if chunk.strip())


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";;"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"{source}: {exc}") from exc
    known = {"grid", "placement", "sweep", "output"}
    unknown = set(cp.sections()) - known
    if unknown:
        raise ConfigurationError(f"{source}: unknown sections {sorted(unknown)}")

    def get(section, key, conv=str, default=None):
        if not cp.has_option(section, key):
            return default
        raw = cp.get(section, key)
        try:
            return conv(raw)
        except (ValueError, ConfigurationError) as exc:
            raise ConfigurationError(f"{source}: [{section}] {key} = {raw!r}: {exc}") from exc

    placement = None
    if cp.has_section("placement"):
        placement = PlacementSpec(
            kind=get("placement", "kind", default="single"),
            k=get("placement", "k", int, 1),
            anchor=get("placement", "anchor", parse_pair, (0, 0)),
            locations=get("placement", "locations", parse_locations),
        )
    return ExperimentConfig(
        n=get("grid", "n", int),
        placement=placement,
        horizon=get("grid", "horizon", int),
        output_dir=get("output", "directory", default="results"),
        sweep_n=get("sweep", "n", _int_list, ()),
        sweep_k=get("sweep", "k", _int_list, ()),
        mode=get("sweep", "mode", default="single"),
        workers=get("sweep", "workers", int, 1),
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, str(path))


@dataclass(frozen=True)
class Job:
    n: int
    mode: str
    spec: PlacementSpec
    horizon: int | None

    @property
    def tag(self) -> str:
        if self.mode == "single":
            return f"n{self.n}_{self.spec.label()}"
        return f"n{self.n}_{self.mode}_k{self.spec.k}_x{self.spec.anchor[0]}_y{self.spec.anchor[1]}"


def _check_job(job: Job) -> None:
    g = GridGeometry(job.n)
    if job.mode == "single":
        job.spec.validate(g)
    elif job.mode == "filled-vs-perimeter":
        PlacementSpec("block", job.spec.k, job.spec.anchor).validate(g)
        PlacementSpec("perimeter", job.spec.k, job.spec.anchor).validate(g)
    else:
        PlacementSpec("block", job.spec.k, job.spec.anchor).validate(g)
        PlacementSpec("distributed", job.spec.k, job.spec.anchor).validate(g)


def expand_jobs(config: ExperimentConfig) -> tuple[list[Job], list[dict]]:
    """Cartesian product of the sweep axes; invalid points are skipped with a reason."""
    ns = config.sweep_n or (config.n,)
    ks = config.sweep_k or (None,)
    jobs, skipped = [], []
    for n in ns:
        for k in ks:
            try:
                spec = config.placement if k is None else config.placement.with_k(k)
                if config.mode != "single":
                    # comparison modes build their own pair of placements
                    spec = PlacementSpec("block", spec.k, spec.anchor)
                job = Job(n, config.mode, spec, config.horizon)
                _check_job(job)
            except ConfigurationError as exc:
                skipped.append({"n": n, "k": k, "reason": str(exc)})
                continue
            jobs.append(job)
    return jobs, skipped


def write_metrics_csv(path, result: RunResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for t, (o, p, e) in enumerate(zip(result.overlap, result.p_marked, result.norm_error)):
            w.writerow((t, repr(float(o)), repr(float(p)), repr(float(e))))


def read_metrics_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return [{"t": int(r["t"]), **{c: float(r[c]) for c in CSV_COLUMNS[1:]}} for r in rows]


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def run_job(job: Job, out_dir: str) -> dict:
    """Execute one job, write its files, and return its manifest entry."""
    out = Path(out_dir)
    g = GridGeometry(job.n)
    horizon = job.horizon or default_horizon(g)
    files = []
    entry = {"tag": job.tag, "n": job.n, "mode": job.mode, "placement": asdict(job.spec)}
    if job.mode == "single":
        result = run(g, generate(job.spec, g), horizon)
        csv_path = out / f"{job.tag}.csv"
        write_metrics_csv(csv_path, result)
        report_path = out / f"{job.tag}.stopping.json"
        _write_json(report_path, {"run": result.manifest, "stopping": result.stopping.to_dict()})
        files += [csv_path, report_path]
        entry.update(horizon=horizon, stopping=result.stopping.to_dict(), passed=True)
    else:
        if job.mode == "filled-vs-perimeter":
            report = compare_filled_vs_perimeter(g, job.spec.k, horizon, job.spec.anchor)
            passed = report.passed
        else:
            report = compare_grouped_vs_distributed(g, job.spec.k, horizon, job.spec.anchor)
            passed = True
        for name, result in report.runs.items():
            csv_path = out / f"{job.tag}_{name}.csv"
            write_metrics_csv(csv_path, result)
            files.append(csv_path)
        report_path = out / f"{job.tag}.report.json"
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_text())
        files.append(report_path)
        entry.update(horizon=horizon, summary=report.summary(), passed=passed)
    entry["files"] = [str(p) for p in files]
    return entry


@dataclass
class RunManifest:
    config_hash: str
    version: str
    timestamp: str
    config: dict
    runs: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    path: str | None = None

    @property
    def passed(self) -> bool:
        return all(r.get("passed", True) for r in self.runs)

    @property
    def files(self) -> list[str]:
        return [f for r in self.runs for f in r["files"]]

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("path")
        return d


def execute(config: ExperimentConfig, workers: int | None = None) -> RunManifest:
    """Run every job of ``config``; results do not depend on ``workers``."""
    workers = config.workers if workers is None else workers
    jobs, skipped = expand_jobs(config)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise PermissionError(f"output directory {out} is not writable")
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            entries = list(pool.map(run_job, jobs, [str(out)] * len(jobs)))
    else:
        entries = [run_job(job, str(out)) for job in jobs]
    manifest = RunManifest(
        config_hash=config.digest(),
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
        config=config.to_dict(),
        runs=entries,
        skipped=skipped,
    )
    path = out / "manifest.json"
    _write_json(path, manifest.to_dict())
    manifest.path = str(path)
    return manifest


def with_overrides(config: ExperimentConfig, **kw) -> ExperimentConfig:
    """Copy of ``config`` with every non-None keyword applied."""
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
