"""
Command-line entry point.

Subcommands: ``run``, ``sweep``, ``verify``, ``compare``. Human-readable
summaries go to stdout; CSV and JSON artifacts go to the ``--out``
directory.

Exit codes: 0 success, 1 usage or configuration error, 2 a verification
claim failed, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .placements import KINDS, PlacementSpec
from .runner import (
    ExperimentConfig,
    execute,
    load_config,
    normalize_mode,
    parse_locations,
    with_overrides,
)
from .verify import compare_filled_vs_perimeter, compare_grouped_vs_distributed, verification_suite
from .walk import ConfigurationError, GridGeometry

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_csv(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_common(p: argparse.ArgumentParser, placement: bool = True) -> None:
    p.add_argument("--config", help="INI experiment config; flags override its values")
    p.add_argument("--n", type=int, help="grid side length")
    p.add_argument("--horizon", type=int, help="number of steps (default ceil(2 sqrt(N ln N)))")
    p.add_argument("--out", help="output directory for CSV/JSON artifacts")
    p.add_argument("--k", type=int, help="number of marked locations (square kinds: side**2)")
    p.add_argument("--x", type=int, help="anchor x coordinate")
    p.add_argument("--y", type=int, help="anchor y coordinate")
    if placement:
        p.add_argument("--placement", choices=KINDS, help="placement kind")
        p.add_argument("--locations", help="custom locations as 'x,y; x,y; ...'")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="akrwalk", description="Quantum-walk search on the periodic 2D grid.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run one configuration and print its stopping report")
    _add_common(p)

    p = sub.add_parser("sweep", help="run a grid of (n, k) configurations")
    _add_common(p)
    p.add_argument("--n-values", type=_int_csv, help="sweep axis for n, e.g. 16,32")
    p.add_argument("--k-values", type=_int_csv, help="sweep axis for k, e.g. 4,16")
    p.add_argument("--mode", help="single | filled-vs-perimeter | grouped-vs-distributed")
    p.add_argument("--workers", type=int, help="parallel worker processes")

    p = sub.add_parser("verify", help="run every applicable claim checker for one configuration")
    _add_common(p)

    p = sub.add_parser("compare", help="filled-vs-perimeter or grouped-vs-distributed gap report")
    _add_common(p, placement=False)
    p.add_argument(
        "--mode",
        required=True,
        help="filled-vs-perimeter (alias filled-perimeter) or "
        "grouped-vs-distributed (alias grouped-distributed)",
    )
    return parser


def _placement_from(args, base: PlacementSpec | None, default_kind: str = "single") -> PlacementSpec:
    kind = getattr(args, "placement", None)
    locations = getattr(args, "locations", None)
    if locations is not None:
        if kind not in (None, "custom"):
            raise ConfigurationError(f"--locations conflicts with --placement {kind}")
        kind = "custom"
    if base is not None and kind is not None and kind != base.kind:
        if base.kind == "custom" and locations is None:
            raise ConfigurationError(
                f"--placement {kind} conflicts with the custom location list in the config"
            )
        base = None if kind == "custom" else PlacementSpec(kind, base.k, base.anchor)
    kind = kind or (base.kind if base else default_kind)
    k = args.k if args.k is not None else (base.k if base else 1)
    ax, ay = base.anchor if base else (0, 0)
    anchor = (ax if args.x is None else args.x, ay if args.y is None else args.y)
    if kind == "custom":
        locs = parse_locations(locations) if locations is not None else (base.locations if base else None)
        return PlacementSpec("custom", anchor=anchor, locations=locs)
    return PlacementSpec(kind, k, anchor)


def _config_from(args, default_kind: str = "single") -> ExperimentConfig:
    base = load_config(args.config) if args.config else None
    spec = _placement_from(args, base.placement if base else None, default_kind)
    overrides = dict(
        n=args.n,
        placement=spec,
        horizon=args.horizon,
        output_dir=args.out,
        sweep_n=getattr(args, "n_values", None),
        sweep_k=getattr(args, "k_values", None),
        mode=getattr(args, "mode", None),
        workers=getattr(args, "workers", None),
    )
    if base is None:
        return ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})
    return with_overrides(base, **overrides)


def _cmd_run(args) -> int:
    config = with_overrides(_config_from(args), mode="single", sweep_n=(), sweep_k=())
    if config.n is None:
        raise ConfigurationError("--n is required")
    config.placement.validate(GridGeometry(config.n))
    manifest = execute(config)
    for entry in manifest.runs:
        s = entry["stopping"]
        print(
            f"{entry['tag']}: t_peak={s['t_peak']} p_peak={s['p_peak']:.6f} "
            f"t_overlap_zero={s['t_overlap_zero']} horizon={entry['horizon']} cost={s['cost']:.2f}"
        )
        print(f"  wrote {', '.join(entry['files'])}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    manifest = execute(_config_from(args))
    for entry in manifest.runs:
        status = "PASS" if entry["passed"] else "FAIL"
        if "stopping" in entry:
            s = entry["stopping"]
            print(f"{status} {entry['tag']}: t_peak={s['t_peak']} p_peak={s['p_peak']:.6f}")
        else:
            print(f"{status} {entry['summary']}")
    for skip in manifest.skipped:
        print(f"SKIP n={skip['n']} k={skip['k']}: {skip['reason']}")
    print(f"manifest: {manifest.path}")
    return EXIT_OK if manifest.passed else EXIT_VERIFY


def _cmd_verify(args) -> int:
    config = _config_from(args)
    if config.n is None:
        raise ConfigurationError("--n is required")
    geometry = GridGeometry(config.n)
    reports = verification_suite(geometry, config.placement, config.horizon)
    if not reports:
        print("no applicable checks for this placement")
    for report in reports:
        for claim in report.claims:
            print(f"{report.title}: {claim.line()}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for report in reports:
            path = out / f"verify_n{config.n}_{config.placement.label()}_{report.title}.json"
            path.write_text(report.to_text(), encoding="utf-8")
            print(f"  wrote {path}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def _cmd_compare(args) -> int:
    mode = normalize_mode(args.mode)
    if mode == "single":
        raise ConfigurationError("compare needs --mode filled-vs-perimeter or grouped-vs-distributed")
    config = with_overrides(_config_from(args, default_kind="block"), mode=mode)
    if config.n is None:
        raise ConfigurationError("--n is required")
    if args.out or args.config:
        manifest = execute(with_overrides(config, sweep_n=(), sweep_k=()))
        if manifest.skipped:
            raise ConfigurationError(manifest.skipped[0]["reason"])
        for entry in manifest.runs:
            print(entry["summary"])
        print(f"manifest: {manifest.path}")
        return EXIT_OK if manifest.passed else EXIT_VERIFY
    geometry = GridGeometry(config.n)
    k, anchor = config.placement.k, config.placement.anchor
    if mode == "filled-vs-perimeter":
        report = compare_filled_vs_perimeter(geometry, k, config.horizon, anchor)
        print(report.summary())
        if report.info["states_identical"]:
            print(f"states identical, c(k)={report.info['c_k']}")
        return EXIT_OK if report.passed else EXIT_VERIFY
    print(compare_grouped_vs_distributed(geometry, k, config.horizon, anchor).summary())
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "sweep": _cmd_sweep, "verify": _cmd_verify, "compare": _cmd_compare}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"akrwalk {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"akrwalk {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
