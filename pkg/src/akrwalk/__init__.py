"""Simulation and verification of coined quantum-walk search on the 2D torus."""

__version__ = "0.1.0"

from .walk import (
    ConfigurationError,
    Direction,
    GridGeometry,
    MarkedSet,
    WalkState,
    apply_coin,
    apply_query,
    apply_shift,
    evolve,
    read_snapshot,
    step,
    uniform_state,
    write_snapshot,
)
from .placements import PlacementSpec, generate, interior, interior_count
from .analysis import (
    RunResult,
    StepMetrics,
    StoppingReport,
    default_horizon,
    detect_stopping,
    marked_probability,
    overlap_with_initial,
    run,
)
from .verify import (
    Report,
    StatePartition,
    compare_filled_vs_perimeter,
    compare_grouped_vs_distributed,
    partition_state,
    state_partition,
    verify_adjacent_pair_invariant,
    verify_all_adjacent_pairs,
    verify_distributed_periodicity,
)
from .oracle import build_step_matrix, evolve_dense
