import math

import numpy as np
import pytest

from akrwalk.analysis import (
    default_horizon,
    detect_stopping,
    marked_probability,
    overlap_with_initial,
    run,
)
from akrwalk.oracle import evolve_dense
from akrwalk.walk import ConfigurationError, GridGeometry, MarkedSet, WalkState, uniform_state


def test_overlap_uniform_is_one():
    assert overlap_with_initial(uniform_state(GridGeometry(7))) == pytest.approx(1.0, abs=1e-12)


def test_overlap_zero_sum_state():
    g = GridGeometry(2)
    amps = np.array([1.0, -1.0] * 8) / 4
    assert overlap_with_initial(WalkState(g, amps)) == 0.0


def test_marked_probability_uniform():
    g = GridGeometry(8)
    m = MarkedSet([(0, 0), (3, 3), (5, 1)])
    assert marked_probability(uniform_state(g), m) == pytest.approx(3 / 64, abs=1e-15)
    assert marked_probability(uniform_state(g), MarkedSet()) == 0.0


def test_marked_probability_needs_geometry_for_arrays():
    with pytest.raises(ConfigurationError):
        marked_probability(np.ones(16) / 4, MarkedSet([(0, 0)]))


def test_default_horizon():
    assert default_horizon(GridGeometry(16)) == math.ceil(2 * math.sqrt(256 * math.log(256)))


class TestDetectStopping:
    def test_threshold_hit(self):
        ov = [1.0, 0.5, 0.005, -0.4]
        p = [0.1, 0.2, 0.3, 0.9]
        s = detect_stopping(ov, p)
        assert s.t_overlap_zero == 2
        # window = min(3, 4): the later maximum is still inside
        assert (s.window, s.t_peak, s.p_peak) == (3, 3, 0.9)

    def test_sign_change_picks_nearest_side(self):
        s = detect_stopping([1.0, 0.3, 0.02, -0.2, -0.5, -0.9], [0] * 6)
        assert s.t_overlap_zero == 2
        s = detect_stopping([1.0, 0.3, 0.2, -0.02, -0.5, -0.9], [0] * 6)
        assert s.t_overlap_zero == 3

    def test_window_excludes_revivals(self):
        ov = np.cos(np.arange(41) * math.pi / 20)  # zero near t=10
        p = np.sin(np.arange(41) * math.pi / 20) ** 2
        p[30] = 2.0  # a later, larger revival
        s = detect_stopping(ov, p)
        assert s.t_overlap_zero == 10
        assert s.window == 20
        assert s.t_peak == 10
        assert s.t_peak_global == 30

    def test_earliest_maximizer_on_ties(self):
        s = detect_stopping([1, 1, 1, 1], [0.1, 0.5, 0.5, 0.2])
        assert s.t_overlap_zero is None
        assert (s.t_peak, s.window) == (1, 3)

    def test_cost(self):
        s = detect_stopping([1, 0.5, -0.5], [0.0, 0.25, 0.1])
        assert s.cost == pytest.approx(1 / 0.25)


def test_run_unmarked_fixed_point():
    r = run(GridGeometry(6), MarkedSet(), horizon=40)
    assert np.allclose(r.overlap, 1.0, atol=1e-12, rtol=0)
    assert np.all(r.p_marked == 0)
    assert len(r.metrics) == 41


def test_run_initial_metrics():
    g = GridGeometry(8)
    r = run(g, MarkedSet([(1, 1), (2, 2)]), horizon=5)
    m0 = r.metrics[0]
    assert m0.t == 0 and m0.overlap == pytest.approx(1.0, abs=1e-12)
    assert m0.p_marked == pytest.approx(2 / 64, abs=1e-12)
    assert m0.norm_error < 1e-12


def test_run_matches_dense_trajectory():
    g = GridGeometry(4)
    m = MarkedSet([(1, 1)])
    r = run(g, m, horizon=20)
    mask = m.basis_mask(g)
    for t, psi in enumerate(evolve_dense(g, m, 20)):
        assert abs(r.overlap[t] - psi.sum() / 8) < 1e-12
        assert abs(r.p_marked[t] - np.sum(psi[mask] ** 2)) < 1e-12


def test_single_mark_8x8_overlap_near_zero_at_stop():
    r = run(GridGeometry(8), MarkedSet([(0, 0)]))
    t = r.stopping.t_overlap_zero
    assert t is not None and abs(r.overlap[t]) < 0.05


def test_single_mark_16x16_stopping():
    g = GridGeometry(16)
    r = run(g, MarkedSet([(8, 8)]))
    assert r.stopping.t_overlap_zero <= 2 * math.ceil(math.sqrt(g.N * math.log(g.N)))
    assert r.stopping.p_peak >= 5 / g.N
    assert 0 <= r.stopping.t_peak <= r.stopping.window <= r.horizon
    assert r.stopping.p_peak == r.p_marked[r.stopping.t_peak]


def test_horizon_must_be_positive():
    with pytest.raises(ConfigurationError):
        run(GridGeometry(4), MarkedSet(), horizon=0)


def test_metrics_ranges():
    r = run(GridGeometry(10), MarkedSet([(0, 0), (0, 1), (7, 3)]), horizon=150)
    assert np.all(np.abs(r.overlap) <= 1 + 1e-10)
    assert np.all((r.p_marked >= -1e-12) & (r.p_marked <= 1 + 1e-12))
    assert r.norm_error.max() < 1e-12
