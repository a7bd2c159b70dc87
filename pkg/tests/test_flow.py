"""Gradient-flow driver: dissipation, fixed points, clamped ends, stopping
verdicts, configuration validation, and the mirror-symmetry projection."""

import math

import numpy as np
import pytest

from hypflow import flow, scenarios
from hypflow.flow import FlowConfig, WeightFunction


def _run(curve, **kw):
    cfg = FlowConfig(**kw)
    return flow.run(curve, cfg)


# ---------------------------------------------------------------------------
# configuration validation

@pytest.mark.parametrize("kw", [
    dict(dt=-1.0),
    dict(dt_max=0.0),
    dict(t_max=0.0),
    dict(max_steps=0),
    dict(reparam_every=-1),
    dict(monitor_every=0),
    dict(length_stop_factor=1.0),
    dict(min_height_stop=0.0),
    dict(weight=WeightFunction(kind="nonsense")),
    dict(weight=WeightFunction(kind="custom")),
])
def test_config_validation_rejects(kw):
    with pytest.raises(ValueError):
        FlowConfig(**kw).validate()


def test_custom_weight_must_be_negative():
    w = WeightFunction(kind="custom", custom=lambda x, y: np.abs(x))
    w.validate()
    with pytest.raises(ValueError):
        w(np.array([[1.0, 1.0], [2.0, 1.0]]))


# ---------------------------------------------------------------------------
# core dynamics

def test_energy_dissipates_monotonically():
    curve = scenarios.perturbed_geodesic(n=101, amplitude=0.05, mode=2)
    res = _run(curve, weight=WeightFunction("elastic"), t_max=np.inf,
               max_steps=300, monitor_every=1, reparam_every=0)
    e = np.array([r.elastic for r in res.trajectory])
    assert np.all(np.diff(e) <= 1e-12)
    assert e[-1] < e[0]


def test_willmore_energy_dissipates_with_willmore_weight():
    curve = scenarios.catenary(1.0, n=201)
    res = _run(curve, weight=WeightFunction("willmore"), t_max=np.inf,
               max_steps=200, monitor_every=1, reparam_every=0)
    e = np.array([r.willmore for r in res.trajectory])
    assert np.all(np.diff(e) <= 1e-10)


def test_velocity_vanishes_at_clamped_ends():
    curve = scenarios.perturbed_geodesic(n=101, amplitude=0.05, mode=1)
    v = flow.velocity(curve, WeightFunction("elastic"))
    assert np.abs(v[:2]).max() == 0.0
    assert np.abs(v[-2:]).max() == 0.0
    assert np.abs(v[2:-2]).max() > 0.0


def test_endpoints_and_end_tangents_frozen_along_flow():
    curve = scenarios.catenary(1.0, n=201)
    res = _run(curve, weight=WeightFunction("willmore"), t_max=np.inf,
               max_steps=150, reparam_every=0)
    start = res.snapshots[0][1].nodes
    final = res.state.curve.nodes
    assert np.abs(final[:2] - start[:2]).max() < 1e-15
    assert np.abs(final[-2:] - start[-2:]).max() < 1e-15


def test_geodesic_is_fixed_point_of_elastic_flow():
    curve = scenarios.perturbed_geodesic(n=101, amplitude=0.0)
    res = _run(curve, weight=WeightFunction("elastic"), t_max=np.inf,
               max_steps=50, reparam_every=0)
    motion = np.abs(res.state.curve.nodes - res.snapshots[0][1].nodes).max()
    assert motion < 1e-8


# ---------------------------------------------------------------------------
# stopping verdicts

def test_verdict_converged_on_gradient_tolerance():
    curve = scenarios.perturbed_geodesic(n=61, amplitude=0.02, mode=1)
    res = _run(curve, weight=WeightFunction("elastic"), t_max=np.inf,
               max_steps=100_000, grad_tol=1e-5, monitor_every=50)
    assert res.verdict == "converged"
    assert res.trajectory[-1].grad_norm < 1e-5


def test_verdict_budget_exhausted():
    curve = scenarios.perturbed_geodesic(n=61, amplitude=0.05, mode=2)
    res = _run(curve, weight=WeightFunction("elastic"), t_max=np.inf,
               max_steps=10)
    assert res.verdict == "budget_exhausted"
    assert res.state.step_count == 10


def test_verdict_time_budget():
    curve = scenarios.perturbed_geodesic(n=61, amplitude=0.05, mode=2)
    res = _run(curve, weight=WeightFunction("elastic"), t_max=1e-9,
               max_steps=10_000)
    assert res.verdict == "budget_exhausted"
    assert res.state.t >= 1e-9


def test_verdict_singular_length():
    curve = scenarios.build_singular_datum(0.1, n=301)
    res = _run(curve, weight=WeightFunction("willmore"), t_max=1.0,
               max_steps=100_000, reparam_every=20, monitor_every=500,
               energy_increase_tol=1e-6, dt_growth=1.5, dt_max=np.inf,
               length_stop_factor=1.05, symmetrize=True)
    assert res.verdict == "singular_length"
    from hypflow.geometry import hyperbolic_length
    ratio = (hyperbolic_length(res.state.curve)
             / hyperbolic_length(res.snapshots[0][1]))
    assert ratio >= 1.05


def test_verdict_singular_height():
    curve = scenarios.perturbed_geodesic(y0=0.005, y1=1.0, n=101,
                                         amplitude=0.002, mode=1)
    res = _run(curve, weight=WeightFunction("elastic"), t_max=np.inf,
               max_steps=5, min_height_stop=0.01)
    assert res.verdict == "singular_height"
    assert res.trajectory[-1].min_height < 0.01


# ---------------------------------------------------------------------------
# adaptive stepping and snapshots

def test_dt_cap_defaults_to_initial_step():
    curve = scenarios.perturbed_geodesic(n=61, amplitude=0.02, mode=1)
    res = _run(curve, weight=WeightFunction("elastic"), t_max=np.inf,
               max_steps=200, dt=1e-6, dt_growth=2.0)
    assert res.state.dt <= 1e-6 + 1e-18


def test_snapshot_cadence():
    curve = scenarios.perturbed_geodesic(n=61, amplitude=0.02, mode=1)
    res = _run(curve, weight=WeightFunction("elastic"), t_max=np.inf,
               max_steps=100, snapshot_every=25)
    times = [t for t, _ in res.snapshots]
    # first and last plus one every 25 steps in between
    assert times[0] == 0.0
    assert times == sorted(times)
    assert len(res.snapshots) == 6


def test_monitor_reports_all_fields_finite():
    curve = scenarios.catenary(1.0, n=101)
    rep = flow.monitor(curve, WeightFunction("willmore"), t=0.5)
    vals = [getattr(rep, f) for f in rep.FIELDS]
    assert all(math.isfinite(v) for v in vals)
    assert rep.t == 0.5
    assert rep.min_height == pytest.approx(1.0, abs=1e-8)


# ---------------------------------------------------------------------------
# symmetry

def test_symmetry_defect_zero_for_mirror_symmetric_curve():
    curve = scenarios.catenary(1.0, n=201)
    assert flow.symmetry_defect(curve) < 1e-12
    skew = curve.copy()
    skew.nodes[:, 1] *= 1.0 + 0.01 * np.linspace(0.0, 1.0, skew.n)
    assert flow.symmetry_defect(skew) > 1e-4


def test_symmetrize_preserves_mirror_symmetry_along_flow():
    curve = scenarios.build_singular_datum(0.2, n=201)
    res = _run(curve, weight=WeightFunction("willmore"), t_max=np.inf,
               max_steps=2000, reparam_every=20, snapshot_every=500,
               symmetrize=True, dt_max=np.inf, dt_growth=1.5,
               energy_increase_tol=1e-6)
    worst = max(flow.symmetry_defect(c) for _, c in res.snapshots)
    assert worst < 1e-10


# ---------------------------------------------------------------------------
# energy-threshold helper

def test_willmore_threshold_check():
    low = scenarios.catenary(1.0, n=401)
    ok, margin = flow.willmore_threshold_check(low)
    assert ok and margin > 0.0
    high = scenarios.catenary(0.05, n=801)
    ok2, margin2 = flow.willmore_threshold_check(high)
    assert not ok2 and margin2 < 0.0
    from hypflow.geometry import elastic_energy
    assert margin == pytest.approx(8.0 - elastic_energy(low), abs=1e-12)
