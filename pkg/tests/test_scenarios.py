"""Initial-data constructors: catenaries, Clifford and cap circles, perturbed
geodesics, the tangency solve, and the glued near-threshold datum."""

import numpy as np
import pytest

from hypflow import scenarios
from hypflow.geometry import (
    DiscreteCurve,
    curvature_vector,
    elastic_energy,
    metric_norm,
    param_speed,
    unit_tangent,
)


# ---------------------------------------------------------------------------
# catenary

def test_catenary_minimum_height_is_eps():
    for eps in (1.0, 0.5, 0.2):
        c = scenarios.catenary(eps, n=1001)
        assert c.nodes[:, 1].min() == pytest.approx(eps, rel=1e-6)


def test_catenary_energy_increases_as_eps_shrinks():
    energies = [elastic_energy(scenarios.catenary(e, n=2001))
                for e in (1.0, 0.5, 0.2)]
    assert energies == sorted(energies)
    assert energies[-1] < 8.0


def test_catenary_symmetric_and_clamped():
    c = scenarios.catenary(0.7, n=401)
    assert np.abs(c.nodes[:, 0] + c.nodes[::-1, 0]).max() < 1e-9
    assert np.abs(c.nodes[:, 1] - c.nodes[::-1, 1]).max() < 1e-9
    assert c.boundary_tangents is not None


def test_catenary_rejects_bad_arguments():
    with pytest.raises(ValueError):
        scenarios.catenary(0.0)
    with pytest.raises(ValueError):
        scenarios.catenary(1.0, a=-1.0)


# ---------------------------------------------------------------------------
# clifford circle

def test_clifford_circle_curvature_norm():
    c = scenarios.clifford_circle(n=4001)
    k = curvature_vector(c)
    norm_sq = metric_norm(k, c.nodes[:, 1]) ** 2
    inner = norm_sq[2:-2]
    assert np.abs(inner - 2.0).max() < 1e-4


def test_clifford_circle_energy_bound():
    c = scenarios.clifford_circle(n=2001)
    assert elastic_energy(c) >= 4.0 * np.pi - 1e-3


def test_clifford_circle_translation_invariance():
    a = elastic_energy(scenarios.clifford_circle(x=0.0, n=1001))
    b = elastic_energy(scenarios.clifford_circle(x=3.7, n=1001))
    assert abs(a - b) < 1e-8


def test_clifford_circle_geometry():
    c = scenarios.clifford_circle(x=1.0, scale=2.0, n=801)
    # circle of radius scale centered at (x, scale * sqrt(2))
    d = np.hypot(c.nodes[:, 0] - 1.0, c.nodes[:, 1] - 2.0 * np.sqrt(2.0))
    assert np.abs(d - 2.0).max() < 1e-9


# ---------------------------------------------------------------------------
# cap circle

def test_cap_circle_center_and_radius():
    h = 2.0 * scenarios.H_MIN
    c = scenarios.cap_circle(h, n=801)
    center = np.array([-h / np.sqrt(2.0), h])
    d = np.hypot(c.nodes[:, 0] - center[0], c.nodes[:, 1] - center[1])
    assert np.abs(d - h / np.sqrt(2.0)).max() < 1e-9


def test_cap_circle_rejects_low_height():
    with pytest.raises(ValueError):
        scenarios.cap_circle(scenarios.H_MIN)


# ---------------------------------------------------------------------------
# perturbed geodesic

def test_perturbed_geodesic_unperturbed_is_vertical_segment():
    c = scenarios.perturbed_geodesic(n=101)
    assert np.abs(c.nodes[:, 0]).max() == 0.0
    assert c.nodes[0, 1] == pytest.approx(1.0)
    assert c.nodes[-1, 1] == pytest.approx(np.e)


def test_perturbed_geodesic_bump_vanishes_at_ends():
    c = scenarios.perturbed_geodesic(n=201, amplitude=0.1, mode=3)
    assert abs(c.nodes[0, 0]) < 1e-14 and abs(c.nodes[-1, 0]) < 1e-14
    assert np.abs(c.nodes[:, 0]).max() > 0.05
    # second-order vanishing keeps the clamped tangents vertical
    tang = unit_tangent(c)
    assert abs(tang[0, 0]) < 1e-3 and abs(tang[-1, 0]) < 1e-3


def test_perturbed_geodesic_rejects_bad_heights():
    with pytest.raises(ValueError):
        scenarios.perturbed_geodesic(y0=0.0)
    with pytest.raises(ValueError):
        scenarios.perturbed_geodesic(y0=2.0, y1=1.0)


# ---------------------------------------------------------------------------
# graph_curve

def test_graph_curve_matches_manual_construction():
    x = np.linspace(-1.0, 1.0, 51)
    g = 1.0 + x**2
    c = scenarios.graph_curve(x, g, gp=2.0 * x)
    assert isinstance(c, DiscreteCurve)
    assert np.allclose(c.nodes[:, 0], x)
    assert np.allclose(c.nodes[:, 1], g)


def test_graph_curve_rejects_nonpositive_heights():
    x = np.linspace(-1.0, 1.0, 11)
    with pytest.raises(ValueError):
        scenarios.graph_curve(x, x)  # dips below zero


# ---------------------------------------------------------------------------
# tangency solve

def test_tangency_touch_is_exact():
    h = 2.0 * scenarios.H_MIN
    for x in (0.2, 0.5, 0.8):
        eta, touch = scenarios.tangency(x, h)
        assert 0.0 < eta < 1.0
        assert touch[0] < 0.0
        cx = np.array([x, np.sqrt(2.0)])
        cap_center = eta * np.array([-h / np.sqrt(2.0), h])
        cap_radius = eta * h / np.sqrt(2.0)
        # on both circles
        assert abs(np.hypot(*(touch - cx)) - 1.0) < 1e-10
        assert abs(np.hypot(*(touch - cap_center)) - cap_radius) < 1e-9


def test_tangency_is_tangential_not_transversal():
    h = 2.0 * scenarios.H_MIN
    x = 0.3
    eta, _ = scenarios.tangency(x, h)
    cx = np.array([x, np.sqrt(2.0)])

    def gap(e):
        cap_center = e * np.array([-h / np.sqrt(2.0), h])
        d = np.hypot(*(cap_center - cx))
        return min(abs(d - (1.0 + e * h / np.sqrt(2.0))),
                   abs(d - abs(e * h / np.sqrt(2.0) - 1.0)))

    assert gap(eta) < 1e-10
    # perturbing eta separates or overlaps the circles: smooth tangency
    assert gap(eta + 1e-6) > 1e-8 or gap(eta - 1e-6) > 1e-8


def test_tangency_rejects_bad_arguments():
    with pytest.raises(ValueError):
        scenarios.tangency(1.5, 2.0 * scenarios.H_MIN)
    with pytest.raises(ValueError):
        scenarios.tangency(0.5, scenarios.H_MIN)


# ---------------------------------------------------------------------------
# glued near-threshold datum

@pytest.fixture(scope="module")
def singular():
    return scenarios.build_singular_datum(0.1, n=1201)


def test_singular_datum_endpoints(singular):
    assert np.abs(singular.nodes[0] - (0.0, 1.0)).max() < 1e-4
    assert np.abs(singular.nodes[-1] - (0.0, 1.0)).max() < 1e-4


def test_singular_datum_vertical_clamps(singular):
    tang = unit_tangent(singular)
    angle0 = np.degrees(np.arctan2(abs(tang[0, 0]), abs(tang[0, 1])))
    angle1 = np.degrees(np.arctan2(abs(tang[-1, 0]), abs(tang[-1, 1])))
    assert angle0 < 2.0 and angle1 < 2.0
    assert singular.boundary_tangents is not None
    assert np.abs(np.abs(singular.boundary_tangents)
                  - np.array([[0.0, 1.0], [0.0, 1.0]])).max() < 1e-12


def test_singular_datum_mirror_symmetry(singular):
    mirrored = singular.nodes[::-1].copy()
    mirrored[:, 0] *= -1.0
    assert np.abs(singular.nodes - mirrored).max() < 1e-6


def test_singular_datum_constant_speed(singular):
    sp = param_speed(singular)
    assert (sp.max() - sp.min()) / sp.mean() < 1e-3


def test_singular_datum_energy_decreases_toward_threshold():
    energies = [elastic_energy(scenarios.build_singular_datum(lam, n=1201))
                for lam in (0.4, 0.2, 0.1)]
    assert energies == sorted(energies, reverse=True)
    assert all(e > 8.0 for e in energies)


def test_singular_datum_energy_decomposition():
    # total = loop energy + 2 * arc length of the circle pieces, since the
    # circle arcs are Clifford-type (|curvature|^2 = 2); the gap shrinks
    # with the grid because the junctions are only C1
    from hypflow import elastica
    from hypflow.geometry import hyperbolic_length

    f8 = elastica.figure_eight_solve(0.1)
    loop_length = hyperbolic_length(elastica.figure_eight_segment(f8, n=8001))
    gaps = []
    for n in (1201, 4801):
        s = scenarios.build_singular_datum(0.1, n=n)
        assert s.metadata["kind"] == "singular_datum"
        arc_length = hyperbolic_length(s) - loop_length
        expected = s.metadata["loop_energy_exact"] + 2.0 * arc_length
        gaps.append(abs(elastic_energy(s) - expected))
    assert gaps[1] < gaps[0] / 3.0
    assert gaps[1] < 2e-2


def test_h_gauge_invariance():
    a = scenarios.build_singular_datum(0.2, h=2.0 * scenarios.H_MIN, n=801)
    b = scenarios.build_singular_datum(0.2, h=3.0 * scenarios.H_MIN, n=801)
    assert abs(elastic_energy(a) - elastic_energy(b)) < 1e-6
