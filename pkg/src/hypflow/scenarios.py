"""Ready-made initial data: catenaries, Clifford circles, graphs, geodesics
and the glued near-minimal-energy datum that drives the flow toward the
boundary axis.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from .elastica import FigureEight, figure_eight_end_tangent, figure_eight_segment, figure_eight_solve
from .geometry import DiscreteCurve, reparametrize_constant_speed

# the large auxiliary circle must sit strictly above the unit circles; this
# is guaranteed for h above this bound
H_MIN = np.sqrt(2.0) * (1.0 + np.sqrt(2.0)) / (np.sqrt(2.0) - 1.0)


def catenary(eps: float, a: float = 1.0, n: int = 801) -> DiscreteCurve:
    """Catenary graph x -> (x, eps cosh(x/eps)) on [-a, a].

    These curves revolve to minimal surfaces; their elastic energy
    8 tanh(a/eps) approaches the embeddedness threshold 8 from below.
    """
    if eps <= 0.0 or a <= 0.0 or n < 4:
        raise ValueError("need eps > 0, a > 0 and at least 4 samples")
    x = np.linspace(-a, a, n)
    y = eps * np.cosh(x / eps)
    gp = np.sinh(x / eps)
    tang = np.column_stack([np.ones_like(x), gp])
    tang /= np.hypot(tang[:, 0], tang[:, 1])[:, None]
    curve = DiscreteCurve(x, np.column_stack([x, y]),
                          boundary_tangents=tang[[0, -1]])
    curve.metadata = {
        "kind": "catenary",
        "eps": eps,
        "half_width": a,
        "elastic_energy_exact": 8.0 * np.tanh(a / eps),
        "willmore_energy_exact": 0.0,
    }
    curve.validate()
    return curve


def _circle(center: np.ndarray, radius: float, ang0: float, ang1: float, n: int) -> DiscreteCurve:
    ang = np.linspace(ang0, ang1, n)
    nodes = np.column_stack([center[0] + radius * np.cos(ang),
                             center[1] + radius * np.sin(ang)])
    closed = abs(abs(ang1 - ang0) - 2.0 * np.pi) < 1e-14
    return DiscreteCurve(ang, nodes, closed=closed)


def clifford_circle(x: float = 0.0, scale: float = 1.0, n: int = 801,
                    arc: tuple[float, float] = (0.0, 2.0 * np.pi)) -> DiscreteCurve:
    """Circle with center (x, scale*sqrt(2)) and radius scale: a circular
    elastica with |curvature vector|^2 = 2 and hyperbolic length 2 pi per
    revolution; its surface of revolution is a Clifford torus."""
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    curve = _circle(np.array([x, scale * np.sqrt(2.0)]), scale, arc[0], arc[1], n)
    curve.metadata = {"kind": "clifford_circle", "x": x, "scale": scale}
    curve.validate()
    return curve


def cap_circle(h: float, n: int = 801,
               arc: tuple[float, float] = (0.0, 2.0 * np.pi)) -> DiscreteCurve:
    """The auxiliary circle with center (-h/sqrt(2), h) and radius h/sqrt(2):
    a scaled and shifted Clifford circle capping the glued datum.  Requires
    h above the separation bound H_MIN."""
    if h <= H_MIN:
        raise ValueError(f"need h > {H_MIN:.6f} to keep the cap above the unit circles")
    curve = _circle(np.array([-h / np.sqrt(2.0), h]), h / np.sqrt(2.0), arc[0], arc[1], n)
    curve.metadata = {"kind": "cap_circle", "h": h}
    curve.validate()
    return curve


def graph_curve(x: np.ndarray, g: np.ndarray, gp: np.ndarray | None = None) -> DiscreteCurve:
    """Curve (x, g(x)) from graph samples; gp supplies exact boundary
    tangent directions when available."""
    x = np.asarray(x, dtype=float)
    g = np.asarray(g, dtype=float)
    tang = None
    if gp is not None:
        gp = np.asarray(gp, dtype=float)
        t = np.column_stack([np.ones(2), gp[[0, -1]]])
        tang = t / np.hypot(t[:, 0], t[:, 1])[:, None]
    curve = DiscreteCurve(x, np.column_stack([x, g]), boundary_tangents=tang)
    curve.metadata = {"kind": "graph"}
    curve.validate()
    return curve


def perturbed_geodesic(y0: float = 1.0, y1: float = np.e, n: int = 201,
                       amplitude: float = 0.0, mode: int = 1) -> DiscreteCurve:
    """Segment of the vertical geodesic x = 0 from (0, y0) to (0, y1), with
    an optional horizontal bump that vanishes to second order at the ends so
    the clamped boundary data stay those of the geodesic."""
    if y0 <= 0.0 or y1 <= y0:
        raise ValueError("need 0 < y0 < y1")
    t = np.linspace(0.0, 1.0, n)
    y = y0 * (y1 / y0) ** t  # constant hyperbolic speed log(y1/y0)
    bump = amplitude * np.sin(mode * np.pi * t) ** 2
    curve = DiscreteCurve(t, np.column_stack([bump, y]),
                          boundary_tangents=np.array([[0.0, 1.0], [0.0, 1.0]]))
    curve.metadata = {"kind": "perturbed_geodesic", "amplitude": amplitude,
                      "mode": mode, "y0": y0, "y1": y1}
    curve.validate()
    return curve


# ---------------------------------------------------------------------------
# the glued singular datum

def tangency(x: float, h: float) -> tuple[float, np.ndarray]:
    """Largest eta in (0, 1) for which eta times the cap circle touches the
    unit circle centered at (x, sqrt(2)) tangentially in exactly one point
    with negative first coordinate.  Returns (eta, touch_point)."""
    if not (0.0 < x < 1.0):
        raise ValueError("need x in (0, 1)")
    if h <= H_MIN:
        raise ValueError(f"need h > {H_MIN:.6f}")
    cx = np.array([x, np.sqrt(2.0)])
    cc = np.array([-h / np.sqrt(2.0), h])
    rho = h / np.sqrt(2.0)

    def dist(eta: float) -> float:
        return float(np.hypot(*(eta * cc - cx)))

    candidates: list[tuple[float, np.ndarray]] = []
    for gap in (lambda e: dist(e) - (1.0 + e * rho),       # external touch
                lambda e: dist(e) - abs(e * rho - 1.0)):   # internal touch
        etas = np.linspace(1e-6, 1.0 - 1e-9, 2000)
        vals = np.array([gap(e) for e in etas])
        for i in range(len(etas) - 1):
            if vals[i] == 0.0 or vals[i] * vals[i + 1] < 0.0:
                eta = brentq(gap, etas[i], etas[i + 1], xtol=1e-15)
                d = dist(eta)
                direction = (eta * cc - cx) / d
                # the touch point sits on the center line at distance 1
                # from the small center, toward or away from the cap
                touch = cx + direction if d >= 1.0 else cx - direction
                if abs(np.hypot(*(touch - eta * cc)) - eta * rho) < 1e-9 and touch[0] < 0.0:
                    candidates.append((float(eta), touch))
    if not candidates:
        raise ValueError("no admissible tangency found")
    return max(candidates, key=lambda t: t[0])


def _arc_nodes(center: np.ndarray, radius: float, p0: np.ndarray, p1: np.ndarray,
               n: int, start_dir: np.ndarray) -> np.ndarray:
    """Nodes of the circular arc from p0 to p1 whose initial tangent agrees
    with start_dir."""
    a0 = float(np.arctan2(p0[1] - center[1], p0[0] - center[0]))
    a1 = float(np.arctan2(p1[1] - center[1], p1[0] - center[0]))
    delta = (a1 - a0) % (2.0 * np.pi)
    ccw_tangent = np.array([-np.sin(a0), np.cos(a0)])
    if float(np.dot(ccw_tangent, start_dir)) < 0.0:
        delta -= 2.0 * np.pi  # traverse clockwise instead
    ang = a0 + np.linspace(0.0, delta, n)
    return np.column_stack([center[0] + radius * np.cos(ang),
                            center[1] + radius * np.sin(ang)])


def build_singular_datum(lam: float = 0.1, h: float = 2.0 * H_MIN,
                         n: int = 1201, fig8_samples: int = 4001) -> DiscreteCurve:
    """Glued initial datum whose elastic energy tends to 8 as lam -> 0.

    A figure-eight loop is scaled so its axis endpoint lands on the unit
    circle C_x tangentially; C_x is joined to a shrunk copy of the cap
    circle, whose axis point becomes the curve endpoint.  The mirror image
    closes the other half.  The result is rescaled so both ends sit at
    (0, 1) with vertical clamped tangents, and is sampled at constant
    hyperbolic speed on [-1, 1].
    """
    fig8 = figure_eight_solve(lam)
    loop = figure_eight_segment(fig8, n=fig8_samples)
    tau = figure_eight_end_tangent(fig8, loop)
    ratio = abs(tau.vy / tau.vx)
    x = ratio / np.sqrt(1.0 + ratio * ratio)  # tangent-matching circle offset
    z_x = np.array([0.0, np.sqrt(2.0) - np.sqrt(1.0 - x * x)])
    sigma = z_x[1] / loop.nodes[-1, 1]  # scale loop endpoint onto z_x

    eta, z_star = tangency(x, h)
    cx = np.array([x, np.sqrt(2.0)])
    cap_center = eta * np.array([-h / np.sqrt(2.0), h])
    cap_radius = eta * h / np.sqrt(2.0)
    w_x = np.array([0.0, eta * h])

    # sample the pieces roughly proportionally to their Euclidean length
    n_cap = max(64, n // 4)
    n_cx = max(64, n // 4)
    cap_arc = _arc_nodes(cap_center, cap_radius, w_x, z_star, n_cap,
                         start_dir=np.array([0.0, -1.0]))
    dir_at_star = cap_arc[-1] - cap_arc[-2]
    cx_arc = _arc_nodes(cx, 1.0, z_star, z_x, n_cx, start_dir=dir_at_star)

    # reversed loop: from z_x around the eight and back to z_x
    loop_rev = sigma * loop.nodes[::-1]
    # C1 check at the loop junction: the reversed loop must start along the
    # tangent line of C_x at z_x
    dir_in = cx_arc[-1] - cx_arc[-2]
    dir_loop = loop_rev[1] - loop_rev[0]
    cos = np.dot(dir_in, dir_loop) / (np.hypot(*dir_in) * np.hypot(*dir_loop))
    if cos < 0.99:
        raise ValueError(f"loop junction is not C1 (cos = {cos:.6f})")

    gamma_piece = np.vstack([cap_arc, cx_arc[1:]])  # w_x down to z_x
    left = np.vstack([gamma_piece, loop_rev[1:]])
    # mirror image of the descent piece, traversed back up to the axis point
    right = np.column_stack([-gamma_piece[:, 0], gamma_piece[:, 1]])[::-1]
    nodes = np.vstack([left, right[1:]]) / (eta * h)

    chord = np.hypot(*np.diff(nodes, axis=0).T)
    heights = 0.5 * (nodes[1:, 1] + nodes[:-1, 1])
    s = np.concatenate([[0.0], np.cumsum(chord / heights)])
    params = -1.0 + 2.0 * s / s[-1]
    # drop accidental duplicates at the seams
    keep = np.concatenate([[True], np.diff(params) > 1e-13])
    rough = DiscreteCurve(params[keep], nodes[keep])
    rough.validate()
    curve = reparametrize_constant_speed(rough, n=n)
    curve.nodes[0] = curve.nodes[-1] = (0.0, 1.0)
    curve.boundary_tangents = np.array([[0.0, -1.0], [0.0, 1.0]])
    curve.metadata = {
        "kind": "singular_datum",
        "lam": lam,
        "h": h,
        "x": float(x),
        "eta": float(eta),
        "fig8_p": fig8.p,
        "fig8_scale": float(sigma),
        "loop_energy_exact": fig8.segment_energy(),
    }
    curve.validate()
    return curve
