"""Geometry of curves in the hyperbolic half-plane.

The half-plane H = {(x, y) : y > 0} carries the metric <.,.> / y^2, where
<.,.> is the Euclidean inner product.  Profile curves of surfaces of
revolution live here: rotating a curve about the boundary axis {y = 0}
turns its weighted elastic energy into the Willmore energy of the surface,
up to a boundary correction.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Optional

import numpy as np

from .numerics import fd1, fd2, integrate_samples


@dataclasses.dataclass(frozen=True)
class HPoint:
    x: float
    y: float

    def validate(self) -> None:
        if not (np.isfinite(self.x) and np.isfinite(self.y)):
            raise ValueError("point coordinates must be finite")
        if self.y <= 0.0:
            raise ValueError("point must lie in the open upper half-plane")

    def as_complex(self) -> complex:
        return complex(self.x, self.y)


@dataclasses.dataclass(frozen=True)
class HVector:
    """Tangent vector attached to a base point of the half-plane."""

    base: HPoint
    vx: float
    vy: float

    def validate(self) -> None:
        self.base.validate()
        if not (np.isfinite(self.vx) and np.isfinite(self.vy)):
            raise ValueError("vector components must be finite")

    def hyperbolic_norm(self) -> float:
        return float(np.hypot(self.vx, self.vy) / self.base.y)

    def as_complex(self) -> complex:
        return complex(self.vx, self.vy)


@dataclasses.dataclass
class DiscreteCurve:
    """Sampled curve in the half-plane.

    params is strictly increasing; nodes has shape (N, 2) with positive
    second column.  A closed curve duplicates its first node at the end.
    boundary_tangents, when present, stores the clamped unit tangent
    directions (Euclidean-normalized) at the two ends.
    """

    params: np.ndarray
    nodes: np.ndarray
    closed: bool = False
    boundary_tangents: Optional[np.ndarray] = None  # shape (2, 2)
    metadata: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self) -> None:
        self.params = np.asarray(self.params, dtype=float)
        self.nodes = np.asarray(self.nodes, dtype=float)
        if self.boundary_tangents is not None:
            self.boundary_tangents = np.asarray(self.boundary_tangents, dtype=float)

    def validate(self) -> None:
        if self.params.ndim != 1 or self.nodes.shape != (len(self.params), 2):
            raise ValueError("params must be (N,) and nodes (N, 2)")
        if len(self.params) < 4:
            raise ValueError("need at least 4 nodes")
        if not np.all(np.isfinite(self.params)) or not np.all(np.isfinite(self.nodes)):
            raise ValueError("non-finite curve data")
        if np.any(np.diff(self.params) <= 0.0):
            raise ValueError("params must be strictly increasing")
        if np.any(self.nodes[:, 1] <= 0.0):
            raise ValueError("curve must stay in the open upper half-plane")
        if self.closed and not np.allclose(self.nodes[0], self.nodes[-1], atol=1e-9):
            raise ValueError("closed curve must duplicate its first node at the end")

    @property
    def n(self) -> int:
        return len(self.params)

    def heights(self) -> np.ndarray:
        return self.nodes[:, 1]

    def copy(self) -> "DiscreteCurve":
        return DiscreteCurve(
            self.params.copy(),
            self.nodes.copy(),
            closed=self.closed,
            boundary_tangents=None if self.boundary_tangents is None else self.boundary_tangents.copy(),
            metadata=dict(self.metadata),
        )


# ---------------------------------------------------------------------------
# metric and covariant derivative

def metric_dot(v: np.ndarray, w: np.ndarray, heights: np.ndarray) -> np.ndarray:
    """Pointwise hyperbolic inner product of vector fields (N, 2)."""
    return (v[:, 0] * w[:, 0] + v[:, 1] * w[:, 1]) / heights**2


def metric_norm(v: np.ndarray, heights: np.ndarray) -> np.ndarray:
    return np.sqrt(np.maximum(metric_dot(v, v, heights), 0.0))


def position_derivative(curve: DiscreteCurve) -> np.ndarray:
    """Parameter-derivative of the node positions, (N, 2)."""
    return fd1(curve.params, curve.nodes, periodic=curve.closed)


def param_speed(curve: DiscreteCurve, du: Optional[np.ndarray] = None) -> np.ndarray:
    """Hyperbolic speed |du/dparam|_g at each node."""
    if du is None:
        du = position_derivative(curve)
    return np.hypot(du[:, 0], du[:, 1]) / curve.nodes[:, 1]


def cov_derivative(curve: DiscreteCurve, field: np.ndarray,
                   du: Optional[np.ndarray] = None) -> np.ndarray:
    """Covariant parameter-derivative of a tangent field along the curve.

    In global half-plane coordinates, with u = (u1, u2) and X = (X1, X2):
        (D X)^1 = dX1 - (X1 du2 + X2 du1) / u2
        (D X)^2 = dX2 + (X1 du1 - X2 du2) / u2
    where d denotes the parameter-derivative.  du may be passed in to avoid
    recomputing the position derivative.
    """
    field = np.asarray(field, dtype=float)
    if du is None:
        du = position_derivative(curve)
    dx = fd1(curve.params, field, periodic=curve.closed)
    y = curve.nodes[:, 1]
    out = np.empty_like(field)
    out[:, 0] = dx[:, 0] - (field[:, 0] * du[:, 1] + field[:, 1] * du[:, 0]) / y
    out[:, 1] = dx[:, 1] + (field[:, 0] * du[:, 0] - field[:, 1] * du[:, 1]) / y
    return out


def unit_tangent(curve: DiscreteCurve, du: Optional[np.ndarray] = None) -> np.ndarray:
    """Hyperbolic-unit tangent field (Euclidean length equals the height)."""
    if du is None:
        du = position_derivative(curve)
    speed = np.hypot(du[:, 0], du[:, 1]) / curve.nodes[:, 1]
    return du / speed[:, None]


def curvature_vector(curve: DiscreteCurve, du: Optional[np.ndarray] = None) -> np.ndarray:
    """Curvature vector field: covariant arclength-derivative of the
    hyperbolic-unit tangent."""
    if du is None:
        du = position_derivative(curve)
    speed = param_speed(curve, du)
    tang = unit_tangent(curve, du)
    return cov_derivative(curve, tang, du) / speed[:, None]


def scalar_curvature(curve: DiscreteCurve) -> np.ndarray:
    """Signed geodesic curvature: curvature vector against the left normal."""
    k = curvature_vector(curve)
    t = unit_tangent(curve)
    # left normal: tangent rotated by +90 degrees (conformal metric, so the
    # Euclidean rotation is also a metric rotation)
    normal = np.column_stack([-t[:, 1], t[:, 0]])
    return metric_dot(k, normal, curve.nodes[:, 1])


# ---------------------------------------------------------------------------
# energies

def hyperbolic_length(curve: DiscreteCurve) -> float:
    return integrate_samples(curve.params, param_speed(curve))


def elastic_energy(curve: DiscreteCurve) -> float:
    """Integral of the squared hyperbolic norm of the curvature vector with
    respect to hyperbolic arclength."""
    du = position_derivative(curve)
    k = curvature_vector(curve, du)
    speed = param_speed(curve, du)
    y = curve.nodes[:, 1]
    return integrate_samples(curve.params, metric_dot(k, k, y) * speed)


def elastic_energy_graph(x: np.ndarray, g: np.ndarray, gp: np.ndarray, gpp: np.ndarray) -> float:
    """Elastic energy of a graph curve u(x) = (x, g(x)) from samples of g
    and its first two derivatives:

        E = int g * g''^2 / (1 + g'^2)^(5/2) dx
            + int 1 / (g * sqrt(1 + g'^2)) dx
            + 2 * [g' / sqrt(1 + g'^2)] evaluated between the endpoints.
    """
    x = np.asarray(x, dtype=float)
    g = np.asarray(g, dtype=float)
    gp = np.asarray(gp, dtype=float)
    gpp = np.asarray(gpp, dtype=float)
    if np.any(g <= 0.0):
        raise ValueError("graph must stay in the upper half-plane")
    w = 1.0 + gp**2
    bulk = g * gpp**2 / w**2.5 + 1.0 / (g * np.sqrt(w))
    boundary = gp / np.sqrt(w)
    return integrate_samples(x, bulk) + 2.0 * (boundary[-1] - boundary[0])


def willmore_energy(curve: DiscreteCurve) -> float:
    """Willmore energy of the surface of revolution, via the identity
    (2/pi) W = E - 4 [tau_y]_boundary with tau the Euclidean-unit tangent."""
    energy = elastic_energy(curve)
    if curve.closed:
        boundary = 0.0
    else:
        du = fd1(curve.params, curve.nodes)
        tau_y = du[:, 1] / np.hypot(du[:, 0], du[:, 1])
        boundary = tau_y[-1] - tau_y[0]
    return 0.5 * np.pi * (energy - 4.0 * boundary)


def willmore_energy_direct(curve: DiscreteCurve) -> float:
    """Willmore energy from the mean curvature of the revolved surface.

    Independent of the elastic-energy route: uses the principal curvatures
    of the surface of revolution directly.
    """
    du = fd1(curve.params, curve.nodes, periodic=curve.closed)
    ddu = fd2(curve.params, curve.nodes, periodic=curve.closed)
    y = curve.nodes[:, 1]
    sp = np.hypot(du[:, 0], du[:, 1])
    mean = 0.5 * (du[:, 0] / (y * sp) - (du[:, 0] * ddu[:, 1] - ddu[:, 0] * du[:, 1]) / sp**3)
    return 2.0 * np.pi * integrate_samples(curve.params, mean**2 * y * sp)


def surface_area(curve: DiscreteCurve) -> float:
    """Area of the revolved surface: 2 pi int y |du| dparam."""
    du = fd1(curve.params, curve.nodes, periodic=curve.closed)
    sp = np.hypot(du[:, 0], du[:, 1])
    return 2.0 * np.pi * integrate_samples(curve.params, curve.nodes[:, 1] * sp)


def total_absolute_curvature(curve: DiscreteCurve) -> float:
    k = curvature_vector(curve)
    speed = param_speed(curve)
    return integrate_samples(curve.params, metric_norm(k, curve.nodes[:, 1]) * speed)


# ---------------------------------------------------------------------------
# Moebius isometries

@dataclasses.dataclass(frozen=True)
class MoebiusMap:
    """Orientation-preserving isometry z -> (a z + b) / (c z + d) with real
    coefficients and positive determinant."""

    a: float
    b: float
    c: float
    d: float

    def validate(self) -> None:
        det = self.a * self.d - self.b * self.c
        if not np.isfinite(det) or det <= 0.0:
            raise ValueError("coefficients must be real with positive determinant")

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def apply_complex(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def derivative(self, z):
        return self.det() / (self.c * z + self.d) ** 2

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self after other."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    @staticmethod
    def identity() -> "MoebiusMap":
        return MoebiusMap(1.0, 0.0, 0.0, 1.0)

    @staticmethod
    def translation(b: float) -> "MoebiusMap":
        return MoebiusMap(1.0, b, 0.0, 1.0)

    @staticmethod
    def scaling(s: float) -> "MoebiusMap":
        if s <= 0.0:
            raise ValueError("scaling factor must be positive")
        return MoebiusMap(s, 0.0, 0.0, 1.0)

    @staticmethod
    def rotation_about_i(alpha: float) -> "MoebiusMap":
        """Elliptic isometry fixing i; rotates tangent vectors at i by the
        angle 2*alpha."""
        return MoebiusMap(np.cos(alpha), np.sin(alpha), -np.sin(alpha), np.cos(alpha))


def apply_moebius_point(phi: MoebiusMap, p: HPoint) -> HPoint:
    w = phi.apply_complex(p.as_complex())
    return HPoint(float(w.real), float(w.imag))


def apply_moebius_vector(phi: MoebiusMap, v: HVector) -> HVector:
    z = v.base.as_complex()
    w = phi.apply_complex(z)
    dw = phi.derivative(z) * v.as_complex()
    return HVector(HPoint(float(w.real), float(w.imag)), float(dw.real), float(dw.imag))


def apply_moebius(phi: MoebiusMap, curve: DiscreteCurve) -> DiscreteCurve:
    z = curve.nodes[:, 0] + 1j * curve.nodes[:, 1]
    w = phi.apply_complex(z)
    out = curve.copy()
    out.nodes = np.column_stack([w.real, w.imag])
    if curve.boundary_tangents is not None:
        dz = phi.derivative(z[[0, -1]])
        tv = (curve.boundary_tangents[:, 0] + 1j * curve.boundary_tangents[:, 1]) * dz
        tv = tv / np.abs(tv)
        out.boundary_tangents = np.column_stack([tv.real, tv.imag])
    return out


def isometry_to_standard(v: HVector, y: Optional[float] = None) -> MoebiusMap:
    """Isometry moving the base point of v onto the vertical axis at height
    y (default: the original height), with v mapped to a horizontal vector of
    equal hyperbolic norm pointing in the positive x-direction."""
    v.validate()
    p = v.base
    target = p.y if y is None else float(y)
    if target <= 0.0:
        raise ValueError("target height must be positive")
    # move base point to i
    to_i = MoebiusMap.scaling(1.0 / p.y).compose(MoebiusMap.translation(-p.x))
    w = v.as_complex() / p.y  # tangent at i after normalization
    alpha = -0.5 * np.arctan2(w.imag, w.real)
    rot = MoebiusMap.rotation_about_i(alpha)
    back = MoebiusMap.scaling(target)
    return back.compose(rot).compose(to_i)


def reparametrize_constant_speed(
    curve: DiscreteCurve,
    n: Optional[int] = None,
    refine: int = 4,
) -> DiscreteCurve:
    """Resample the curve at uniform hyperbolic arclength.

    Nodes are interpolated with cubic splines; arclength is accumulated by
    per-interval Gauss quadrature on a refined grid.  Endpoints are kept
    exactly; the parameter interval is reused.
    """
    from scipy.interpolate import CubicSpline

    from .numerics import cumulative_gauss

    n = n or curve.n
    if curve.closed:
        spl = CubicSpline(curve.params, curve.nodes, bc_type="periodic")
    else:
        spl = CubicSpline(curve.params, curve.nodes)
    dspl = spl.derivative()

    def speed(t):
        d = dspl(t)
        y = spl(t)[..., 1]
        return np.hypot(d[..., 0], d[..., 1]) / y

    fine = np.linspace(curve.params[0], curve.params[-1], refine * (curve.n - 1) + 1)
    s_fine = cumulative_gauss(speed, fine, order=8)
    s_targets = np.linspace(0.0, s_fine[-1], n)
    t_new = np.interp(s_targets, s_fine, fine)
    # a Newton sweep sharpens the inversion of the arclength map
    for _ in range(3):
        resid = np.interp(t_new, fine, s_fine) - s_targets
        t_new = np.clip(t_new - resid / speed(t_new), fine[0], fine[-1])
    t_new[0], t_new[-1] = fine[0], fine[-1]
    nodes = spl(t_new)
    nodes[0], nodes[-1] = curve.nodes[0], curve.nodes[-1]
    out = DiscreteCurve(
        np.linspace(curve.params[0], curve.params[-1], n),
        nodes,
        closed=curve.closed,
        boundary_tangents=None if curve.boundary_tangents is None else curve.boundary_tangents.copy(),
        metadata=dict(curve.metadata),
    )
    out.validate()
    return out


def reflect(curve: DiscreteCurve) -> DiscreteCurve:
    """Orientation-reversing isometry z -> -conj(z) applied nodewise."""
    out = curve.copy()
    out.nodes = np.column_stack([-curve.nodes[:, 0], curve.nodes[:, 1]])
    if curve.boundary_tangents is not None:
        out.boundary_tangents = np.column_stack(
            [-curve.boundary_tangents[:, 0], curve.boundary_tangents[:, 1]]
        )
    return out
