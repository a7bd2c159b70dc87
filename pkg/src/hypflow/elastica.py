"""Closed-form theory of elastic curves in the hyperbolic half-plane.

An elastica with multiplier lam satisfies 2 k'' + k^3 - (lam + 2) k = 0 in
arclength, with first integral

    k'^2 + k^4 / 4 - (lam + 2) / 2 * k^2 = C.

Solutions fall into four families determined by the peak curvature:
circular, orbit-like, asymptotically geodesic and wave-like.  Non-circular
families admit an explicit parametrization through a Moebius-type map f
applied to a complex antiderivative of 1/theta, theta = k^2 - lam + 2ik'.
"""

from __future__ import annotations

import dataclasses
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .geometry import DiscreteCurve, HPoint, HVector, scalar_curvature
from .numerics import cumulative_gauss, fd1, gauss_legendre_panels
from .special import (
    complete_e,
    complete_k,
    ellip_e_inc,
    jacobi_am,
    jacobi_cn,
    jacobi_dn,
    jacobi_sn,
)

CIRCULAR = "circular"
ORBITLIKE = "orbitlike"
ASYMPTOTICALLY_GEODESIC = "asymptotically_geodesic"
WAVELIKE = "wavelike"

# upper bound of the multiplier window in which figure-eights close up
FIG8_LAMBDA_MAX = 64.0 / np.pi**2 - 2.0


@dataclasses.dataclass(frozen=True)
class ElasticaParams:
    """Classified elastica data.

    kappa0 is the signed peak curvature; p the elliptic modulus (0 for
    circular, 1 for asymptotically geodesic); r the arclength frequency;
    first_integral the conserved quantity C.
    """

    family: str
    lam: float
    kappa0: float
    p: float
    r: float
    first_integral: float

    def validate(self) -> None:
        if self.family not in (CIRCULAR, ORBITLIKE, ASYMPTOTICALLY_GEODESIC, WAVELIKE):
            raise ValueError(f"unknown family {self.family!r}")
        if self.lam + 2.0 <= 0.0:
            raise ValueError("multiplier must satisfy lam > -2")
        if self.kappa0 == 0.0:
            raise ValueError("peak curvature must be nonzero")


def classify(kappa0_sq: float, lam: float, sign: int = 1) -> ElasticaParams:
    """Classify the elastica with peak curvature kappa0^2 and multiplier lam."""
    if lam + 2.0 <= 0.0:
        raise ValueError("multiplier must satisfy lam > -2")
    if kappa0_sq < lam + 2.0:
        raise ValueError("no elastica with kappa0^2 < lam + 2")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    kappa0 = sign * float(np.sqrt(kappa0_sq))
    big_c = kappa0_sq**2 / 4.0 - (lam + 2.0) / 2.0 * kappa0_sq
    rtol = 1e-12 * max(1.0, abs(kappa0_sq))
    if abs(kappa0_sq - (lam + 2.0)) <= rtol:
        return ElasticaParams(CIRCULAR, lam, kappa0, 0.0, 0.0, big_c)
    if abs(kappa0_sq - (2.0 * lam + 4.0)) <= rtol:
        r = 0.5 * np.sqrt(2.0 * lam + 4.0)
        return ElasticaParams(ASYMPTOTICALLY_GEODESIC, lam, kappa0, 1.0, r, 0.0)
    if kappa0_sq < 2.0 * lam + 4.0:
        p = float(np.sqrt(2.0 - (2.0 * lam + 4.0) / kappa0_sq))
        r = 0.5 * np.sqrt((2.0 * lam + 4.0) / (2.0 - p * p))
        return ElasticaParams(ORBITLIKE, lam, kappa0, p, r, big_c)
    p = float(np.sqrt(kappa0_sq / (2.0 * kappa0_sq - 2.0 * lam - 4.0)))
    r = 0.5 * np.sqrt((2.0 * lam + 4.0) / (2.0 * p * p - 1.0))
    return ElasticaParams(WAVELIKE, lam, kappa0, p, r, big_c)


def curvature_profile(params: ElasticaParams, s: np.ndarray) -> np.ndarray:
    """Signed curvature k(s) with the peak at s = 0."""
    s = np.asarray(s, dtype=float)
    k0, r, p = params.kappa0, params.r, params.p
    if params.family == CIRCULAR:
        return np.full_like(s, k0)
    if params.family == ORBITLIKE:
        return k0 * jacobi_dn(r * s, p)
    if params.family == ASYMPTOTICALLY_GEODESIC:
        return k0 / np.cosh(r * s)
    return k0 * jacobi_cn(r * s, p)


def curvature_derivative(params: ElasticaParams, s: np.ndarray) -> np.ndarray:
    """Arclength derivative k'(s)."""
    s = np.asarray(s, dtype=float)
    k0, r, p = params.kappa0, params.r, params.p
    if params.family == CIRCULAR:
        return np.zeros_like(s)
    if params.family == ORBITLIKE:
        return -k0 * r * p * p * jacobi_sn(r * s, p) * jacobi_cn(r * s, p)
    if params.family == ASYMPTOTICALLY_GEODESIC:
        return -k0 * r * np.tanh(r * s) / np.cosh(r * s)
    return -k0 * r * jacobi_sn(r * s, p) * jacobi_dn(r * s, p)


def first_integral_residual(curve: DiscreteCurve, lam: float) -> float:
    """Spread of k'^2 + k^4/4 - (lam+2)/2 k^2 over the interior nodes of an
    arclength-parametrized curve.  Zero for an exact elastica."""
    k = scalar_curvature(curve)
    kp = fd1(curve.params, k, periodic=curve.closed)
    vals = kp**2 + k**4 / 4.0 - 0.5 * (lam + 2.0) * k**2
    # the one-sided boundary stencils of the curvature pollute the first
    # interior differences, so drop four nodes per end
    inner = vals if curve.closed else vals[4:-4]
    return float(inner.max() - inner.min())


# ---------------------------------------------------------------------------
# explicit parametrization

def canonical_coefficients(params: ElasticaParams, y: float = 1.0) -> list[tuple[float, float]]:
    """Coefficient pairs (a, c) with ac = -(lam^2 + 4C)/4 and
    -a y^2 + c = (kappa0^2 - lam) y.

    The compatibility quadratic a^2 y^2 + a (kappa0^2 - lam) y + q = 0 has
    discriminant 4 kappa0^2 y^2 > 0, so there are exactly two pairs.
    """
    if y <= 0.0:
        raise ValueError("height must be positive")
    k0sq = params.kappa0**2
    lam = params.lam
    ak0 = abs(params.kappa0)
    out = []
    for s in (1.0, -1.0):
        a = (lam - k0sq + 2.0 * s * ak0) / (2.0 * y)
        c = y * (k0sq - lam + 2.0 * s * ak0) / 2.0
        out.append((a, c))
    return out


def _riccati_map(a: float, c: float):
    """The map f with f' = a f^2 + c used by the explicit parametrization."""
    if a == 0.0 and c == 0.0:
        raise ValueError("degenerate coefficients")
    if a == 0.0:
        return lambda z: c * z
    if c == 0.0:
        return lambda z: -1.0 / (a * z)
    if a > 0.0 and c > 0.0:
        s = np.sqrt(a * c)
        return lambda z: np.sqrt(c / a) * np.tan(s * z)
    if a < 0.0 and c < 0.0:
        s = np.sqrt(a * c)
        return lambda z: -np.sqrt(c / a) / np.tan(s * z)
    s = np.sqrt(-a * c)
    return lambda z: np.sqrt(-c / a) * np.tanh(s * z)


def _initial_offset(a: float, c: float, y: float) -> complex:
    """Solve f(z1) = iy for z1 on the imaginary axis, or raise ValueError."""
    if a == 0.0:
        return 1j * y / c
    if c == 0.0:
        return 1j / (a * y)
    if a > 0.0 and c > 0.0:
        arg = y * np.sqrt(a / c)
        if arg >= 1.0:
            raise ValueError("tan-branch offset not solvable")
        return 1j * np.arctanh(arg) / np.sqrt(a * c)
    if a < 0.0 and c < 0.0:
        arg = np.sqrt(c / a) / y
        if arg >= 1.0:
            raise ValueError("cot-branch offset not solvable")
        return 1j * np.arctanh(arg) / np.sqrt(a * c)
    return 1j * np.arctan(y * np.sqrt(-a / c)) / np.sqrt(-a * c)


def _theta(params: ElasticaParams, s: np.ndarray) -> np.ndarray:
    k = curvature_profile(params, s)
    kp = curvature_derivative(params, s)
    return k * k - params.lam + 2j * kp


def parametrize(
    params: ElasticaParams,
    s_lo: float,
    s_hi: float,
    n: int,
    y: float = 1.0,
) -> DiscreteCurve:
    """Arclength parametrization of the elastica on [s_lo, s_hi] in canonical
    position: the curvature peak s = 0 sits at (0, y) with horizontal
    tangent.  Non-circular families only.
    """
    params.validate()
    if params.family == CIRCULAR:
        raise ValueError("explicit parametrization requires non-constant curvature")
    if s_hi <= s_lo or n < 4:
        raise ValueError("need s_lo < s_hi and at least 4 samples")
    grid = np.linspace(s_lo, s_hi, n)
    inv_theta = lambda s: 1.0 / _theta(params, s)

    last_err: Optional[Exception] = None
    for a, c in canonical_coefficients(params, y):
        try:
            z1 = _initial_offset(a, c, y)
        except ValueError as err:
            last_err = err
            continue
        f = _riccati_map(a, c)
        w = cumulative_gauss(inv_theta, grid, order=12).astype(complex)
        if s_lo != 0.0:
            w += gauss_legendre_panels(inv_theta, 0.0, s_lo, max(8, n // 8))
        gamma = f(w + z1)
        if not np.all(np.isfinite(gamma.real) & np.isfinite(gamma.imag)):
            last_err = ValueError("parametrization hit a pole of f")
            continue
        if np.any(gamma.imag <= 0.0):
            last_err = ValueError("parametrization left the upper half-plane")
            continue
        # unit hyperbolic speed check: |gamma'| = Im(gamma)
        dg = (a * gamma**2 + c) / _theta(params, grid)
        if not np.allclose(np.abs(dg), gamma.imag, rtol=1e-8, atol=1e-10):
            last_err = ValueError("speed check failed for coefficient pair")
            continue
        curve = DiscreteCurve(grid, np.column_stack([gamma.real, gamma.imag]))
        curve.metadata = {
            "family": params.family,
            "lam": params.lam,
            "kappa0": params.kappa0,
            "p": params.p,
            "r": params.r,
            "first_integral": params.first_integral,
            "a": a,
            "c": c,
            "z1_imag": z1.imag,
            "y": y,
        }
        curve.validate()
        return curve
    raise ValueError(f"no admissible coefficient pair: {last_err}")


def tangent_at(params: ElasticaParams, curve: DiscreteCurve, end: int = -1) -> HVector:
    """Exact unit tangent of a parametrized elastica at a grid endpoint,
    computed from the first-order relation gamma' = (a gamma^2 + c)/theta."""
    meta = curve.metadata
    z = curve.nodes[end, 0] + 1j * curve.nodes[end, 1]
    th = complex(_theta(params, np.asarray(curve.params[end])))
    dg = (meta["a"] * z * z + meta["c"]) / th
    return HVector(HPoint(z.real, z.imag), dg.real, dg.imag)


# ---------------------------------------------------------------------------
# figure-eights

@dataclasses.dataclass(frozen=True)
class FigureEight:
    """Wave-like elastica whose arcs close up into a figure-eight."""

    lam: float
    p: float
    kappa0: float
    r: float
    first_integral: float
    closing_residual: float

    def params(self) -> ElasticaParams:
        return ElasticaParams(WAVELIKE, self.lam, self.kappa0, self.p,
                              self.r, self.first_integral)

    def half_period(self) -> float:
        """Arclength K(p)/r from the curvature peak to the axis crossing."""
        return complete_k(self.p) / self.r

    def segment_energy(self) -> float:
        """Elastic energy over one closed loop [-K/r, K/r], in closed form."""
        p = self.p
        ek, ee = complete_k(p), complete_e(p)
        return 2.0 * self.kappa0**2 / self.r * (ee - (1.0 - p * p) * ek) / (p * p)

    def end_tangent_ratio(self) -> float:
        """Slope Im/Re of gamma'(K/r), equal to -2 r kappa0 sqrt(1-p^2)/lam
        for kappa0 > 0."""
        return -2.0 * self.r * abs(self.kappa0) * np.sqrt(1.0 - self.p**2) / self.lam


def _fig8_closing_integral(p: float, lam: float) -> float:
    """Vertical-closing functional whose root in p yields a figure-eight."""
    k0sq = (2.0 * lam + 4.0) * p * p / (2.0 * p * p - 1.0)
    b = 4.0 * k0sq / (k0sq - lam) ** 2
    ratio = lam / k0sq

    def integrand(th: float) -> float:
        c2 = np.cos(th) ** 2
        return (np.sin(th) ** 2 - ratio) / ((1.0 - b * c2) * np.sqrt(1.0 - p * p * c2))

    val, _ = quad(integrand, 0.0, 0.5 * np.pi, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def figure_eight_solve(lam: float, sign: int = 1) -> FigureEight:
    """Find the wave-like modulus p so that the lam-elastica closes into a
    figure-eight.  Valid for 0 < lam < 64/pi^2 - 2."""
    if not (0.0 < lam < FIG8_LAMBDA_MAX):
        raise ValueError(f"figure-eights exist for 0 < lam < {FIG8_LAMBDA_MAX:.6f}")
    lo = 1.0 / np.sqrt(2.0) + 1e-9
    hi = 1.0 - 1e-13
    glo = _fig8_closing_integral(lo, lam)
    ghi = _fig8_closing_integral(hi, lam)
    if glo * ghi >= 0.0:
        # fall back to a scan for a sign change
        ps = np.linspace(lo, hi, 256)
        vals = [_fig8_closing_integral(pp, lam) for pp in ps]
        idx = next((i for i in range(len(ps) - 1) if vals[i] * vals[i + 1] < 0.0), None)
        if idx is None:
            raise ValueError("closing condition has no root for this multiplier")
        lo, hi = ps[idx], ps[idx + 1]
    p = brentq(_fig8_closing_integral, lo, hi, args=(lam,), xtol=1e-15, rtol=8.9e-16)
    residual = abs(_fig8_closing_integral(p, lam))
    k0sq = (2.0 * lam + 4.0) * p * p / (2.0 * p * p - 1.0)
    r = 0.5 * np.sqrt((2.0 * lam + 4.0) / (2.0 * p * p - 1.0))
    big_c = k0sq**2 / 4.0 - (lam + 2.0) / 2.0 * k0sq
    return FigureEight(lam, float(p), sign * float(np.sqrt(k0sq)), float(r),
                       float(big_c), float(residual))


def figure_eight_segment(fig8: FigureEight, n: int = 2001, y: float = 1.0) -> DiscreteCurve:
    """One closed loop of the figure-eight on [-K/r, K/r]."""
    half = fig8.half_period()
    curve = parametrize(fig8.params(), -half, half, n, y=y)
    gap = float(np.hypot(*(curve.nodes[-1] - curve.nodes[0])))
    curve.metadata["closure_gap"] = gap
    curve.metadata["closing_residual"] = fig8.closing_residual
    return curve


def figure_eight_end_tangent(fig8: FigureEight, curve: DiscreteCurve) -> HVector:
    """Euclidean-normalized tangent at the axis endpoint s = K/r."""
    v = tangent_at(fig8.params(), curve, end=-1)
    norm = float(np.hypot(v.vx, v.vy))
    return HVector(v.base, v.vx / norm, v.vy / norm)


# ---------------------------------------------------------------------------
# free orbit-like machinery

def _require_free_orbitlike(params: ElasticaParams) -> None:
    if params.family != ORBITLIKE or abs(params.lam) > 1e-12:
        raise ValueError("requires a free (lam = 0) orbit-like elastica")


def closing_multiplicity(params: ElasticaParams, alpha: float, beta: float) -> float:
    """Winding value of the closing condition for a free orbit-like
    elastica on [alpha, beta]; the segment can close up only when the value
    is a positive integer."""
    _require_free_orbitlike(params)
    if beta <= alpha:
        raise ValueError("need alpha < beta")
    p, r = params.p, params.r
    lo = jacobi_am(r * alpha, p)
    hi = jacobi_am(r * beta, p)
    q = p * p * (2.0 - p * p)

    def integrand(th: float) -> float:
        s2 = np.sin(th) ** 2
        return np.sqrt(1.0 - p * p * s2) / (1.0 - q * s2)

    val, _ = quad(integrand, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=400)
    return 0.5 * np.sqrt(1.0 - p * p) * np.sqrt(2.0 - p * p) * val / np.pi


def orbitlike_segment_energy(params: ElasticaParams, alpha: float, beta: float) -> float:
    """Elastic energy of a canonical free orbit-like segment, in closed form
    via incomplete second-kind integrals."""
    _require_free_orbitlike(params)
    if beta <= alpha:
        raise ValueError("need alpha < beta")
    p, r = params.p, params.r
    lo = jacobi_am(r * alpha, p)
    hi = jacobi_am(r * beta, p)
    return 4.0 / np.sqrt(2.0 - p * p) * (ellip_e_inc(hi, p) - ellip_e_inc(lo, p))


def _closing_window_sup(delta: float, n_p: int = 400) -> float:
    """Supremum over the modulus of the closing integral taken over the
    amplitude window (-delta, pi + delta)."""
    best = 0.0
    for p in np.linspace(1e-4, 1.0 - 1e-7, n_p):
        q = p * p * (2.0 - p * p)

        def integrand(th: float) -> float:
            s2 = np.sin(th) ** 2
            return np.sqrt(1.0 - p * p * s2) / (1.0 - q * s2)

        # one half-period plus the symmetric overhang of width delta
        full, _ = quad(integrand, -0.5 * np.pi, 0.5 * np.pi, epsabs=1e-12, limit=200)
        over, _ = quad(integrand, 0.0, delta, epsabs=1e-12, limit=200)
        val = 0.5 * np.sqrt(1.0 - p * p) * np.sqrt(2.0 - p * p) * (full + 2.0 * over)
        best = max(best, val)
    return best


def heart_energy_gap(delta: Optional[float] = None) -> tuple[float, float]:
    """Uniform energy gap above 8 for symmetric closed orbit-like segments
    whose curvature attains its minimum at the symmetry point.

    Returns (delta, gap): delta is an overhang angle for which the closing
    integral over (-delta, pi + delta) stays below pi for every modulus, and
    gap = (8/sqrt(2)) sin(delta) bounds E - 8 from below.
    """
    if delta is None:
        lo, hi = 0.0, 0.25 * np.pi
        if _closing_window_sup(hi) < np.pi:
            delta = hi
        else:
            for _ in range(40):
                mid = 0.5 * (lo + hi)
                if _closing_window_sup(mid, n_p=120) < np.pi:
                    lo = mid
                else:
                    hi = mid
            delta = 0.9 * lo  # stay clearly inside the admissible window
    if not (0.0 < delta < 0.25 * np.pi):
        raise ValueError("overhang angle must lie in (0, pi/4)")
    if _closing_window_sup(delta) >= np.pi:
        raise ValueError("closing integral reaches pi for this overhang angle")
    gap = 8.0 / np.sqrt(2.0) * np.sin(delta)
    return float(delta), float(gap)
