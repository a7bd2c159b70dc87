"""Embedding and bound checks for discrete curves in the half-plane.

Provides a segment-pair self-intersection detector, the energy-threshold
embeddedness criterion (an immersed curve with elastic energy at most 8 is
embedded), and monitors for the uniform height and norm bounds that hold
along energy-bounded families with fixed clamped ends.
"""

from __future__ import annotations

import dataclasses
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .geometry import DiscreteCurve, elastic_energy


NEAR_TOUCH_TOL = 1e-7
ENERGY_THRESHOLD = 8.0
THRESHOLD_BAND = 1e-3


@dataclasses.dataclass
class IntersectionReport:
    """Self-intersection summary of a single curve.

    pairs lists (param_s, param_t) with param_s < param_t for each detected
    crossing or near-touch; embedded is True iff pairs is empty.
    """

    pairs: List[Tuple[float, float]]
    embedded: bool
    min_height: float
    max_norm: float

    def as_dict(self) -> dict:
        return {
            "pairs": [[float(a), float(b)] for a, b in self.pairs],
            "embedded": bool(self.embedded),
            "min_height": float(self.min_height),
            "max_norm": float(self.max_norm),
        }


def _segment_distance(p0, p1, q0, q1) -> float:
    """Euclidean distance between two closed segments."""
    d1 = p1 - p0
    d2 = q1 - q0
    r = p0 - q0
    a = float(d1 @ d1)
    e = float(d2 @ d2)
    f = float(d2 @ r)
    if a <= 1e-300 and e <= 1e-300:
        return float(np.hypot(*r))
    if a <= 1e-300:
        s, t = 0.0, np.clip(f / e, 0.0, 1.0)
    else:
        c = float(d1 @ r)
        if e <= 1e-300:
            t, s = 0.0, np.clip(-c / a, 0.0, 1.0)
        else:
            b = float(d1 @ d2)
            denom = a * e - b * b
            s = np.clip((b * f - c * e) / denom, 0.0, 1.0) if denom > 0.0 else 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = np.clip(-c / a, 0.0, 1.0)
            elif t > 1.0:
                t = 1.0
                s = np.clip((b - c) / a, 0.0, 1.0)
    closest1 = p0 + s * d1
    closest2 = q0 + t * d2
    return float(np.hypot(*(closest1 - closest2)))


def _segment_crossing(p0, p1, q0, q1) -> Optional[Tuple[float, float]]:
    """Transversal crossing parameters (s, t) in [0,1]^2, or None."""
    d1 = p1 - p0
    d2 = q1 - q0
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(denom) <= 1e-300:
        return None
    r = q0 - p0
    s = (r[0] * d2[1] - r[1] * d2[0]) / denom
    t = (r[0] * d1[1] - r[1] * d1[0]) / denom
    if -1e-12 <= s <= 1.0 + 1e-12 and -1e-12 <= t <= 1.0 + 1e-12:
        return float(np.clip(s, 0.0, 1.0)), float(np.clip(t, 0.0, 1.0))
    return None


def self_intersections(curve: DiscreteCurve, tol: float = NEAR_TOUCH_TOL) -> IntersectionReport:
    """Detect all transversal self-crossings and near-touches within tol.

    Segment pairs closer than 2 grid cells along the parameter (with
    wrap-around for closed curves) are excluded, since a discrete curve
    trivially touches itself at shared nodes.
    """
    nodes = curve.nodes
    params = curve.params
    nseg = len(nodes) - 1
    lo = np.minimum(nodes[:-1], nodes[1:])
    hi = np.maximum(nodes[:-1], nodes[1:])
    pairs: List[Tuple[float, float]] = []
    for i in range(nseg):
        # bounding-box prefilter against all later segments
        j0 = i + 3
        if j0 >= nseg:
            continue
        js = np.arange(j0, nseg)
        mask = ~(
            (hi[js, 0] + tol < lo[i, 0]) | (lo[js, 0] - tol > hi[i, 0])
            | (hi[js, 1] + tol < lo[i, 1]) | (lo[js, 1] - tol > hi[i, 1])
        )
        for j in js[mask]:
            if curve.closed and i < 2 and j >= nseg - (2 - i):
                continue  # wrap-around adjacency
            hit = _segment_crossing(nodes[i], nodes[i + 1], nodes[j], nodes[j + 1])
            if hit is None:
                if _segment_distance(nodes[i], nodes[i + 1], nodes[j], nodes[j + 1]) >= tol:
                    continue
                s = t = 0.5
            else:
                s, t = hit
            ps = params[i] + s * (params[i + 1] - params[i])
            pt = params[j] + t * (params[j + 1] - params[j])
            pairs.append((float(ps), float(pt)))
    return IntersectionReport(
        pairs=pairs,
        embedded=not pairs,
        min_height=float(nodes[:, 1].min()),
        max_norm=float(np.hypot(nodes[:, 0], nodes[:, 1]).max()),
    )


def liyau_check(curve: DiscreteCurve, tol: float = NEAR_TOUCH_TOL) -> dict:
    """Evaluate the energy-threshold embeddedness criterion on one curve.

    Returns a dict with the energy, the embeddedness verdict, and a status:
    "holds" when the implication (energy <= 8 implies embedded) is not
    violated, "threshold" when the energy sits within 1e-3 of 8 (the
    discrete energy cannot resolve the strict/non-strict boundary), and
    "violated" when a sub-threshold curve is found non-embedded.
    """
    energy = elastic_energy(curve)
    report = self_intersections(curve, tol=tol)
    if abs(energy - ENERGY_THRESHOLD) <= THRESHOLD_BAND:
        status = "threshold"
    elif energy < ENERGY_THRESHOLD and not report.embedded:
        status = "violated"
    else:
        status = "holds"
    return {
        "energy": float(energy),
        "embedded": bool(report.embedded),
        "crossings": len(report.pairs),
        "status": status,
    }


def height_bound_monitor(curves: Sequence[DiscreteCurve], alpha: float) -> Tuple[float, List[str]]:
    """Infimum of minimum heights over a family of curves.

    Hypotheses for the uniform lower height bound: every curve has endpoint
    heights >= alpha and elastic energy < 8.  Violations are reported per
    curve (not fatal); when no curve violates them the returned infimum is
    asserted positive.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    violations: List[str] = []
    inf_height = np.inf
    for k, curve in enumerate(curves):
        heights = curve.heights()
        inf_height = min(inf_height, float(heights.min()))
        if heights[0] < alpha or heights[-1] < alpha:
            violations.append(f"curve {k}: endpoint height below alpha={alpha}")
        energy = elastic_energy(curve)
        if energy >= ENERGY_THRESHOLD:
            violations.append(f"curve {k}: energy {energy:.6f} not below 8")
    if not violations and not inf_height > 0.0:
        raise AssertionError("height bound failed although hypotheses hold")
    return float(inf_height), violations


def norm_bound_monitor(curves: Sequence[DiscreteCurve]) -> Tuple[float, List[str]]:
    """Maximum Euclidean norm over a family of curves.

    Hypotheses for the uniform bound: common clamped endpoints and elastic
    energy < 8 per curve.  Violations are reported per curve, not fatal.
    """
    curves = list(curves)
    violations: List[str] = []
    max_norm = 0.0
    ref_ends = None
    for k, curve in enumerate(curves):
        max_norm = max(max_norm, float(np.hypot(curve.nodes[:, 0], curve.nodes[:, 1]).max()))
        ends = (tuple(curve.nodes[0]), tuple(curve.nodes[-1]))
        if ref_ends is None:
            ref_ends = ends
        elif not (np.allclose(ends[0], ref_ends[0], atol=1e-9)
                  and np.allclose(ends[1], ref_ends[1], atol=1e-9)):
            violations.append(f"curve {k}: endpoints differ from curve 0")
        energy = elastic_energy(curve)
        if energy >= ENERGY_THRESHOLD:
            violations.append(f"curve {k}: energy {energy:.6f} not below 8")
    return float(max_norm), violations
