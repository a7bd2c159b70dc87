"""Finite-difference and quadrature helpers shared across the package.

Derivatives use second-order centered stencils in the interior and
one-sided stencils of matching order at the boundary.  Periodic data is
differentiated with wraparound stencils instead.
"""

from __future__ import annotations

import functools

import numpy as np
from scipy.integrate import simpson


@functools.lru_cache(maxsize=32)
def _leggauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def fornberg_weights(x0: float, xs: np.ndarray, order: int) -> np.ndarray:
    """Finite-difference weights for d^order/dx^order at x0 on nodes xs.

    Classic recursive algorithm; returns weights for the highest requested
    order only.
    """
    xs = np.asarray(xs, dtype=float)
    n = len(xs)
    if order >= n:
        raise ValueError("need at least order+1 nodes")
    c = np.zeros((n, order + 1))
    c1 = 1.0
    c4 = xs[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def _is_uniform(params: np.ndarray) -> bool:
    d = np.diff(params)
    return bool(np.allclose(d, d[0], rtol=1e-12, atol=1e-14 * max(1.0, abs(d[0]))))


def fd1(params: np.ndarray, values: np.ndarray, periodic: bool = False) -> np.ndarray:
    """First derivative of sampled values w.r.t. the parameter.

    values may be (N,) or (N, k); differentiation acts along axis 0.
    For periodic data the last sample must duplicate the first.
    """
    params = np.asarray(params, dtype=float)
    v = np.asarray(values, dtype=float)
    out = np.empty_like(v)
    if periodic:
        # drop the duplicated endpoint, differentiate with wraparound
        p = params[:-1]
        w = v[:-1]
        n = len(p)
        period = params[-1] - params[0]
        hp = np.diff(params)  # n entries: spacing i -> i+1
        hm = np.roll(hp, 1)
        a = -hp / (hm * (hm + hp))
        b = (hp - hm) / (hm * hp)
        c = hm / (hp * (hm + hp))
        sh = (n,) + (1,) * (v.ndim - 1)
        dw = (a.reshape(sh) * np.roll(w, 1, axis=0)
              + b.reshape(sh) * w
              + c.reshape(sh) * np.roll(w, -1, axis=0))
        out[:-1] = dw
        out[-1] = dw[0]
        del period
        return out
    n = len(params)
    if n < 3:
        raise ValueError("need at least 3 nodes")
    hm = params[1:-1] - params[:-2]
    hp = params[2:] - params[1:-1]
    a = -hp / (hm * (hm + hp))
    b = (hp - hm) / (hm * hp)
    c = hm / (hp * (hm + hp))
    sh = (n - 2,) + (1,) * (v.ndim - 1)
    out[1:-1] = a.reshape(sh) * v[:-2] + b.reshape(sh) * v[1:-1] + c.reshape(sh) * v[2:]
    # closed-form 3-node one-sided weights (same values fornberg_weights
    # would produce, without the per-call overhead)
    h1, h2 = hm[0], hp[0]
    out[0] = (-(2.0 * h1 + h2) / (h1 * (h1 + h2)) * v[0]
              + (h1 + h2) / (h1 * h2) * v[1]
              - h1 / (h2 * (h1 + h2)) * v[2])
    h1, h2 = hp[-1], hm[-1]
    out[-1] = ((2.0 * h1 + h2) / (h1 * (h1 + h2)) * v[-1]
               - (h1 + h2) / (h1 * h2) * v[-2]
               + h1 / (h2 * (h1 + h2)) * v[-3])
    return out


def fd2(params: np.ndarray, values: np.ndarray, periodic: bool = False) -> np.ndarray:
    """Second derivative of sampled values w.r.t. the parameter."""
    params = np.asarray(params, dtype=float)
    v = np.asarray(values, dtype=float)
    out = np.empty_like(v)
    if periodic:
        p = params[:-1]
        w = v[:-1]
        n = len(p)
        hp = np.diff(params)
        hm = np.roll(hp, 1)
        a = 2.0 / (hm * (hm + hp))
        b = -2.0 / (hm * hp)
        c = 2.0 / (hp * (hm + hp))
        sh = (n,) + (1,) * (v.ndim - 1)
        dw = (a.reshape(sh) * np.roll(w, 1, axis=0)
              + b.reshape(sh) * w
              + c.reshape(sh) * np.roll(w, -1, axis=0))
        out[:-1] = dw
        out[-1] = dw[0]
        return out
    n = len(params)
    if n < 4:
        raise ValueError("need at least 4 nodes")
    hm = params[1:-1] - params[:-2]
    hp = params[2:] - params[1:-1]
    a = 2.0 / (hm * (hm + hp))
    b = -2.0 / (hm * hp)
    c = 2.0 / (hp * (hm + hp))
    sh = (n - 2,) + (1,) * (v.ndim - 1)
    out[1:-1] = a.reshape(sh) * v[:-2] + b.reshape(sh) * v[1:-1] + c.reshape(sh) * v[2:]
    # 4-node one-sided stencils keep second-order accuracy at the ends
    wl = fornberg_weights(params[0], params[:4], 2)
    wr = fornberg_weights(params[-1], params[-4:], 2)
    out[0] = np.tensordot(wl, v[:4], axes=(0, 0))
    out[-1] = np.tensordot(wr, v[-4:], axes=(0, 0))
    return out


_simpson_weights_cache: dict = {}


def _uniform_simpson_weights(n: int) -> np.ndarray:
    w = _simpson_weights_cache.get(n)
    if w is None:
        w = np.ones(n)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w /= 3.0
        _simpson_weights_cache[n] = w
    return w


def integrate_samples(params: np.ndarray, values: np.ndarray) -> float:
    """Composite Simpson integral of node samples over the parameter grid."""
    params = np.asarray(params, dtype=float)
    values = np.asarray(values, dtype=float)
    n = len(params)
    if n >= 3 and n % 2 == 1:
        h = (params[-1] - params[0]) / (n - 1)
        d = np.diff(params)
        if abs(d.max() - d.min()) <= 1e-12 * abs(h):
            return float(h * (values @ _uniform_simpson_weights(n)))
    return float(simpson(values, x=params))


def gauss_legendre_panels(f, a: float, b: float, n_panels: int, order: int = 16) -> complex:
    """Integrate a (possibly complex-valued) vectorized callable with
    fixed-order Gauss-Legendre quadrature on uniform panels."""
    nodes, weights = _leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    xs = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    ws = (half[:, None] * weights[None, :]).ravel()
    return np.sum(ws * f(xs))


def cumulative_gauss(f, grid: np.ndarray, order: int = 8) -> np.ndarray:
    """Cumulative integral of f from grid[0] to each grid point, one
    Gauss-Legendre panel per grid interval."""
    nodes, weights = _leggauss(order)
    mid = 0.5 * (grid[:-1] + grid[1:])
    half = 0.5 * (grid[1:] - grid[:-1])
    xs = mid[:, None] + half[:, None] * nodes[None, :]
    vals = f(xs.ravel()).reshape(xs.shape)
    panel = half * (vals * weights[None, :]).sum(axis=1)
    out = np.empty(len(grid), dtype=panel.dtype)
    out[0] = 0.0
    np.cumsum(panel, out=out[1:])
    return out
