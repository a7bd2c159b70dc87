"""Legendre elliptic integrals and Jacobi elliptic functions.

All routines take the modulus p (not the parameter m = p^2).  Incomplete
integrals accept arbitrary real amplitudes via quasi-periodicity.  The
third-kind integral is evaluated through Carlson symmetric forms.
"""

from __future__ import annotations

import numpy as np
from scipy import special as sp


def _check_modulus(p, allow_one: bool = False) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    hi = 1.0 if allow_one else np.nextafter(1.0, 0.0)
    if np.any(p < 0.0) or np.any(p > hi) or not np.all(np.isfinite(p)):
        raise ValueError("modulus must satisfy 0 <= p < 1")
    return p


def _maybe_scalar(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


def complete_k(p):
    """Complete elliptic integral of the first kind K(p)."""
    p = _check_modulus(p)
    m1 = (1.0 - p) * (1.0 + p)  # complementary parameter, accurate near p = 1
    return _maybe_scalar(sp.ellipkm1(m1))


def complete_e(p):
    """Complete elliptic integral of the second kind E(p)."""
    p = _check_modulus(p, allow_one=True)
    m1 = (1.0 - p) * (1.0 + p)
    return _maybe_scalar(sp.ellipe(1.0 - m1))


def ellip_f(phi, p):
    """Incomplete integral of the first kind F(phi, p), any real phi."""
    p = _check_modulus(p, allow_one=True)
    return _maybe_scalar(sp.ellipkinc(np.asarray(phi, dtype=float), p * p))


def ellip_e_inc(phi, p):
    """Incomplete integral of the second kind E(phi, p), any real phi."""
    p = _check_modulus(p, allow_one=True)
    return _maybe_scalar(sp.ellipeinc(np.asarray(phi, dtype=float), p * p))


def complete_pi(alpha2, p):
    """Complete integral of the third kind Pi(alpha^2, p), alpha^2 < 1."""
    p = _check_modulus(p)
    alpha2 = np.asarray(alpha2, dtype=float)
    if np.any(alpha2 >= 1.0):
        raise ValueError("characteristic alpha^2 must be < 1")
    m = p * p
    rf = sp.elliprf(0.0, 1.0 - m, 1.0)
    rj = sp.elliprj(0.0, 1.0 - m, 1.0, 1.0 - alpha2)
    return _maybe_scalar(rf + alpha2 / 3.0 * rj)


def _pi_principal(alpha2, phi, m):
    """Pi on 0 <= phi <= pi/2 via Carlson RF and RJ."""
    s = np.sin(phi)
    c = np.cos(phi)
    s2 = s * s
    if np.any(alpha2 * s2 >= 1.0):
        raise ValueError("third-kind integral hits its pole: alpha^2 sin^2(phi) >= 1")
    x = c * c
    y = 1.0 - m * s2
    rf = sp.elliprf(x, y, 1.0)
    rj = sp.elliprj(x, y, 1.0, 1.0 - alpha2 * s2)
    return s * rf + alpha2 / 3.0 * s**3 * rj


def ellip_pi(alpha2, phi, p):
    """Incomplete integral of the third kind Pi(alpha^2; phi, p).

    Defined for any real phi with alpha^2 sin^2(phi) < 1 along the path,
    which for |phi| > pi/2 requires alpha^2 < 1.
    """
    p = _check_modulus(p)
    phi = np.asarray(phi, dtype=float)
    alpha2 = np.broadcast_to(np.asarray(alpha2, dtype=float), phi.shape if phi.ndim else ())
    m = p * p

    scalar = phi.ndim == 0
    phi = np.atleast_1d(phi).astype(float)
    alpha2 = np.atleast_1d(np.broadcast_to(alpha2, phi.shape)).astype(float)
    sign = np.sign(phi)
    aphi = np.abs(phi)
    n_half = np.floor((aphi + 0.5 * np.pi) / np.pi)  # number of half-periods
    rem = aphi - n_half * np.pi  # in [-pi/2, pi/2]
    if np.any((n_half > 0) & (alpha2 >= 1.0)):
        raise ValueError("third-kind integral hits its pole: alpha^2 >= 1 beyond pi/2")
    out = np.empty_like(phi)
    pos = rem >= 0.0
    out[pos] = _pi_principal(alpha2[pos], rem[pos], m)
    out[~pos] = -_pi_principal(alpha2[~pos], -rem[~pos], m)
    if np.any(n_half > 0):
        comp = complete_pi(alpha2[n_half > 0], p)
        out[n_half > 0] += 2.0 * n_half[n_half > 0] * comp
    out *= sign
    return out[0] if scalar else out


def jacobi_am(x, p):
    """Jacobi amplitude, the inverse of phi -> F(phi, p), any real x."""
    p = _check_modulus(p, allow_one=True)
    x = np.asarray(x, dtype=float)
    if np.any(p >= 1.0):
        if np.any(p < 1.0):
            raise ValueError("mixed moduli not supported")
        return _maybe_scalar(np.arctan(np.sinh(x)))
    m = p * p
    big_k = complete_k(p)
    n = np.round(x / (2.0 * big_k))
    x0 = x - 2.0 * n * big_k
    _, _, _, ph = sp.ellipj(x0, m)
    return _maybe_scalar(ph + n * np.pi)


def jacobi_sn(x, p):
    p = _check_modulus(p, allow_one=True)
    sn, _, _, _ = sp.ellipj(np.asarray(x, dtype=float), p * p)
    return _maybe_scalar(sn)


def jacobi_cn(x, p):
    p = _check_modulus(p, allow_one=True)
    _, cn, _, _ = sp.ellipj(np.asarray(x, dtype=float), p * p)
    return _maybe_scalar(cn)


def jacobi_dn(x, p):
    """dn(x, p) = sqrt(1 - p^2 sn(x, p)^2)."""
    p = _check_modulus(p, allow_one=True)
    _, _, dn, _ = sp.ellipj(np.asarray(x, dtype=float), p * p)
    return _maybe_scalar(dn)


def complement_weighted_k(p):
    """Diagnostic quantity sqrt(1 - p^2) * K(p).

    Bounded by pi/2 on [0, 1) and tends to 0 as p -> 1.
    """
    p = _check_modulus(p)
    m1 = (1.0 - p) * (1.0 + p)
    return _maybe_scalar(np.sqrt(m1) * sp.ellipkm1(m1))
