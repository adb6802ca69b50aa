"""Quadrature helpers: periodic trapezoid on circles, Cauchy-integral
differentiation and tanh-sinh integration over angle intervals.

All refinement loops double the node count and stop once two successive
levels agree; failure to agree raises :class:`QuadratureFailure`.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import tanhsinh

from .errors import QuadratureFailure

TWO_PI = 2.0 * np.pi


def circle_angles(m: int) -> np.ndarray:
    return TWO_PI * np.arange(m) / m


def cauchy_taylor(f, center: complex, radius: float, max_order: int, *,
                  tol: float = 1e-10, n_start: int = 64, n_max: int = 4096, noise: float = 0.0):
    """Taylor coefficients a_0..a_max_order of ``f`` at ``center``.

    ``f`` must accept an array of complex points.  Coefficients come from the
    FFT of samples on the circle |z - center| = radius.  The node count
    doubles from ``n_start`` until two levels agree to ``tol`` relative to the
    largest sampled modulus (plus an absolute ``noise`` floor for integrands
    known to carry cancellation error), capped at ``n_max``.

    Returns ``(coefficients, sup_modulus, nodes_used)``.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    m = max(n_start, 2 * (max_order + 1))
    values = np.asarray(f(center + radius * np.exp(1j * circle_angles(m))), dtype=complex)
    prev = np.fft.fft(values)[: max_order + 1] / m
    while True:
        m2 = 2 * m
        if m2 > n_max:
            raise QuadratureFailure(
                f"Cauchy differentiation did not converge with {m} nodes "
                f"(center={center}, radius={radius})")
        odd = np.asarray(f(center + radius * np.exp(1j * (circle_angles(m) + np.pi / m))),
                         dtype=complex)
        merged = np.empty(m2, dtype=complex)
        merged[0::2] = values
        merged[1::2] = odd
        cur = np.fft.fft(merged)[: max_order + 1] / m2
        sup = float(np.max(np.abs(merged)))
        if not np.all(np.isfinite(cur)):
            raise QuadratureFailure("non-finite samples in Cauchy integral")
        if np.max(np.abs(cur - prev)) <= tol * max(sup, np.finfo(float).tiny) + noise:
            return cur, sup, m2
        values, prev, m = merged, cur, m2


def cauchy_derivatives(f, center: complex, radius: float, max_order: int, **kw) -> np.ndarray:
    """Derivatives f(center), f'(center), ..., f^(max_order)(center)."""
    coeffs, _, _ = cauchy_taylor(f, center, radius, max_order, **kw)
    scale = np.array([math.factorial(j) / radius**j for j in range(max_order + 1)])
    return coeffs * scale


def circle_mean(f, *, tol: float = 1e-10, m_start: int = 256, m_max: int = 4096):
    """Mean of a smooth periodic function of the angle over [0, 2pi).

    ``f`` receives the angle array; the last axis of its result runs over
    the nodes.  Returns ``(mean, nodes_used)``.
    """
    m = m_start
    prev = np.mean(np.asarray(f(circle_angles(m))), axis=-1)
    while True:
        m2 = 2 * m
        if m2 > m_max:
            raise QuadratureFailure(f"trapezoid rule did not converge with {m} nodes")
        cur = np.mean(np.asarray(f(circle_angles(m2))), axis=-1)
        scale = max(float(np.max(np.abs(cur))), 1.0)
        if np.max(np.abs(cur - prev)) <= tol * scale:
            return cur, m2
        prev, m = cur, m2


def _interval_edges(breaks):
    """Sorted breakpoints as (left, right) arrays of shape (..., k-1)."""
    breaks = np.sort(np.asarray(breaks, dtype=float), axis=-1)
    return breaks[..., :-1], breaks[..., 1:]


def integrate_pieces(f, breaks, args=(), *, atol: float = 1e-14, rtol: float = 1e-12,
                     maxlevel: int | None = None, rel_allowance=1e-10):
    """Integrate ``f(t, *args)`` over [min(breaks), max(breaks)] by tanh-sinh
    on each sub-interval between consecutive breakpoints.

    ``breaks`` may carry leading batch dimensions; ``args`` must broadcast
    against ``breaks[..., :1]``.  Integrable endpoint singularities are
    handled by the double-exponential clustering, so every singular angle
    belongs in ``breaks``.  ``f`` receives real abscissae.

    With ``maxlevel`` set the rule is evaluated at exactly that level and no
    convergence check is made.  Otherwise the summed error estimate of each
    batch row must stay below ``rel_allowance * max(1, |integral|)``.
    """
    left, right = _interval_edges(breaks)

    def real_f(t, *a):
        return f(np.real(t), *a)  # tanhsinh promotes abscissae to the integrand dtype

    if maxlevel is not None:
        res = tanhsinh(real_f, left, right, args=args, maxlevel=maxlevel, atol=0.0, rtol=0.0)
        return np.sum(res.integral, axis=-1)
    res = tanhsinh(real_f, left, right, args=args, atol=atol, rtol=rtol)
    total = np.sum(res.integral, axis=-1)
    err = np.sum(np.abs(res.error), axis=-1)
    allowed = rel_allowance * np.maximum(1.0, np.abs(total))
    bad = ~np.isfinite(total) | (err > allowed)
    if np.any(bad):
        total, err = _retry_fixed_levels(real_f, left, right, args, total, err, bad)
        if np.any(~np.isfinite(total)) or np.any(err > allowed):
            raise QuadratureFailure(
                f"tanh-sinh failed to reach tolerance (error estimate {np.max(err):.3g})")
    return total


def _retry_fixed_levels(real_f, left, right, args, total, err, bad, levels=(9, 10)):
    """Re-integrate flagged rows at two fixed levels and use their difference
    as the error.  scipy's built-in estimate can report an error of exactly 1
    once successive levels agree to rounding, which would otherwise look
    like a failure."""
    if np.ndim(total) == 0:
        coarse, fine = (np.sum(tanhsinh(real_f, left, right, args=args, maxlevel=lv,
                                        atol=0.0, rtol=0.0).integral, axis=-1) for lv in levels)
        return fine, np.abs(fine - coarse)
    total, err = np.array(total, copy=True), np.array(err, copy=True)
    idx = np.nonzero(np.broadcast_to(bad, total.shape))
    shape = left.shape[:-1]
    rows_l = np.broadcast_to(left, shape + left.shape[-1:])[idx]
    rows_r = np.broadcast_to(right, shape + right.shape[-1:])[idx]
    rows_args = tuple(np.broadcast_to(a, shape + np.shape(a)[-1:])[idx] for a in args)
    coarse, fine = (np.sum(tanhsinh(real_f, rows_l, rows_r, args=rows_args, maxlevel=lv,
                                    atol=0.0, rtol=0.0).integral, axis=-1) for lv in levels)
    total[idx] = fine
    err[idx] = np.abs(fine - coarse)
    return total, err
