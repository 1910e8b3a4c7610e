"""The C-infinity smooth step built from the compactly supported mollifier
exp(1/(u^2 - 1)).

smooth_step(u) rises from exactly 0 at u <= -1 to exactly 1 at u >= 1 and is
infinitely differentiable.  It is the single primitive shared by the
frequency-domain cutoff (solver module) and the coefficient extension
(problem module).

The step is the normalized antiderivative of the mollifier.  It is computed
once by adaptive quadrature on a Chebyshev grid and evaluated thereafter
through the resulting series; the quadrature itself remains available as
smooth_step_quad for cross-checks.
"""

import numpy as np

from .quadrature import adaptive_gauss

__all__ = [
    "mollifier",
    "mollifier_deriv",
    "smooth_step",
    "smooth_step_deriv",
    "smooth_step_deriv2",
    "smooth_step_quad",
    "NORMALIZATION",
]


def mollifier(u):
    """exp(1/(u^2-1)) on (-1, 1), zero elsewhere.  Not normalized."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(1.0 / (ui * ui - 1.0))
    return out


def mollifier_deriv(u):
    """Derivative of the (unnormalized) mollifier."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    d = ui * ui - 1.0
    out[inside] = np.exp(1.0 / d) * (-2.0 * ui / (d * d))
    return out


NORMALIZATION = adaptive_gauss(mollifier, -1.0, 1.0, tol=1e-15)


def smooth_step_quad(u):
    """Scalar smooth step evaluated directly by adaptive quadrature."""
    if u <= -1.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    return adaptive_gauss(mollifier, -1.0, float(u), tol=1e-15) / NORMALIZATION


def _build_series(tol=5e-15, max_n=8192):
    n = 256
    while True:
        k = np.arange(n + 1)
        pts = np.cos(np.pi * k / n)  # descending 1 .. -1
        # cumulative quadrature between consecutive nodes, integrating
        # upward from -1
        asc = pts[::-1]
        vals = np.empty(n + 1)
        vals[0] = 0.0
        for j in range(n):
            vals[j + 1] = vals[j] + adaptive_gauss(
                mollifier, asc[j], asc[j + 1], tol=1e-15
            )
        vals /= NORMALIZATION
        v_desc = vals[::-1]
        # DCT-I to Chebyshev coefficients
        from scipy.fft import dct

        c = dct(v_desc, type=1) / n
        c[0] *= 0.5
        c[-1] *= 0.5
        tail = np.max(np.abs(c[-n // 8:]))
        if tail <= tol or n >= max_n:
            return c
        n *= 2


_STEP_COEF = _build_series()


def smooth_step(u):
    """Vectorized smooth step: 0 for u <= -1, 1 for u >= 1."""
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    out = np.empty_like(u)
    lo = u <= -1.0
    hi = u >= 1.0
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    if np.any(mid):
        out[mid] = np.clip(np.polynomial.chebyshev.chebval(u[mid], _STEP_COEF), 0.0, 1.0)
    return float(out[0]) if scalar else out


def smooth_step_deriv(u):
    """First derivative of the smooth step (the normalized mollifier)."""
    return mollifier(u) / NORMALIZATION


def smooth_step_deriv2(u):
    """Second derivative of the smooth step."""
    return mollifier_deriv(u) / NORMALIZATION
