"""Adaptive Gauss-Legendre panel quadrature for smooth integrands."""

import numpy as np

from .errors import NumericalError

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(16)


def gauss_panel(f, a, b):
    """16-point Gauss-Legendre rule on a single panel [a, b]."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * float(np.sum(_WEIGHTS * f(mid + half * _NODES)))


def adaptive_gauss(f, a, b, tol=1e-13, max_depth=48):
    """Integrate f over [a, b] by bisecting panels until the 16-point rule
    agrees with its two-panel refinement.

    f must accept numpy arrays.  Raises NumericalError if the recursion
    depth limit is hit before the tolerance is met.
    """
    if a == b:
        return 0.0
    scale = max(abs(a), abs(b), 1.0)

    def recurse(lo, hi, whole, depth):
        mid = 0.5 * (lo + hi)
        left = gauss_panel(f, lo, mid)
        right = gauss_panel(f, mid, hi)
        if abs(left + right - whole) <= tol * max(1.0, abs(left + right)):
            return left + right
        if depth >= max_depth or (hi - lo) < 1e-15 * scale:
            raise NumericalError(
                f"quadrature failed to converge on [{lo}, {hi}]"
            )
        return recurse(lo, mid, left, depth + 1) + recurse(mid, hi, right, depth + 1)

    return recurse(a, b, gauss_panel(f, a, b), 0)
