"""Truncated convolution exponentials.

exp1(Psi) is the transform of exp(f) - 1 and exp2(Psi) the transform of
exp(f) - f - 1, where f is the space-domain function with transform Psi.
Both are the sums of convolution-power series

    exp1[Psi] = Psi + Psi*Psi/(2! 2pi) + Psi*Psi*Psi/(3! (2pi)^2) + ...
    exp2[Psi] = exp1[Psi] - Psi,

but the fast path computes them space-side in O(N log N); the series is
retained only as a desk-scale test oracle.
"""

from math import factorial

import numpy as np

from .errors import MagnitudeError
from .grid import SpectralSample, convolve, forward, inverse, RealSample, linf_norm

OVERFLOW_LIMIT = 700.0  # exp overflows double precision near 709


def _space_side(Psi):
    f = inverse(Psi)
    if linf_norm(f) >= OVERFLOW_LIMIT:
        raise MagnitudeError("space-domain magnitude too large for exp")
    return f


def exp1_star(Psi):
    """Transform of exp(f) - 1 for f = inverse(Psi)."""
    f = _space_side(Psi)
    return forward(RealSample(Psi.grid, np.expm1(f.values)))


def exp2_star(Psi):
    """Transform of exp(f) - f - 1 for f = inverse(Psi).

    Equals exp1_star(Psi) - Psi up to round-off."""
    f = _space_side(Psi)
    return forward(RealSample(Psi.grid, np.expm1(f.values) - f.values))


def exp2_star_series(Psi, n_terms):
    """Partial sum of the defining convolution-power series, starting at
    the quadratic term.  Desk-scale oracle: n_terms <= 30, N <= 256."""
    if n_terms > 30:
        raise ValueError("n_terms must be <= 30")
    if Psi.grid.n_points > 256:
        raise ValueError("series oracle is restricted to N <= 256")
    acc = np.zeros(Psi.grid.n_points, dtype=complex)
    power = Psi
    for n in range(2, n_terms + 1):
        power = convolve(power, Psi)
        acc += power.values / factorial(n)
    return SpectralSample(Psi.grid, acc)
