"""Chebyshev series on an interval: fitting at Lobatto nodes, evaluation,
differentiation, and antidifferentiation (Clenshaw-Curtis style)."""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.fft import dct


def lobatto_nodes(n, a=-1.0, b=1.0):
    """n+1 Chebyshev-Lobatto points, ascending in [a, b]."""
    s = np.cos(np.pi * np.arange(n, -1, -1) / n)
    return 0.5 * (a + b) + 0.5 * (b - a) * s


def values_to_coeffs(values_ascending):
    """Chebyshev coefficients from values at ascending Lobatto nodes."""
    v = np.asarray(values_ascending, dtype=float)[::-1]  # descending in s
    n = len(v) - 1
    c = dct(v, type=1) / n
    c[0] *= 0.5
    c[-1] *= 0.5
    return c


@dataclass(frozen=True)
class ChebSeries:
    a: float
    b: float
    coef: np.ndarray

    @classmethod
    def fit(cls, f, a, b, n):
        """Interpolate f at n+1 Lobatto nodes."""
        t = lobatto_nodes(n, a, b)
        return cls(a=a, b=b, coef=values_to_coeffs(f(t)))

    @classmethod
    def adaptive_fit(cls, f, a, b, tol=1e-13, min_n=16, max_n=4096):
        """Double the node count until the coefficient tail drops below
        tol relative to the largest coefficient."""
        n = min_n
        while True:
            series = cls.fit(f, a, b, n)
            c = np.abs(series.coef)
            cmax = float(np.max(c))
            tail = float(np.max(c[-max(2, n // 8):]))
            if cmax == 0.0 or tail <= tol * cmax or n >= max_n:
                return series
            n *= 2

    def _s(self, t):
        return (2.0 * np.asarray(t, dtype=float) - (self.a + self.b)) / (self.b - self.a)

    def __call__(self, t):
        return C.chebval(self._s(t), self.coef)

    def deriv(self):
        return ChebSeries(self.a, self.b,
                          C.chebder(self.coef) * (2.0 / (self.b - self.a)))

    def antideriv(self, anchor=None, value=0.0):
        """Antiderivative; anchored so that it equals `value` at `anchor`
        (defaults to the left endpoint)."""
        coef = C.chebint(self.coef) * (0.5 * (self.b - self.a))
        out = ChebSeries(self.a, self.b, coef)
        t0 = self.a if anchor is None else anchor
        shift = value - out(t0)
        coef = coef.copy()
        coef[0] += shift
        return ChebSeries(self.a, self.b, coef)

    def degree_for_tail(self, rel=1e-12):
        """Smallest degree beyond which all coefficients are below
        rel * max|coef|."""
        c = np.abs(self.coef)
        cmax = float(np.max(c))
        if cmax == 0.0:
            return 0
        significant = np.nonzero(c > rel * cmax)[0]
        return int(significant[-1]) if significant.size else 0
