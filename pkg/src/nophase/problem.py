"""Problem setup: coefficient q, its smooth extension to the real line,
the coordinate change x(t) = int_a^t sqrt(q), the Schwarzian-derived
forcing p, and the fitted decay certificate (Gamma, mu) for p-hat.
"""

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError, FitError, NumericalError
from .expr import compile_expression
from .grid import RealSample, SpectralGrid, SpectralSample, forward, l1_norm
from .mollifier import smooth_step, smooth_step_deriv, smooth_step_deriv2
from .quadrature import _NODES, _WEIGHTS

P_EDGE_REL = 1e-14      # required smallness of p at the grid boundary
FIT_THRESHOLD = 1e-12   # relative cutoff for decay-fit nodes
CLEAN_REL = 3e-15       # hard floor below which p-hat values are zeroed

# 8th-order centered finite-difference weights
_FD1 = np.array([4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0])
_FD2 = np.array([8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0])
_FD2_CENTER = -205.0 / 72.0


def _fd_derivatives(q, h):
    def dq(t):
        t = np.asarray(t, dtype=float)
        acc = np.zeros_like(t)
        for k in range(1, 5):
            acc += _FD1[k - 1] * (q(t + k * h) - q(t - k * h))
        return acc / h

    def d2q(t):
        t = np.asarray(t, dtype=float)
        acc = _FD2_CENTER * q(t)
        for k in range(1, 5):
            acc += _FD2[k - 1] * (q(t + k * h) + q(t - k * h))
        return acc / (h * h)

    return dq, d2q


@dataclass(frozen=True)
class Coefficient:
    """The coefficient q on [a, b] with its first two derivatives.

    q must be evaluable on [a - 3w, b + 3w] where w is the extension
    width; the smooth blend to constants lives there.
    """

    q: object
    dq: object
    d2q: object
    interval_a: float
    interval_b: float
    extension_width: float

    @classmethod
    def make(cls, q, a, b, dq=None, d2q=None, extension_width=None):
        if not (a < b):
            raise DomainError("interval must satisfy a < b")
        w = extension_width if extension_width is not None else 0.5 * (b - a)
        if dq is None or d2q is None:
            fd_dq, fd_d2q = _fd_derivatives(q, 1e-3 * (b - a))
            dq = dq if dq is not None else fd_dq
            d2q = d2q if d2q is not None else fd_d2q
        return cls(q=q, dq=dq, d2q=d2q, interval_a=a, interval_b=b,
                   extension_width=w)


class ExtendedCoefficient:
    """q blended to the constants q(a), q(b) outside [a, b].

    The blend runs over [a-3w, a-w] on the left and [b+w, b+3w] on the
    right using the C-infinity smooth step, so the extension is constant
    outside [a-3w, b+3w] and agrees with q on [a-w, b+w].
    """

    def __init__(self, coeff: Coefficient):
        self.base = coeff
        a, b, w = coeff.interval_a, coeff.interval_b, coeff.extension_width
        self.lo = a - 3.0 * w
        self.hi = b + 3.0 * w
        self.w = w
        self.qa = float(np.asarray(coeff.q(np.array(a))))
        self.qb = float(np.asarray(coeff.q(np.array(b))))
        self._ul_center = a - 2.0 * w    # left step argument ((center-t)/w)
        self._ur_center = b + 2.0 * w    # right step argument ((t-center)/w)

    def _steps(self, t):
        ul = (self._ul_center - t) / self.w
        ur = (t - self._ur_center) / self.w
        return ul, ur

    def q(self, t):
        t = np.asarray(t, dtype=float)
        tc = np.clip(t, self.lo, self.hi)
        qv = self.base.q(tc)
        ul, ur = self._steps(t)
        sl = smooth_step(ul)
        sr = smooth_step(ur)
        return qv + (self.qa - qv) * sl + (self.qb - qv) * sr

    def dq(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        inside = (t > self.lo) & (t < self.hi)
        if np.any(inside):
            ti = t[inside]
            qv = self.base.q(ti)
            dqv = self.base.dq(ti)
            ul, ur = self._steps(ti)
            sl = smooth_step(ul)
            sr = smooth_step(ur)
            dsl = -smooth_step_deriv(ul) / self.w
            dsr = smooth_step_deriv(ur) / self.w
            out[inside] = (dqv * (1.0 - sl - sr)
                           + (self.qa - qv) * dsl + (self.qb - qv) * dsr)
        return out

    def d2q(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        inside = (t > self.lo) & (t < self.hi)
        if np.any(inside):
            ti = t[inside]
            qv = self.base.q(ti)
            dqv = self.base.dq(ti)
            d2qv = self.base.d2q(ti)
            ul, ur = self._steps(ti)
            sl = smooth_step(ul)
            sr = smooth_step(ur)
            dsl = -smooth_step_deriv(ul) / self.w
            dsr = smooth_step_deriv(ur) / self.w
            d2sl = smooth_step_deriv2(ul) / self.w ** 2
            d2sr = smooth_step_deriv2(ur) / self.w ** 2
            out[inside] = (d2qv * (1.0 - sl - sr)
                           - 2.0 * dqv * (dsl + dsr)
                           + (self.qa - qv) * d2sl + (self.qb - qv) * d2sr)
        return out

    def sqrt_q(self, t):
        qv = self.q(t)
        if np.any(qv <= 0.0):
            raise DomainError("coefficient is not strictly positive")
        return np.sqrt(qv)


@dataclass(frozen=True)
class CoordinateMap:
    """The monotone change of variables x(t) = int_a^t sqrt(q) and its
    inverse, built on the extended coefficient."""

    ext: ExtendedCoefficient
    t_edges: np.ndarray
    x_edges: np.ndarray
    x_b: float
    tol: float

    @property
    def t_lo(self):
        return float(self.t_edges[0])

    @property
    def t_hi(self):
        return float(self.t_edges[-1])

    @property
    def x_lo(self):
        return float(self.x_edges[0])

    @property
    def x_hi(self):
        return float(self.x_edges[-1])

    def x_of_t(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        out = np.empty_like(t)
        lo, hi = self.t_lo, self.t_hi
        sqa, sqb = np.sqrt(self.ext.qa), np.sqrt(self.ext.qb)
        left = t <= lo
        right = t >= hi
        mid = ~(left | right)
        out[left] = self.x_lo + sqa * (t[left] - lo)
        out[right] = self.x_hi + sqb * (t[right] - hi)
        if np.any(mid):
            tm = t[mid]
            idx = np.searchsorted(self.t_edges, tm, side="right") - 1
            idx = np.clip(idx, 0, len(self.t_edges) - 2)
            t0 = self.t_edges[idx]
            # partial-panel 16-point Gauss rule from the panel edge
            half = 0.5 * (tm - t0)
            nodes = t0[:, None] + half[:, None] * (_NODES[None, :] + 1.0)
            vals = self.ext.sqrt_q(nodes.ravel()).reshape(nodes.shape)
            out[mid] = self.x_edges[idx] + half * (vals @ _WEIGHTS)
        return float(out[0]) if scalar else out

    def t_of_x(self, x, max_iter=100):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.empty_like(x)
        sqa, sqb = np.sqrt(self.ext.qa), np.sqrt(self.ext.qb)
        left = x <= self.x_lo
        right = x >= self.x_hi
        mid = ~(left | right)
        out[left] = self.t_lo + (x[left] - self.x_lo) / sqa
        out[right] = self.t_hi + (x[right] - self.x_hi) / sqb
        if np.any(mid):
            xm = x[mid]
            t = np.interp(xm, self.x_edges, self.t_edges)
            tol = 1e-13 * max(1.0, float(np.max(np.abs(xm))))
            for _ in range(max_iter):
                resid = self.x_of_t(t) - xm
                if np.max(np.abs(resid)) <= tol:
                    break
                t = np.clip(t - resid / self.ext.sqrt_q(t), self.t_lo, self.t_hi)
            else:
                raise NumericalError("coordinate inversion did not converge")
            out[mid] = t
        return float(out[0]) if scalar else out


def build_map(coeff, tol=1e-13):
    """Build the coordinate map by adaptive Gauss-Legendre panel
    quadrature of sqrt(q) over the extended interval, anchored x(a) = 0."""
    ext = coeff if isinstance(coeff, ExtendedCoefficient) else ExtendedCoefficient(coeff)
    a = ext.base.interval_a
    lo, hi = ext.lo, ext.hi

    def panel_value(t0, t1):
        mid = 0.5 * (t0 + t1)
        half = 0.5 * (t1 - t0)
        return half * float(np.sum(_WEIGHTS * ext.sqrt_q(mid + half * _NODES)))

    # adaptive panel refinement over [lo, hi]
    n0 = max(16, int(np.ceil((hi - lo) / 0.25)))
    edges = list(np.linspace(lo, hi, n0 + 1))
    if a not in edges:
        edges = sorted(set(edges) | {a})
    for _ in range(40):
        new_edges = [edges[0]]
        refined = False
        for t0, t1 in zip(edges[:-1], edges[1:]):
            whole = panel_value(t0, t1)
            m = 0.5 * (t0 + t1)
            split = panel_value(t0, m) + panel_value(m, t1)
            if abs(whole - split) > tol * max(1.0, abs(split)):
                new_edges.extend([m, t1])
                refined = True
            else:
                new_edges.append(t1)
        edges = new_edges
        if not refined:
            break
    else:
        raise NumericalError("coordinate-map quadrature did not converge")

    t_edges = np.asarray(edges)
    increments = np.array([panel_value(t0, t1)
                           for t0, t1 in zip(t_edges[:-1], t_edges[1:])])
    x_edges = np.concatenate([[0.0], np.cumsum(increments)])
    # anchor x(a) = 0
    ia = int(np.searchsorted(t_edges, a))
    x_edges = x_edges - x_edges[ia]
    cmap = CoordinateMap(ext=ext, t_edges=t_edges, x_edges=x_edges,
                         x_b=0.0, tol=tol)
    object.__setattr__(cmap, "x_b", float(cmap.x_of_t(ext.base.interval_b)))
    return cmap


def schwarzian_p(coeff, cmap, grid, x_shift=0.0):
    """The forcing p as a function of x at the grid's space nodes:
    p(x_j) = (1/q)(5/4 (q'/q)^2 - q''/q) evaluated at t(x_j + x_shift)."""
    ext = coeff if isinstance(coeff, ExtendedCoefficient) else cmap.ext
    t = cmap.t_of_x(grid.x + x_shift)
    qv = ext.q(t)
    if np.any(qv <= 0.0):
        raise DomainError("coefficient is not strictly positive on the grid")
    ratio = ext.dq(t) / qv
    p = (1.25 * ratio * ratio - ext.d2q(t) / qv) / qv
    pmax = float(np.max(np.abs(p)))
    if pmax > 0.0:
        edge = max(abs(p[0]), abs(p[-1]))
        if edge > P_EDGE_REL * pmax:
            suggested = 1.3 * max(abs(cmap.x_lo), abs(cmap.x_hi)) + 1.0
            raise ConfigurationError(
                f"grid half-width too small: p does not vanish at the "
                f"boundary; use L >= {suggested:.2f}"
            )
    return RealSample(grid, p)


def fit_decay(p_hat):
    """Fit |p_hat(xi)| <= Gamma exp(-mu |xi|) by least squares on
    (|xi|, log |p_hat|) over nodes above the relative threshold, then
    inflate Gamma minimally so the bound holds at every nonzero node.

    Returns (gamma, mu); the degenerate p_hat == 0 case returns
    (0.0, inf)."""
    absv = np.abs(p_hat.values)
    vmax = float(np.max(absv))
    if vmax == 0.0:
        return 0.0, np.inf
    usable = absv > FIT_THRESHOLD * vmax
    if int(np.sum(usable)) < 8:
        raise FitError("fewer than 8 usable nodes for the decay fit")
    xi_abs = np.abs(p_hat.grid.xi[usable])
    logv = np.log(absv[usable])
    slope, _ = np.polyfit(xi_abs, logv, 1)
    mu = -float(slope)
    if mu <= 0.0:
        raise FitError("transform does not decay; cannot certify")
    nonzero = absv > 0.0
    gamma = float(np.max(absv[nonzero]
                         * np.exp(mu * np.abs(p_hat.grid.xi[nonzero]))))
    return gamma, mu


def decay_bound(xi, gamma, mu):
    """Gamma * exp(-mu |xi|), with the degenerate mu = inf handled as 0."""
    if not np.isfinite(mu):
        return np.zeros_like(np.asarray(xi, dtype=float))
    return gamma * np.exp(-mu * np.abs(xi))


@dataclass(frozen=True)
class HypothesisReport:
    """Measured quantities and flags for the solvability hypotheses."""

    lam: float
    gamma: float
    mu: float
    w_l1: float
    lambda_ok: bool       # lambda > 2 max(1/mu, gamma)
    w_l1_ok: bool         # ||w||_1 <= (pi/2) lambda^2
    degenerate: bool

    @property
    def certified(self):
        return self.lambda_ok and self.w_l1_ok


@dataclass(frozen=True)
class CoefficientProblem:
    """Everything the solver needs for one (q, lambda) instance."""

    coefficient: Coefficient
    extended: ExtendedCoefficient
    lam: float
    map: CoordinateMap
    grid: SpectralGrid
    p_x: RealSample
    p_hat: SpectralSample
    gamma_fit: float
    mu_fit: float
    # the grid is centered on the support of p, so grid coordinates are
    # x - x_shift; x(a) = 0 stays the map's anchor
    x_shift: float = 0.0

    @property
    def degenerate(self):
        return self.gamma_fit == 0.0


def check_hypotheses(prob):
    """Evaluate both solvability conditions.  The solver refuses to
    certify bounds when either flag is false but may still iterate."""
    w_l1 = l1_norm(prob.p_hat)
    if prob.degenerate:
        lambda_ok = prob.lam > 0.0
    else:
        lambda_ok = prob.lam > 2.0 * max(1.0 / prob.mu_fit, prob.gamma_fit)
    w_l1_ok = w_l1 <= 0.5 * np.pi * prob.lam ** 2
    return HypothesisReport(lam=prob.lam, gamma=prob.gamma_fit,
                            mu=prob.mu_fit, w_l1=w_l1,
                            lambda_ok=bool(lambda_ok),
                            w_l1_ok=bool(w_l1_ok),
                            degenerate=prob.degenerate)


def _next_pow2(n):
    return 1 << max(4, int(np.ceil(np.log2(max(n, 1)))))


def choose_grid(cmap, lam, L=None, N=None):
    """Grid geometry: L covers the support of p with margin; N keeps
    xi_max comfortably above 2 sqrt(2) lambda so quadratic terms of the
    iteration stay resolved."""
    if L is None:
        span = 0.5 * (cmap.x_hi - cmap.x_lo)
        L = 1.3 * span + 1.0
    if N is None:
        need = 2.0 * L * 2.0 * np.sqrt(2.0) * 1.15 * lam / np.pi
        N = _next_pow2(int(np.ceil(max(need, 1024))))
    grid = SpectralGrid(half_width=float(L), n_points=int(N))
    if grid.xi_max < 2.0 * np.sqrt(2.0) * lam:
        raise ConfigurationError(
            "grid frequency range too small: xi_max must be at least "
            "2*sqrt(2)*lambda"
        )
    return grid


def build_problem(coefficient, lam, L=None, N=None, quad_tol=1e-13):
    """Assemble a CoefficientProblem: extension, map, grid, forcing,
    transform, and decay fit.  Values of p_hat below the round-off floor
    are zeroed so the decay certificate is meaningful at every node."""
    if lam <= 0:
        raise DomainError("lambda must be positive")
    ext = ExtendedCoefficient(coefficient)
    cmap = build_map(ext, tol=quad_tol)
    grid = choose_grid(cmap, lam, L=L, N=N)
    x_shift = 0.5 * (cmap.x_lo + cmap.x_hi)
    p_x = schwarzian_p(ext, cmap, grid, x_shift=x_shift)
    p_hat_raw = forward(p_x)
    vals = p_hat_raw.values.copy()
    vmax = float(np.max(np.abs(vals)))
    if vmax > 0.0:
        vals[np.abs(vals) < CLEAN_REL * vmax] = 0.0
    p_hat = SpectralSample(grid, vals)
    gamma, mu = fit_decay(p_hat) if vmax > 0.0 else (0.0, np.inf)
    prob = CoefficientProblem(coefficient=coefficient, extended=ext,
                              lam=float(lam), map=cmap, grid=grid,
                              p_x=p_x, p_hat=p_hat,
                              gamma_fit=gamma, mu_fit=mu, x_shift=x_shift)
    hyp = check_hypotheses(prob)
    if not hyp.certified:
        warnings.warn(
            "solvability hypotheses not satisfied; the solve may still "
            "converge but its bounds are uncertified",
            stacklevel=2,
        )
    return prob


@dataclass(frozen=True)
class ProblemConfig:
    """Parsed contents of a problem definition JSON file."""

    coefficient: Coefficient
    lam: float = None
    grid_L: float = None
    grid_N: int = None


def load_problem_file(path):
    """Read a problem definition:

    { "q": <expression or [[t, q], ...] table>, "a": .., "b": ..,
      "lambda": .., "dq": .., "d2q": .., "grid": {"L": .., "N": ..},
      "extension_width": .. }
    """
    with open(path) as handle:
        data = json.load(handle)
    return problem_config_from_dict(data)


def problem_config_from_dict(data):
    for key in ("q", "a", "b"):
        if key not in data:
            raise DomainError(f"problem definition is missing {key!r}")
    a, b = float(data["a"]), float(data["b"])
    qdef = data["q"]
    dq = d2q = None
    if isinstance(qdef, str):
        q = compile_expression(qdef)
        if "dq" in data:
            dq = compile_expression(data["dq"])
        if "d2q" in data:
            d2q = compile_expression(data["d2q"])
    elif isinstance(qdef, list):
        from scipy.interpolate import CubicSpline

        table = np.asarray(qdef, dtype=float)
        if table.ndim != 2 or table.shape[1] != 2:
            raise DomainError("table coefficient must be a list of [t, q] pairs")
        spline = CubicSpline(table[:, 0], table[:, 1])
        q = spline
        dq = spline.derivative(1)
        d2q = spline.derivative(2)
    else:
        raise DomainError("q must be an expression string or a sample table")
    coeff = Coefficient.make(q, a, b, dq=dq, d2q=d2q,
                             extension_width=data.get("extension_width"))
    gridspec = data.get("grid", {})
    return ProblemConfig(
        coefficient=coeff,
        lam=float(data["lambda"]) if "lambda" in data else None,
        grid_L=float(gridspec["L"]) if "L" in gridspec else None,
        grid_N=int(gridspec["N"]) if "N" in gridspec else None,
    )
