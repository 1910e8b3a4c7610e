"""Independent validation oracles: a high-order adaptive ODE integrator
for y'' + lambda^2 q y = 0, the Liouville-Green transform of its
solutions, and basis-error measurement against the phase function."""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import NumericalError
from .phase import basis_derivatives

_MIN_RTOL = 2.5e-14  # DOP853's floor is 100 * machine epsilon


@dataclass(frozen=True)
class OracleSolution:
    """Dense-output reference solution of y'' + lambda^2 q y = 0."""

    dense: object        # t -> array([y, y'])
    order: int
    tol: float

    def __call__(self, t):
        out = self.dense(np.atleast_1d(np.asarray(t, dtype=float)))
        return out[0], out[1]


def ode_oracle(prob, y0, dy0, tol=1e-13):
    """Adaptive 8th-order Runge-Kutta (DOP853) solution over [a, b] with
    dense output.  Uses the original coefficient, not its extension."""
    if tol < 1e-14:
        raise ValueError("tol must be >= 1e-14")
    a = prob.coefficient.interval_a
    b = prob.coefficient.interval_b
    lam = prob.lam
    q = prob.coefficient.q

    def rhs(t, y):
        return [y[1], -lam ** 2 * float(np.asarray(q(t))) * y[0]]

    sol = solve_ivp(rhs, (a, b), [y0, dy0], method="DOP853",
                    rtol=max(tol, _MIN_RTOL), atol=tol,
                    dense_output=True)
    if not sol.success:
        raise NumericalError(f"reference integrator failed: {sol.message}")
    return OracleSolution(dense=sol.sol, order=8, tol=tol)


@dataclass(frozen=True)
class TransformedSolution:
    """phi(x) = q(t(x))^(1/4) y(t(x)) on [0, x(b)] with its residual in
    the constant-coefficient form phi'' + lambda^2 phi + (1/4) p phi = 0."""

    x: np.ndarray
    phi: np.ndarray
    residual_rel: float


def liouville_green(prob, oracle, n_nodes=3001):
    """Apply the transform to an oracle solution and measure the residual
    of the constant-coefficient equation by 6th-order finite differences."""
    x_b = prob.map.x_b
    x = np.linspace(0.0, x_b, n_nodes)
    t = prob.map.t_of_x(x)
    y, _ = oracle(t)
    qv = np.asarray(prob.coefficient.q(t))
    phi = qv ** 0.25 * y

    # p as a function of x on these nodes
    ratio = np.asarray(prob.coefficient.dq(t)) / qv
    p = (1.25 * ratio * ratio - np.asarray(prob.coefficient.d2q(t)) / qv) / qv

    h = x[1] - x[0]
    i = np.arange(3, n_nodes - 3)
    d2phi = (2.0 * (phi[i - 3] + phi[i + 3])
             - 27.0 * (phi[i - 2] + phi[i + 2])
             + 270.0 * (phi[i - 1] + phi[i + 1])
             - 490.0 * phi[i]) / (180.0 * h * h)
    resid = d2phi + prob.lam ** 2 * phi[i] + 0.25 * p[i] * phi[i]
    scale = float(np.max(np.abs(phi)))
    residual_rel = float(np.max(np.abs(resid))) / scale if scale > 0 else 0.0
    return TransformedSolution(x=x, phi=phi, residual_rel=residual_rel)


def undo_liouville_green(prob, transformed):
    """Recover y(t) = q(t)^(-1/4) phi(x(t)) on the transform's nodes."""
    t = prob.map.t_of_x(transformed.x)
    qv = np.asarray(prob.coefficient.q(t))
    return t, transformed.phi / qv ** 0.25


def basis_error(phase, prob, tol=1e-13, n_samples=400):
    """Max-norm differences between the phase-function basis (u, v) and
    reference solutions with the same initial data at t = a."""
    a, b = phase.a, phase.b
    u0, du0, v0, dv0 = (float(z[0]) if np.ndim(z) else float(z)
                        for z in basis_derivatives(phase, np.array([a])))
    ou = ode_oracle(prob, u0, du0, tol=tol)
    ov = ode_oracle(prob, v0, dv0, tol=tol)
    t = np.linspace(a, b, n_samples)
    u, _, v, _ = basis_derivatives(phase, t)
    yu, _ = ou(t)
    yv, _ = ov(t)
    return float(np.max(np.abs(u - yu))), float(np.max(np.abs(v - yv)))
