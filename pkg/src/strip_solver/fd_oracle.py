"""Independent finite-difference solver used to validate the spectral path.

Method of lines for L u = F written as the first-order system

    u_t = v,
    v_t = eps*D2 v + c^2*D2 u - a*v - F(x, t, u),

with D2 the standard second difference carrying homogeneous Dirichlet
rows.  A theta-weighted one-step scheme advances (u, v); eliminating
u^{m+1} leaves one symmetric positive-definite tridiagonal solve per step
whose Cholesky factor is computed once for a fixed step size.  The scheme
is second-order accurate in space, and in time at theta = 1/2, where it is
also unconditionally stable for the linear problem.  Nonlinear sources are
handled by fixed-point inner iteration within each step.

This module deliberately shares no numerical kernels with the spectral
modules: it imports only the parameter container and the source-term
definitions, so agreement between the two solvers is meaningful evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .errors import StepFailureError
from .fields import Field
from .modes import Params
from .sources import SourceTerm, ZeroSource, depends_on_u, evaluate_source

__all__ = ["OracleConfig", "OracleProblem", "oracle_solve", "convergence_study"]


@dataclass(frozen=True)
class OracleConfig:
    """Grid and scheme settings: nx interior nodes, step dt, weight theta."""

    nx: int = 127
    dt: float = 0.005
    theta: float = 0.5
    nonlinear_inner_tol: float = 1e-12
    max_inner: int = 60

    def __post_init__(self):
        if self.nx < 8:
            raise ValueError(f"need at least 8 interior nodes, got {self.nx}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [0, 1]")
        if not self.nonlinear_inner_tol > 0:
            raise ValueError("nonlinear_inner_tol must be positive")


@dataclass(frozen=True)
class OracleProblem:
    """Problem data in sampled form: g0, g1 callables (or arrays) on [0, l]."""

    params: Params
    g0: object
    g1: object
    source: SourceTerm
    horizon: float


def _sample(data, x: np.ndarray, name: str) -> np.ndarray:
    if callable(data):
        vals = np.asarray(data(x), dtype=float)
    else:
        vals = np.asarray(data, dtype=float)
    if vals.shape != x.shape:
        raise ValueError(f"{name} must provide one value per grid node")
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"{name} contains non-finite values")
    return vals


def oracle_solve(p: Params, g0, g1, source: SourceTerm, horizon: float,
                 cfg: OracleConfig = OracleConfig(),
                 t_out=None, with_dt: bool = False) -> Field:
    """Integrate the strip problem on a uniform grid with the theta scheme.

    ``t_out`` selects output times (defaults to every step); requested
    times snap to the nearest step.  Identical inputs produce bit-identical
    fields: the stepping is strictly sequential and single-threaded.
    """
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    nx = cfg.nx
    x_full = np.linspace(0.0, p.l, nx + 2)
    x = x_full[1:-1]
    dx = x_full[1] - x_full[0]
    u = _sample(g0, x_full, "g0")
    v = _sample(g1, x_full, "g1")
    if max(abs(u[0]), abs(u[-1])) > 1e-10:
        raise ValueError("g0 must vanish at the strip ends (Dirichlet data)")
    u, v = u[1:-1].copy(), v[1:-1].copy()

    n_steps = max(1, round(horizon / cfg.dt))
    dt = horizon / n_steps
    theta = cfg.theta
    eps, c2, a = p.epsilon, p.c**2, p.a

    def d2(w):
        out = -2.0 * w
        out[:-1] += w[1:]
        out[1:] += w[:-1]
        return out / dx**2

    # LHS of the eliminated v-equation: (1 + a*theta*dt) I - theta*dt*(eps + theta*dt*c^2) D2
    kappa = theta * dt * (eps + theta * dt * c2)
    diag = np.full(nx, 1.0 + a * theta * dt + 2.0 * kappa / dx**2)
    off = np.full(nx - 1, -kappa / dx**2)
    ab = np.zeros((2, nx))
    ab[0, 1:] = off
    ab[1, :] = diag
    chol = cholesky_banded(ab, lower=False)

    if t_out is None:
        out_steps = np.arange(n_steps + 1)
    else:
        t_req = np.atleast_1d(np.asarray(t_out, dtype=float))
        out_steps = np.unique(np.clip(np.round(t_req / dt).astype(int), 0, n_steps))
    t_nodes = out_steps * dt
    values = np.zeros((nx + 2, out_steps.size))
    values_dt = np.zeros((nx + 2, out_steps.size)) if with_dt else None
    out_map = {int(s): i for i, s in enumerate(out_steps)}
    nonlinear = depends_on_u(source)
    zero_src = isinstance(source, ZeroSource)

    def store(step, u_now, v_now):
        idx = out_map.get(step)
        if idx is not None:
            values[1:-1, idx] = u_now
            if with_dt:
                values_dt[1:-1, idx] = v_now

    store(0, u, v)
    t = 0.0
    for step in range(1, n_steps + 1):
        t_new = step * dt
        if zero_src:
            f_old = 0.0
        else:
            f_old = evaluate_source(source, x, t, u)
        d2u, d2v = d2(u), d2(v)
        explicit = v + (1.0 - theta) * dt * (eps * d2v + c2 * d2u - a * v - f_old)
        base_rhs = explicit + theta * dt * c2 * d2(u + dt * (1.0 - theta) * v)
        u_guess = u + dt * v
        for inner in range(cfg.max_inner):
            if zero_src:
                f_new = 0.0
            else:
                f_new = evaluate_source(source, x, t_new, u_guess)
            rhs = base_rhs - theta * dt * f_new
            v_new = cho_solve_banded((chol, False), rhs)
            u_new = u + dt * (theta * v_new + (1.0 - theta) * v)
            if not nonlinear:
                break
            change = float(np.max(np.abs(u_new - u_guess)))
            u_guess = u_new
            if change <= cfg.nonlinear_inner_tol:
                break
        else:
            raise StepFailureError(
                f"inner iteration did not converge at t = {t_new:.6g}", t=t_new)
        if not np.all(np.isfinite(u_new)):
            raise StepFailureError(f"non-finite state at t = {t_new:.6g}", t=t_new)
        u, v, t = u_new, v_new, t_new
        store(step, u, v)
    return Field(x_nodes=x_full, t_nodes=t_nodes, values=values, values_dt=values_dt)


def convergence_study(problem: OracleProblem, refinements, reference) -> list:
    """Errors against a reference solution for each grid refinement.

    ``reference`` is a callable u(x, t) evaluated on each run's own output
    grid.  Returns records (dx, dt, sup_error); empirical orders between
    consecutive refinements follow as log2(e_i/e_{i+1}) when both steps
    halve.
    """
    records = []
    for cfg in refinements:
        fld = oracle_solve(problem.params, problem.g0, problem.g1,
                           problem.source, problem.horizon, cfg)
        xg, tg = fld.x_nodes, fld.t_nodes
        exact = np.asarray([[reference(xi, tj) for tj in tg] for xi in xg])
        err = float(np.max(np.abs(fld.values - exact)))
        records.append((fld.x_nodes[1] - fld.x_nodes[0], problem.horizon / (tg.size - 1), err))
    return records
