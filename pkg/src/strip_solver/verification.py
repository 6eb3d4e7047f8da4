"""Cross-validation of the spectral solver against the finite-difference path.

The linear corpus holds four problems whose spectral solutions are exact
(band-limited data, analytically integrable sources).  ``verify_linear``
solves each with the finite-difference oracle at a ladder of refinements
and reports the sup-norm disagreement and the empirical convergence order
between consecutive refinements (expected close to 2 when both steps
halve).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fd_oracle import OracleConfig, oracle_solve
from .linear_solver import GridSpec, LinearProblem, QuadConfig, solve_linear
from .modes import Params
from .sources import LinearSource, ZeroSource
from .spectrum import SineSpectrum

__all__ = ["CorpusProblem", "linear_corpus", "verify_linear", "VerifyRecord"]


@dataclass(frozen=True)
class CorpusProblem:
    name: str
    g0: SineSpectrum
    g1: SineSpectrum
    f_spectral: object            # None or t -> SineSpectrum
    source: object                # SourceTerm for the oracle
    horizon: float


def _mode_spectrum(l, n, amplitude=1.0, size=4):
    coeffs = np.zeros(max(n, size))
    coeffs[n - 1] = amplitude
    return SineSpectrum(l=l, coeffs=coeffs)


def linear_corpus(p: Params, horizon: float = 2.0) -> list:
    """Four linear problems with band-limited data and sources."""
    l = p.l
    zero = SineSpectrum(l=l, coeffs=np.zeros(4))
    const_f = _mode_spectrum(l, 1)
    mix_g0 = SineSpectrum(l=l, coeffs=np.array([0.0, 0.5, 0.0, 0.0]))
    mix_g1 = SineSpectrum(l=l, coeffs=np.array([0.3, 0.0, 0.0, 0.0]))
    decaying = _mode_spectrum(l, 3, amplitude=0.8)

    def f_const(t):
        return const_f

    def f_decay(t):
        return SineSpectrum(l=l, coeffs=decaying.coeffs * math.exp(-0.5 * t))

    return [
        CorpusProblem("velocity_mode1", zero, _mode_spectrum(l, 1), None,
                      ZeroSource(), horizon),
        CorpusProblem("displacement_mode1", _mode_spectrum(l, 1), zero, None,
                      ZeroSource(), horizon),
        CorpusProblem("forced_constant", zero, zero, f_const,
                      LinearSource(f_const), horizon),
        CorpusProblem("mixed_decaying_source", mix_g0, mix_g1, f_decay,
                      LinearSource(f_decay), horizon),
    ]


@dataclass(frozen=True)
class VerifyRecord:
    problem: str
    nx: int
    dt: float
    sup_diff: float
    order: float          # nan for the first refinement of a problem


def verify_linear(p: Params, refinements=((31, 0.04), (63, 0.02), (127, 0.01)),
                  horizon: float = 2.0, quad_tol: float = 1e-11) -> list:
    """Spectral-vs-oracle disagreement across a refinement ladder."""
    records = []
    quad = QuadConfig(tol=quad_tol)
    for prob in linear_corpus(p, horizon):
        spectral_prob = LinearProblem(params=p, g0=prob.g0, g1=prob.g1,
                                      f=prob.f_spectral, horizon=horizon)
        prev = None
        for nx, dt in refinements:
            cfg = OracleConfig(nx=nx, dt=dt)
            fld = oracle_solve(p, _synth_callable(prob.g0), _synth_callable(prob.g1),
                               prob.source, horizon, cfg)
            grid = GridSpec(x_nodes=fld.x_nodes, t_nodes=fld.t_nodes)
            exact = solve_linear(spectral_prob, grid, quad=quad)
            diff = float(np.max(np.abs(exact.values - fld.values)))
            order = math.nan if prev is None else math.log2(prev / diff)
            records.append(VerifyRecord(prob.name, nx, dt, diff, order))
            prev = diff
    return records


def _synth_callable(spec: SineSpectrum):
    from .spectrum import synthesize

    return lambda x: synthesize(spec, x)
