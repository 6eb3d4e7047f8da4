import math
import pathlib

import numpy as np
import pytest

from conftest import P_EQ
from strip_solver.fd_oracle import OracleConfig, OracleProblem, convergence_study, oracle_solve
from strip_solver.sources import LinearSource, ZeroSource
from strip_solver.spectrum import SineSpectrum

L = math.pi


def zeros(x):
    return np.zeros_like(np.asarray(x, dtype=float))


class TestOracleSolve:
    def test_zero_problem_stays_zero(self):
        fld = oracle_solve(P_EQ, zeros, zeros, ZeroSource(), 1.0,
                           OracleConfig(nx=31, dt=0.05))
        assert np.all(fld.values == 0.0)

    def test_refinement_orders_on_single_mode(self):
        problem = OracleProblem(P_EQ, zeros, lambda x: np.sin(x), ZeroSource(), 2.0)
        refinements = [OracleConfig(nx=31, dt=0.04), OracleConfig(nx=63, dt=0.02),
                       OracleConfig(nx=127, dt=0.01)]
        records = convergence_study(problem, refinements,
                                    lambda x, t: t * math.exp(-t) * math.sin(x))
        errs = [rec[2] for rec in records]
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
        assert min(orders) > 1.9

    def test_steady_state_under_constant_source(self):
        f = LinearSource(lambda t: SineSpectrum(l=L, coeffs=np.array([1.0])))
        fld = oracle_solve(P_EQ, zeros, zeros, f, 30.0,
                           OracleConfig(nx=127, dt=0.01), t_out=[30.0])
        assert np.max(np.abs(fld.values[:, -1] + np.sin(fld.x_nodes))) < 1e-4

    def test_deterministic(self):
        cfg = OracleConfig(nx=63, dt=0.02)
        a = oracle_solve(P_EQ, zeros, lambda x: np.sin(x), ZeroSource(), 1.0, cfg)
        b = oracle_solve(P_EQ, zeros, lambda x: np.sin(x), ZeroSource(), 1.0, cfg)
        assert np.array_equal(a.values, b.values)

    def test_no_growth_over_long_run(self):
        # trapezoidal weighting, zero source: the perturbation energy must not grow
        rng = np.random.default_rng(7)
        nx = 63
        x = np.linspace(0.0, L, nx + 2)
        bump = np.sin(x) * rng.standard_normal(nx + 2) * 1e-3
        bump[0] = bump[-1] = 0.0
        g1 = rng.standard_normal(nx + 2) * 1e-3
        g1[0] = g1[-1] = 0.0
        fld = oracle_solve(P_EQ, bump, g1, ZeroSource(), 100.0,
                           OracleConfig(nx=nx, dt=0.01), t_out=np.arange(0.0, 101.0, 10.0))
        sups = fld.sup_norm_per_time()
        assert np.max(sups) <= 1.05 * sups[0] + 1e-6
        assert sups[-1] < sups[0]

    def test_graceful_order_degradation_for_incompatible_data(self):
        # g1 = x violates the corner compatibility; errors stay finite and are
        # reported as-is
        problem = OracleProblem(P_EQ, zeros, lambda x: np.asarray(x, dtype=float),
                                ZeroSource(), 1.0)
        refinements = [OracleConfig(nx=31, dt=0.04), OracleConfig(nx=63, dt=0.02)]
        fine = oracle_solve(P_EQ, zeros, lambda x: np.asarray(x, dtype=float),
                            ZeroSource(), 1.0, OracleConfig(nx=255, dt=0.005))

        def reference(xq, tq):
            ix = int(round(xq / (fine.x_nodes[1] - fine.x_nodes[0])))
            jt = int(round(tq / (fine.t_nodes[1] - fine.t_nodes[0])))
            return fine.values[ix, jt]

        records = convergence_study(problem, refinements, reference)
        assert all(np.isfinite(rec[2]) for rec in records)

    def test_rejects_incompatible_dirichlet_data(self):
        with pytest.raises(ValueError):
            oracle_solve(P_EQ, lambda x: np.cos(x), zeros, ZeroSource(), 1.0,
                         OracleConfig(nx=31, dt=0.05))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            OracleConfig(nx=4)
        with pytest.raises(ValueError):
            OracleConfig(dt=-0.1)
        with pytest.raises(ValueError):
            OracleConfig(theta=1.5)


class TestStructuralIndependence:
    def test_no_spectral_imports(self):
        src = pathlib.Path(__file__).resolve().parents[1] / "src" / "strip_solver" / "fd_oracle.py"
        text = src.read_text()
        assert "spectrum" not in text
        assert "green_kernel" not in text
        assert "linear_solver" not in text


class TestStepFailure:
    def test_stiff_feedback_raises_step_failure(self):
        from strip_solver.errors import StepFailureError
        from strip_solver.sources import CustomSource

        runaway = CustomSource(fn=lambda x, t, u: 1e8 * u)
        with pytest.raises(StepFailureError) as info:
            oracle_solve(P_EQ, lambda x: 1e-3 * np.sin(x), zeros, runaway, 1.0,
                         OracleConfig(nx=31, dt=0.05))
        assert info.value.t is not None
