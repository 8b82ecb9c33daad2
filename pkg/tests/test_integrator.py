"""Integrator tests against closed-form oracles.

Logistic oracle: with v = 0 and a spatially constant director d = (r0, 0),
the squared magnitude obeys |d(t)|^2 = 1 / (1 - u0 exp(-2 gamma t / eta^2))
with u0 = (r0^2 - 1)/r0^2 (separation of variables on u' = -2 g/eta^2 u(u-1)).

Taylor-Green oracle: with lam = 0 the vortex nonlinearity is a pure gradient,
so kinetic energy decays exactly as (1/4) a^2 exp(-16 pi^2 nu t).
"""

import numpy as np
import pytest

from nlcflow.initial import constant_director, coupled_state, taylor_green, zero_state
from nlcflow.integrator import (
    BlowUpError,
    StepperConfig,
    TimeStepError,
    Trajectory,
    cfl_dt,
    fill_residuals,
    simulate,
    step,
    _diagnostics_hat,
)
from nlcflow.model import ModelParams, energy, state_to_hat
from nlcflow.spectral import GridSpec, VectorField2, gradient, ScalarField, max_divergence

TWO_PI = 2.0 * np.pi


def logistic_mag_sq(t, r0, gamma=1.0, eta=1.0):
    u0 = (r0 ** 2 - 1.0) / r0 ** 2
    return 1.0 / (1.0 - u0 * np.exp(-2.0 * gamma * t / eta ** 2))


class TestStep:
    def test_zero_state_fixed_point(self):
        g = GridSpec(16)
        st = zero_state(g)
        out = step(st, ModelParams(alpha=0.5, eta=1.0), dt=0.1)
        assert np.max(np.abs(out.v.stack())) <= 1e-14
        assert np.max(np.abs(out.d.stack() - st.d.stack())) <= 1e-13

    def test_logistic_single_step(self):
        g = GridSpec(16)
        st = constant_director(g, 0.5, 0.0)
        out = step(st, ModelParams(alpha=0.5, eta=1.0), dt=1e-3)
        got = out.d.x.values[0, 0] ** 2 + out.d.y.values[0, 0] ** 2
        assert abs(got - logistic_mag_sq(1e-3, 0.5)) <= 1e-9

    def test_rejects_non_finite(self):
        g = GridSpec(16)
        bad = np.zeros((16, 16))
        st = constant_director(g, 1.0, 0.0)
        st.d.x.values[0, 0] = 1.0  # keep construction valid, then poison
        st.d.x.values[3, 3] = np.inf
        with pytest.raises(BlowUpError):
            step(st, ModelParams(alpha=0.5, eta=1.0), dt=1e-3)

    def test_rejects_absurd_dt(self):
        g = GridSpec(64)
        st = taylor_green(g, amplitude=1.0)
        # advective bound is h/max|v| = 1/64; 10x bound = 0.15625
        with pytest.raises(TimeStepError):
            step(st, ModelParams(alpha=0.5, eta=1.0), dt=0.2)


class TestCflDt:
    def test_quiescent_guard(self):
        g = GridSpec(32)
        st = zero_state(g)
        got = cfl_dt(st, ModelParams(alpha=0.5, eta=1.0), cfl_safety=0.5)
        assert got == pytest.approx(0.5 * g.h / 1e-8)

    def test_unit_velocity(self):
        g = GridSpec(64)
        st = taylor_green(g, amplitude=1.0)
        got = cfl_dt(st, ModelParams(alpha=0.5, eta=1.0), cfl_safety=0.5)
        assert got == pytest.approx(0.5 / 64.0, rel=1e-12)

    def test_halves_when_n_doubles(self):
        p = ModelParams(alpha=0.5, eta=1.0)
        a = cfl_dt(taylor_green(GridSpec(32)), p, 0.5)
        b = cfl_dt(taylor_green(GridSpec(64)), p, 0.5)
        assert b == pytest.approx(a / 2.0, rel=1e-12)


class TestSimulateBasics:
    def test_zero_horizon_single_row(self):
        g = GridSpec(16)
        traj = simulate(zero_state(g), ModelParams(alpha=0.5, eta=1.0), StepperConfig(dt=1e-2, t_end=0.0))
        assert len(traj.rows) == 1
        assert traj.rows[0].t == 0.0

    def test_equilibrium_rows_identical(self):
        g = GridSpec(16)
        traj = simulate(
            zero_state(g),
            ModelParams(alpha=0.5, eta=1.0),
            StepperConfig(dt=1e-2, t_end=0.1, sample_every=2),
        )
        assert all(abs(r.energy.total) <= 1e-14 for r in traj.rows)
        assert all(abs(r.residual) <= 1e-14 for r in traj.rows)

    def test_rows_strictly_increasing(self):
        g = GridSpec(16)
        traj = simulate(
            coupled_state(g, amplitude=0.5),
            ModelParams(alpha=0.5, eta=1.0),
            StepperConfig(dt=1e-3, t_end=0.02, sample_every=3),
        )
        ts = traj.times()
        assert np.all(np.diff(ts) > 0)
        assert ts[-1] == pytest.approx(0.02, rel=1e-10)

    def test_determinism_bitwise(self):
        g = GridSpec(32)
        p = ModelParams(alpha=0.3, eta=0.5)
        cfg = StepperConfig(dt=5e-4, t_end=0.05, sample_every=5)
        t1 = simulate(coupled_state(g), p, cfg)
        t2 = simulate(coupled_state(g), p, cfg)
        for a, b in zip(t1.rows, t2.rows):
            assert a.t == b.t
            assert a.energy == b.energy
            assert a.norm_v_h1 == b.norm_v_h1 and a.norm_d_h2 == b.norm_d_h2
        assert np.array_equal(t1.final.v.stack(), t2.final.v.stack())
        assert np.array_equal(t1.final.d.stack(), t2.final.d.stack())

    def test_sampled_states_divergence_free_zero_mean(self):
        g = GridSpec(32)
        traj = simulate(
            coupled_state(g),
            ModelParams(alpha=0.3, eta=0.5),
            StepperConfig(dt=5e-4, t_end=0.05, sample_every=10, snapshot_every=10),
        )
        for t, st in traj.snapshots:
            assert max_divergence(st.v) <= 1e-10
            assert abs(st.v.x.mean()) <= 1e-12
            assert abs(st.v.y.mean()) <= 1e-12


class TestOracles:
    def test_logistic_trajectory(self):
        g = GridSpec(16)
        p = ModelParams(alpha=0.5, eta=1.0)
        traj = simulate(
            constant_director(g, 0.5, 0.0),
            p,
            StepperConfig(dt=1e-3, t_end=0.25, sample_every=50),
        )
        st = traj.final
        got = st.d.x.values[0, 0] ** 2 + st.d.y.values[0, 0] ** 2
        assert abs(got - logistic_mag_sq(0.25, 0.5)) <= 1e-6

    def test_logistic_second_order(self):
        g = GridSpec(16)
        p = ModelParams(alpha=0.5, eta=1.0)
        errs = []
        for dt in (2e-3, 1e-3):
            traj = simulate(
                constant_director(g, 0.5, 0.0),
                p,
                StepperConfig(dt=dt, t_end=0.5, sample_every=10 ** 9),
            )
            st = traj.final
            got = st.d.x.values[0, 0] ** 2 + st.d.y.values[0, 0] ** 2
            errs.append(abs(got - logistic_mag_sq(0.5, 0.5)))
        assert errs[0] / errs[1] >= 3.5

    def test_taylor_green_decay(self):
        g = GridSpec(16)
        nu = 0.01
        p = ModelParams(alpha=0.5, eta=1.0, nu=nu, lam=0.0)
        traj = simulate(
            taylor_green(g, amplitude=1.0),
            p,
            StepperConfig(dt=5e-4, t_end=0.02, sample_every=10),
        )
        for row in traj.rows:
            expected = 0.25 * np.exp(-16.0 * np.pi ** 2 * nu * row.t)
            assert abs(row.energy.kinetic - expected) <= 1e-6 * expected

    def test_energy_non_increasing(self):
        g = GridSpec(32)
        p = ModelParams(alpha=0.3, eta=0.5)
        traj = simulate(coupled_state(g), p, StepperConfig(dt=2e-4, t_end=0.05, sample_every=5))
        e0 = traj.rows[0].energy.total
        tol = 1e-8 * (1.0 + e0)
        totals = traj.totals()
        assert np.all(np.diff(totals) <= tol)


class TestForcingHook:
    def test_forcing_balances_relaxation(self):
        # constant director forcing that exactly cancels the penalty pull,
        # plus a pure-gradient momentum forcing that projection removes
        g = GridSpec(16)
        p = ModelParams(alpha=0.5, eta=1.0)
        r = 0.5
        st = constant_director(g, r, 0.0)
        X, _ = g.coords()
        grad_part = gradient(ScalarField(g, np.sin(TWO_PI * X)))
        f_d = VectorField2.from_arrays(
            g,
            np.full((16, 16), p.gamma * (r ** 2 - 1.0) * r),
            np.zeros((16, 16)),
        )

        def forcing(t):
            return grad_part, f_d

        traj = simulate(st, p, StepperConfig(dt=1e-3, t_end=0.05, sample_every=10), forcing)
        out = traj.final
        assert np.max(np.abs(out.v.stack())) <= 1e-12
        assert np.max(np.abs(out.d.x.values - r)) <= 1e-12
        assert np.max(np.abs(out.d.y.values)) <= 1e-12


class TestBlowUpHandling:
    def test_blow_up_marks_partial_trajectory(self):
        g = GridSpec(16)
        p = ModelParams(alpha=0.5, eta=0.02)
        st = constant_director(g, 5.0, 0.0)
        traj = simulate(st, p, StepperConfig(dt=0.5, t_end=5.0, sample_every=1))
        assert traj.blown_up
        assert any("halved" in e for e in traj.events)
        assert any("blow-up" in e for e in traj.events)
        assert traj.rows[-1].t < 5.0


class TestDiagnostics:
    def test_spectral_diagnostics_match_energy_op(self):
        g = GridSpec(32)
        p = ModelParams(alpha=0.3, eta=0.5, nu=0.8, lam=1.2, gamma=0.9)
        st = coupled_state(g, amplitude=0.7)
        vh, dh = state_to_hat(st)
        ebd, nv, nd = _diagnostics_hat(g, p, vh, dh)
        ref = energy(st, p)
        for name in ("kinetic", "elastic", "penalty", "total", "visc_dissipation", "rot_dissipation", "quantity_a"):
            a, b = getattr(ebd, name), getattr(ref, name)
            assert abs(a - b) <= 1e-11 * max(1.0, abs(b))

    def test_residual_fill_uniform_matches_centered_formula(self):
        from nlcflow.integrator import TrajectoryRow
        from nlcflow.model import EnergyBreakdown

        def mk(t, e, diss):
            bd = EnergyBreakdown(e, 0, 0, e, diss, 0, diss)
            return TrajectoryRow(t, bd, 0.0, 0.0)

        # E(t) = exp(-t), dissipation exactly -E' = exp(-t)
        ts = [0.0, 0.1, 0.2, 0.3]
        rows = [mk(t, np.exp(-t), np.exp(-t)) for t in ts]
        fill_residuals(rows)
        for m in (1, 2):
            dt_s = 0.1
            dedt = (rows[m + 1].energy.total - rows[m - 1].energy.total) / (2 * dt_s)
            expected = abs(dedt + rows[m].energy.visc_dissipation) / (
                1.0 + rows[m].energy.total
            )
            assert rows[m].residual == pytest.approx(expected, rel=1e-12)
        assert rows[0].residual == 0.0 and rows[-1].residual == 0.0
