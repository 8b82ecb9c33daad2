"""Experiment-level tests, kept small and fast: degenerate/trivial cases
from the operation contracts, the logistic hitting-time oracle, the
manufactured-solution forcing-generator consistency, and reduced-size
versions of each pass criterion. Full-size runs live in test_acceptance.py.
"""

import numpy as np
import pytest

from nlcflow.experiments import (
    PerturbationSpec,
    apply_perturbation,
    continuous_dependence,
    dissipativity_ensemble,
    energy_audit,
    equilibrate,
    mms_convergence,
    mms_forcing,
    mms_state,
    segmented_run,
    separation_low,
    smoothing_ratio,
)
from nlcflow.initial import constant_director, coupled_state, taylor_green, zero_state
from nlcflow.integrator import StepperConfig, simulate
from nlcflow.model import ModelParams, State, director_explicit_rhs
from nlcflow.spectral import GridSpec, VectorField2, l2_norm


def dilated_params(**kw):
    """Slow-paced normalization used by the separation experiments.

    lam scales like nu^2 so the explicitly integrated director-stress
    coupling stays inside the diffusion-damped region at every retained mode.
    """
    base = dict(alpha=0.0, eta=1.0, nu=0.1, lam=0.01, gamma=0.1)
    base.update(kw)
    return ModelParams(**base)


class TestEnergyAudit:
    def test_equilibrium_zero_residual(self):
        g = GridSpec(16)
        p = ModelParams(alpha=0.5, eta=1.0)
        traj = simulate(zero_state(g), p, StepperConfig(dt=1e-2, t_end=0.1, sample_every=1))
        rep = energy_audit(traj, p)
        assert rep.finding("max_residual").value <= 1e-14
        assert rep.passed

    def test_taylor_green_residual_shrinks_with_sampling(self):
        # the kinetic trace is exact; the residual is purely the centered
        # difference defect of the exponential, so halving dt divides it by 4
        g = GridSpec(16)
        p = ModelParams(alpha=0.5, eta=1.0, nu=0.01, lam=0.0)
        st = taylor_green(g)
        t1 = simulate(st, p, StepperConfig(dt=2e-4, t_end=0.04, sample_every=10))
        t2 = simulate(st, p, StepperConfig(dt=1e-4, t_end=0.04, sample_every=10))
        rep = energy_audit(t1, p, halved=t2)
        ratio = rep.finding("residual_reduction_on_halving").value
        assert 3.5 <= ratio <= 4.5

    def test_rejects_short_trajectory(self):
        g = GridSpec(16)
        p = ModelParams(alpha=0.5, eta=1.0)
        traj = simulate(zero_state(g), p, StepperConfig(dt=1e-2, t_end=0.0))
        with pytest.raises(ValueError):
            energy_audit(traj, p)


class TestDissipativityEnsemble:
    def test_equilibrium_run_tail_sup_zero(self):
        # v = 0, d = 0 is an exact (unstable) stationary point with zero norm
        g = GridSpec(16)
        p = ModelParams(alpha=0.5, eta=1.0)
        st = State(VectorField2.zero(g), VectorField2.zero(g))
        rep = dissipativity_ensemble([0.0], p, horizon=1.0, grid_n=16, states=[st])
        assert rep.finding("tail_sup_R0").value <= 1e-14
        assert rep.finding("entry_time_R0").value == 0.0

    def test_tiny_equal_radii_enter_immediately(self):
        p = ModelParams(alpha=0.5, eta=1.0)
        rep = dissipativity_ensemble([1e-6, 1e-6], p, horizon=1.0, grid_n=16, seed=4)
        assert rep.finding("entry_time_R1e-06").value == 0.0

    def test_small_ensemble_passes(self):
        p = ModelParams(alpha=0.5, eta=1.0)
        rep = dissipativity_ensemble([1.0, 10.0], p, horizon=6.0, grid_n=16, seed=2)
        assert rep.finding("tail_sup_spread").value < 2.0
        assert rep.passed


class TestContinuousDependence:
    def test_zero_epsilon_separation_identically_zero(self):
        g = GridSpec(16)
        p = dilated_params()
        rep = continuous_dependence(
            zero_state(g), PerturbationSpec(seed=1, amplitude=0.0, band=2), p, horizon=0.5
        )
        assert rep.finding("max_separation").value == 0.0
        assert rep.passed

    def test_doubling_ratio_and_fit(self):
        g = GridSpec(32)
        p = dilated_params()
        rep = continuous_dependence(
            zero_state(g), PerturbationSpec(seed=7, amplitude=1e-6, band=1), p, horizon=2.0
        )
        assert rep.finding("doubling_ratio_min").value >= 3.6
        assert rep.finding("doubling_ratio_max").value <= 4.4
        assert rep.finding("linear_fit_residual_fraction").value <= 0.10
        assert rep.passed

    def test_slope_independent_of_epsilon(self):
        g = GridSpec(16)
        p = dilated_params()
        slopes = []
        for eps in (1e-6, 1e-5):
            rep = continuous_dependence(
                zero_state(g), PerturbationSpec(seed=7, amplitude=eps, band=1), p, horizon=1.0
            )
            slopes.append(rep.finding("log_separation_slope").value)
        assert abs(slopes[0] - slopes[1]) <= 0.10 * abs(slopes[0])


class TestPerturbations:
    def test_normalization_in_separation_metric(self):
        g = GridSpec(16)
        base = zero_state(g)
        pert = PerturbationSpec(seed=5, amplitude=1e-3, band=3, target="both")
        perturbed = apply_perturbation(base, pert)
        s0 = separation_low(perturbed, base)
        assert s0 == pytest.approx(1e-6, rel=1e-10)

    def test_velocity_target_leaves_director(self):
        g = GridSpec(16)
        base = zero_state(g)
        perturbed = apply_perturbation(base, PerturbationSpec(seed=5, amplitude=1e-3, band=3, target="velocity"))
        assert np.array_equal(perturbed.d.stack(), base.d.stack())
        assert l2_norm(perturbed.v) == pytest.approx(1e-3, rel=1e-10)

    def test_doubling_amplitude_doubles_direction(self):
        g = GridSpec(16)
        base = zero_state(g)
        p1 = apply_perturbation(base, PerturbationSpec(seed=5, amplitude=1e-3, band=3))
        p2 = apply_perturbation(base, PerturbationSpec(seed=5, amplitude=2e-3, band=3))
        dv1 = p1.v.stack() - base.v.stack()
        dv2 = p2.v.stack() - base.v.stack()
        assert np.max(np.abs(dv2 - 2.0 * dv1)) <= 1e-15

    def test_band_validated_against_grid(self):
        g = GridSpec(16)
        with pytest.raises(ValueError):
            apply_perturbation(zero_state(g), PerturbationSpec(seed=5, amplitude=1e-3, band=9))


class TestSmoothingRatio:
    def test_zero_amplitude_pair_refused(self):
        p = dilated_params(alpha=0.5)
        with pytest.raises(ValueError):
            smoothing_ratio([PerturbationSpec(seed=1, amplitude=0.0, band=2)], p, grid_n=16)

    def test_unequilibrated_base_refused(self):
        g = GridSpec(16)
        p = dilated_params(alpha=0.5)
        base = coupled_state(g, amplitude=1.0)  # |grad v| ~ 2 pi
        with pytest.raises(RuntimeError, match="not equilibrated"):
            smoothing_ratio([PerturbationSpec(seed=1, amplitude=1e-5, band=2)], p, base=base)

    def test_ratio_stable_across_epsilons(self):
        p = dilated_params(alpha=0.5)
        pairs = [PerturbationSpec(seed=3, amplitude=a, band=2, target="director") for a in (1e-6, 1e-5)]
        rep = smoothing_ratio(pairs, p, grid_n=16, equil_time=3.0)
        assert rep.finding("rho_spread").value < 2.0
        assert rep.passed


class TestEquilibrate:
    def test_start_at_equilibrium(self):
        g = GridSpec(16)
        rep = equilibrate(zero_state(g), ModelParams(alpha=0.5, eta=1.0), tol=1e-10, t_max=1.0)
        assert rep.finding("converged").value == 1.0
        assert rep.finding("t_converged").value == 0.0
        assert rep.passed

    def test_logistic_hitting_time(self):
        g = GridSpec(16)
        p = ModelParams(alpha=0.5, eta=1.0)
        tol = 1e-6
        t_star = 0.5 * np.log(3.0 / tol)
        rep = equilibrate(constant_director(g, 0.5, 0.0), p, tol=tol, t_max=12.0)
        t_hit = rep.finding("t_converged").value
        assert abs(t_hit - t_star) <= 0.05 * t_star
        assert rep.finding("velocity_norm").value < tol

    def test_inconclusive_when_horizon_too_short(self):
        g = GridSpec(16)
        p = ModelParams(alpha=0.5, eta=1.0)
        rep = equilibrate(constant_director(g, 0.5, 0.0), p, tol=1e-10, t_max=0.5)
        assert rep.finding("converged").value == 0.0
        assert not rep.passed

    def test_rejects_bad_tolerance(self):
        g = GridSpec(16)
        with pytest.raises(ValueError):
            equilibrate(zero_state(g), ModelParams(alpha=0.5, eta=1.0), tol=0.0, t_max=1.0)


class TestMmsConvergence:
    def test_small_grid_convergence(self):
        p = ModelParams(alpha=0.3, eta=1.0)
        rep = mms_convergence(p, [2e-3, 1e-3], [16, 32], t_end=0.15)
        assert rep.finding("error_ratio_dt_0.002_to_0.001").value >= 3.5
        assert rep.finding("spatial_error_spread").value <= 1e-10
        assert rep.passed

    def test_forcing_generator_consistency_zero_amplitude(self):
        # with a constant unit director the generated director forcing must
        # exactly compensate the kinematic transport driven by the flow
        g = GridSpec(16)
        p = ModelParams(alpha=0.3, eta=1.0)
        forcing = mms_forcing(g, p, amplitude=0.0)
        t_probe = 0.3
        _, f_d = forcing(t_probe)
        target = mms_state(g, t_probe, amplitude=0.0)
        kin = director_explicit_rhs(target, p)
        assert np.max(np.abs(f_d.stack() + kin.stack())) <= 1e-12


class TestSegmentedRun:
    def test_rows_monotone_and_reaches_horizon(self):
        g = GridSpec(16)
        p = ModelParams(alpha=0.5, eta=1.0)
        rows, boundaries, blown = segmented_run(coupled_state(g, 0.5), p, 1.0, seg_len=0.25)
        ts = np.array([r.t for r in rows])
        assert np.all(np.diff(ts) > 0)
        assert boundaries[-1][0] == pytest.approx(1.0, rel=1e-9)
        assert not blown
