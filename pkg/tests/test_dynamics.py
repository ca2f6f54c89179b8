import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dqmem.condensate import MemoryCode, balance_residual, entropy
from dqmem.dynamics import (
    Backend,
    Status,
    default_step,
    evolve,
    forget,
    fresh_state,
    infinite_profile,
    is_forgotten,
    lifetime_profile,
    overdamping_crossing_time,
    refresh,
    regime_report,
    solve_mode_equation,
    state_entropy,
)
from dqmem.errors import (
    GridMismatchError,
    NonPositiveHorizonError,
    NonPositiveStepError,
    NonPositiveTimeStepError,
    RefreshForgottenError,
    ZeroDampingFiniteLifetimeError,
)
from dqmem.spectrum import (
    Damping,
    build_mode_grid,
    constant_schedule,
    exp_decay_schedule,
)

TWO_PI = 2.0 * math.pi
FOUR_OVER_E = 1.471517764685769286


def single_mode_state(n0, tau, code_id="m"):
    code = MemoryCode(np.array([float(n0)]), code_id, 0.0)
    grid = build_mode_grid(TWO_PI, 1)
    profile = lifetime_profile(grid, Damping(2.0), exp_decay_schedule(1.0))
    taus = np.array([float(tau)])
    taus.setflags(write=False)
    return fresh_state(code), type(profile)(taus, Backend.ANALYTIC)


class TestLifetimes:
    def test_boundary_momentum_overdamped_at_onset(self):
        assert overdamping_crossing_time(1.0, Damping(2.0), exp_decay_schedule(1.0)) == 0.0

    def test_momentum_e_crosses_at_one(self):
        tau = overdamping_crossing_time(math.e, Damping(2.0), exp_decay_schedule(1.0))
        assert tau == pytest.approx(1.0, abs=1e-12)

    def test_momentum_e_squared_crosses_at_two(self):
        tau = overdamping_crossing_time(math.e**2, Damping(2.0), exp_decay_schedule(1.0))
        assert tau == pytest.approx(2.0, abs=1e-12)

    def test_low_momentum_overdamped_at_onset(self):
        assert overdamping_crossing_time(0.5, Damping(2.0), exp_decay_schedule(1.0)) == 0.0

    def test_zero_damping_never_crosses(self):
        assert overdamping_crossing_time(1.0, Damping(0.0), exp_decay_schedule(1.0)) == math.inf

    def test_constant_schedule_never_crosses_above_threshold(self):
        assert overdamping_crossing_time(3.0, Damping(2.0), constant_schedule()) == math.inf

    def test_numeric_backend_refuses_zero_damping(self):
        grid = build_mode_grid(TWO_PI, 2)
        with pytest.raises(ZeroDampingFiniteLifetimeError):
            lifetime_profile(grid, Damping(0.0), exp_decay_schedule(1.0), Backend.NUMERIC)

    def test_analytic_zero_damping_gives_infinite_profile(self):
        grid = build_mode_grid(TWO_PI, 3)
        profile = lifetime_profile(grid, Damping(0.0), exp_decay_schedule(1.0))
        assert np.all(np.isinf(profile.lifetimes))

    def test_backends_agree(self):
        # momenta span both sides of the sweep window (just above Gamma/2 up to 100*Gamma)
        damping, sched = Damping(2.0), exp_decay_schedule(1.0)
        low = build_mode_grid(TWO_PI / 1.01, 3)  # k = 1.01, 2.02, 3.03
        high = build_mode_grid(TWO_PI / 5.0, 40)  # k = 5, 10, ..., 200
        for grid in (low, high):
            analytic = lifetime_profile(grid, damping, sched, Backend.ANALYTIC)
            numeric = lifetime_profile(grid, damping, sched, Backend.NUMERIC)
            assert np.max(np.abs(analytic.lifetimes - numeric.lifetimes)) < 1e-8

    def test_hierarchy_nondecreasing_and_strict_above_threshold(self):
        grid = build_mode_grid(4 * math.pi, 30)  # k = 0.5, 1.0, ..., 15.0
        profile = lifetime_profile(grid, Damping(2.0), exp_decay_schedule(1.0))
        taus = profile.lifetimes
        assert np.all(np.diff(taus) >= 0)
        above = grid.momenta > 1.0  # 2k > Gamma
        assert np.all(np.diff(taus[above]) > 0)
        assert np.all(taus[grid.momenta * 2 <= 2.0] == 0.0)

    def test_smaller_domains_live_longer(self):
        grid = build_mode_grid(4 * math.pi, 30)
        profile = lifetime_profile(grid, Damping(2.0), exp_decay_schedule(1.0))
        sizes = 1.0 / grid.momenta
        order = np.argsort(sizes)  # ascending size
        assert np.all(np.diff(profile.lifetimes[order]) <= 0)


class TestModeEquation:
    def test_undamped_oscillator_returns_to_start(self):
        traj = solve_mode_equation(1.0, Damping(0.0), constant_schedule(), TWO_PI, TWO_PI / 200)
        assert traj.u[-1] == pytest.approx(1.0, abs=1e-6)

    def test_damped_envelope(self):
        traj = solve_mode_equation(1.0, Damping(0.2), constant_schedule(), 7.0, 0.002)
        window = (traj.times > 5.8) & (traj.times < 6.8)
        peak = float(np.max(np.abs(traj.u[window])))
        assert peak <= math.exp(-0.2 * math.pi) + 1e-3

    def test_damped_matches_closed_form(self):
        gamma, omega = 0.2, 1.0
        omega_d = math.sqrt(omega**2 - gamma**2 / 4)
        traj = solve_mode_equation(omega, Damping(gamma), constant_schedule(), TWO_PI, TWO_PI / 2000)
        exact = np.exp(-gamma * traj.times / 2) * (
            np.cos(omega_d * traj.times)
            + (gamma / (2 * omega_d)) * np.sin(omega_d * traj.times)
        )
        assert np.max(np.abs(traj.u - exact)) < 1e-6

    def test_zero_initial_data_stays_zero(self):
        traj = solve_mode_equation(2.0, Damping(0.5), exp_decay_schedule(1.0), 3.0, 0.01, u0=0.0, v0=0.0)
        assert np.all(traj.u == 0.0)
        assert np.all(traj.u_dot == 0.0)

    def test_energy_conservation_100_periods(self):
        dt = TWO_PI / 200
        traj = solve_mode_equation(1.0, Damping(0.0), constant_schedule(), 100 * TWO_PI, dt)
        energy = 0.5 * (traj.u_dot**2 + traj.u**2)
        assert np.max(np.abs(energy - energy[0])) / energy[0] < 1e-6

    def test_fourth_order_convergence(self):
        gamma, omega, t_end = 0.2, 1.0, 10.0
        omega_d = math.sqrt(omega**2 - gamma**2 / 4)

        def exact(t):
            return math.exp(-gamma * t / 2) * (
                math.cos(omega_d * t) + (gamma / (2 * omega_d)) * math.sin(omega_d * t)
            )

        def err(dt):
            traj = solve_mode_equation(omega, Damping(gamma), constant_schedule(), t_end, dt)
            return abs(traj.u[-1] - exact(t_end))

        ratio = err(0.05) / err(0.025)
        assert 12.0 <= ratio <= 20.0

    def test_step_validation(self):
        with pytest.raises(NonPositiveStepError):
            solve_mode_equation(1.0, Damping(0.0), constant_schedule(), 1.0, 0.0)
        with pytest.raises(NonPositiveHorizonError):
            solve_mode_equation(1.0, Damping(0.0), constant_schedule(), 0.0, 0.1)

    def test_trajectory_shape(self):
        traj = solve_mode_equation(1.0, Damping(0.1), constant_schedule(), 1.0, 0.3)
        assert len(traj.times) == len(traj.u) == len(traj.u_dot)
        assert np.all(np.diff(traj.times) > 0)
        assert traj.times[-1] == pytest.approx(1.0)

    def test_default_step_resolves_fastest_mode(self):
        grid = build_mode_grid(TWO_PI, 4)  # k up to 4
        assert default_step(grid) == pytest.approx((TWO_PI / 4.0) / 200.0)


class TestEvolve:
    def test_non_dissipative_identity(self):
        code = MemoryCode(np.array([1.0, 2.5, 0.3]), "m", 0.0)
        profile = infinite_profile(build_mode_grid(TWO_PI, 3))
        state = fresh_state(code)
        out = evolve(state, 17.0, profile)
        assert np.array_equal(out.current.occupations, code.occupations)
        assert out.t == 17.0

    def test_single_lifetime_decay(self):
        state, profile = single_mode_state(4.0, 2.0)
        out = evolve(state, 2.0, profile)
        assert out.current.occupations[0] == pytest.approx(FOUR_OVER_E, abs=1e-12)

    def test_negative_step_rejected(self):
        state, profile = single_mode_state(4.0, 2.0)
        with pytest.raises(NonPositiveTimeStepError):
            evolve(state, -1.0, profile)
        with pytest.raises(NonPositiveTimeStepError):
            evolve(state, 0.0, profile)

    def test_zero_lifetime_drops_immediately(self):
        state, profile = single_mode_state(4.0, 0.0)
        out = evolve(state, 1e-9, profile)
        assert out.status is Status.FORGOTTEN
        assert out.current.occupations[0] == 0.0

    def test_composition_matches_single_step(self):
        state, profile = single_mode_state(4.0, 2.0)
        two_steps = evolve(evolve(state, 0.7, profile), 1.3, profile)
        one_step = evolve(state, 2.0, profile)
        assert np.array_equal(two_steps.current.occupations, one_step.current.occupations)

    def test_forgotten_stays_forgotten(self):
        state, profile = single_mode_state(4.0, 2.0)
        gone = forget(state)
        later = evolve(gone, 5.0, profile)
        assert later.status is Status.FORGOTTEN
        assert np.all(later.current.occupations == 0.0)
        assert later.t == 5.0

    def test_forget_transition_zeroes_slot(self):
        state, profile = single_mode_state(4.0, 2.0)
        # past tau * ln(N0/eps): 2 * ln(4e6) ~ 30.4
        out = evolve(state, 31.0, profile)
        assert out.status is Status.FORGOTTEN
        assert np.all(out.current.occupations == 0.0)

    def test_grid_mismatch_rejected(self):
        state, _ = single_mode_state(4.0, 2.0)
        profile = infinite_profile(build_mode_grid(TWO_PI, 3))
        with pytest.raises(GridMismatchError):
            evolve(state, 1.0, profile)

    def test_entropy_monotone_along_evolution(self):
        code = MemoryCode(np.array([3.0, 1.0, 0.2]), "m", 0.0)
        grid = build_mode_grid(4 * math.pi, 3)  # k = 0.5, 1.0, 1.5
        profile = lifetime_profile(grid, Damping(1.0), exp_decay_schedule(1.0))
        state = fresh_state(code)
        entropies = [state_entropy(state)]
        for _ in range(40):
            state = evolve(state, 0.25, profile)
            entropies.append(state_entropy(state))
        assert all(a >= b for a, b in zip(entropies, entropies[1:]))
        positive = [s for s in entropies if s > 0]
        assert all(a > b for a, b in zip(positive, positive[1:]))

    def test_arrow_of_time_no_repeats(self):
        state, profile = single_mode_state(2.0, 3.0)
        seen = set()
        for _ in range(30):
            seen.add((state.t, tuple(state.current.occupations)))
            state = evolve(state, 0.5, profile)
        assert (state.t, tuple(state.current.occupations)) not in seen
        assert len(seen) == 30

    def test_balance_preserved_through_operations(self):
        state, profile = single_mode_state(4.0, 2.0)
        for op in (
            lambda s: evolve(s, 0.5, profile),
            refresh,
            lambda s: evolve(s, 1.0, profile),
            forget,
        ):
            state = op(state)
            assert balance_residual(state.current).max_abs_residual == 0.0


class TestForgetRefresh:
    def test_is_forgotten_thresholds(self):
        zero = fresh_state(MemoryCode(np.array([0.0, 0.0]), "z", 0.0))
        assert is_forgotten(zero, 1e-6)
        tiny = fresh_state(MemoryCode(np.array([1e-9]), "t", 0.0))
        assert is_forgotten(tiny, 1e-6)
        live = fresh_state(MemoryCode(np.array([0.5]), "l", 0.0))
        assert not is_forgotten(live, 1e-6)

    def test_forget_returns_empty_vacuum(self):
        state = fresh_state(MemoryCode(np.array([2.0, 3.0]), "m", 1.5))
        gone = forget(state)
        assert gone.status is Status.FORGOTTEN
        assert np.all(gone.current.occupations == 0.0)
        assert gone.t == state.t

    def test_refresh_idempotent_on_fresh_state(self):
        state = fresh_state(MemoryCode(np.array([4.0]), "m", 0.0))
        assert np.array_equal(refresh(state).current.occupations, state.current.occupations)

    def test_refresh_restores_code_without_rewinding(self):
        state, profile = single_mode_state(4.0, 2.0)
        decayed = evolve(state, 2.0, profile)
        restored = refresh(decayed)
        assert np.array_equal(restored.current.occupations, np.array([4.0]))
        assert restored.t == decayed.t

    def test_refresh_forgotten_raises(self):
        state = fresh_state(MemoryCode(np.array([4.0]), "m", 0.0))
        with pytest.raises(RefreshForgottenError):
            refresh(forget(state))


class TestRegimeReport:
    def test_zero_damping_no_overdamped(self):
        grid = build_mode_grid(TWO_PI, 5)
        report = regime_report(grid, Damping(0.0), exp_decay_schedule(1.0), 12.0)
        assert report.overdamped_count == 0
        assert report.underdamped_count == 5

    def test_boundary_mode_counts_as_overdamped(self):
        grid = build_mode_grid(TWO_PI, 3)  # k = 1, 2, 3
        report = regime_report(grid, Damping(2.0), exp_decay_schedule(1.0), 0.0)
        assert report.overdamped_count == 1
        assert report.underdamped_count == 2
        assert not report.surviving[0]
        assert report.surviving[1] and report.surviving[2]

    def test_late_time_all_overdamped(self):
        grid = build_mode_grid(TWO_PI, 5)
        report = regime_report(grid, Damping(2.0), exp_decay_schedule(1.0), 50.0)
        assert report.overdamped_count == 5

    def test_dissipation_dominated_favors_small_domains(self):
        grid = build_mode_grid(TWO_PI, 10)  # k = 1..10
        report = regime_report(grid, Damping(2.0), exp_decay_schedule(1.0), 1.5)
        assert (
            report.surviving_fraction_small_domains
            >= report.surviving_fraction_large_domains
        )
        assert report.surviving_fraction_small_domains > 0.0


@given(
    n0=st.floats(min_value=1e-3, max_value=1e5),
    tau=st.floats(min_value=0.1, max_value=50.0),
    dt=st.floats(min_value=1e-3, max_value=100.0),
)
def test_decay_law_property(n0, tau, dt):
    state, profile = single_mode_state(n0, tau)
    out = evolve(state, dt, profile, eps_forget=0.0)
    assert out.current.occupations[0] == pytest.approx(
        n0 * math.exp(-dt / tau), rel=1e-12
    )
