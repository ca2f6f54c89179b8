import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dqmem.errors import (
    NegativeTimeError,
    NonPositiveFrequencyError,
    NonPositiveMomentumError,
    NonPositiveVolumeError,
    ZeroModeCountError,
)
from dqmem.spectrum import (
    Damping,
    build_mode_grid,
    competition_ratio,
    constant_schedule,
    domain_size,
    exp_decay_schedule,
    frequencies,
    frequency_at,
)

TWO_PI = 2.0 * math.pi


class TestModeGrid:
    def test_single_mode_unit_box(self):
        grid = build_mode_grid(TWO_PI, 1)
        assert grid.momenta.tolist() == [1.0]

    def test_three_modes(self):
        grid = build_mode_grid(TWO_PI, 3)
        assert grid.momenta.tolist() == [1.0, 2.0, 3.0]

    def test_zero_volume_rejected(self):
        with pytest.raises(NonPositiveVolumeError):
            build_mode_grid(0.0, 3)

    def test_zero_mode_count_rejected(self):
        with pytest.raises(ZeroModeCountError):
            build_mode_grid(1.0, 0)

    @given(
        volume=st.floats(min_value=1e-3, max_value=1e6, allow_nan=False),
        modes=st.integers(min_value=1, max_value=300),
    )
    def test_momenta_exact_and_increasing(self, volume, modes):
        grid = build_mode_grid(volume, modes)
        expected = TWO_PI * np.arange(1, modes + 1) / volume
        assert np.array_equal(grid.momenta, expected)
        assert np.all(grid.momenta > 0)
        assert np.all(np.diff(grid.momenta) > 0)

    def test_momenta_read_only(self):
        grid = build_mode_grid(1.0, 4)
        with pytest.raises(ValueError):
            grid.momenta[0] = 99.0


class TestDomainSize:
    def test_unit_momentum(self):
        assert domain_size(1.0) == 1.0

    def test_quarter(self):
        assert domain_size(4.0) == 0.25

    def test_zero_momentum_rejected(self):
        with pytest.raises(NonPositiveMomentumError):
            domain_size(0.0)

    def test_higher_momentum_means_smaller_domain(self):
        grid = build_mode_grid(10.0, 20)
        sizes = [domain_size(k) for k in grid.momenta]
        assert sizes == sorted(sizes, reverse=True)


class TestFrequency:
    def test_constant_schedule_ignores_time(self):
        assert frequency_at(constant_schedule(), 2.0, 5.0) == 2.0

    def test_exp_decay_at_zero(self):
        assert frequency_at(exp_decay_schedule(1.0), 2.0, 0.0) == 2.0

    def test_exp_decay_one_time_constant(self):
        # independent oracle: 2/e evaluated with mpmath at 30 digits
        got = frequency_at(exp_decay_schedule(1.0), 2.0, 1.0)
        assert got == pytest.approx(0.735758882342884643, abs=1e-12)

    def test_negative_time_rejected(self):
        with pytest.raises(NegativeTimeError):
            frequency_at(constant_schedule(), 1.0, -0.1)
        with pytest.raises(NegativeTimeError):
            frequencies(constant_schedule(), build_mode_grid(1.0, 2), -1.0)

    def test_nonpositive_momentum_rejected(self):
        with pytest.raises(NonPositiveMomentumError):
            frequency_at(constant_schedule(), 0.0, 1.0)

    def test_schedule_validation(self):
        with pytest.raises(ValueError):
            exp_decay_schedule(0.0)

    @given(
        k=st.floats(min_value=1e-3, max_value=1e3),
        t1=st.floats(min_value=0.0, max_value=50.0),
        dt=st.floats(min_value=1e-6, max_value=50.0),
    )
    def test_exp_decay_strictly_decreasing_in_time(self, k, t1, dt):
        sched = exp_decay_schedule(2.0)
        assert frequency_at(sched, k, t1 + dt) < frequency_at(sched, k, t1)

    @given(
        k=st.floats(min_value=1e-3, max_value=1e3),
        factor=st.floats(min_value=1.001, max_value=10.0),
        t=st.floats(min_value=0.0, max_value=50.0),
    )
    def test_exp_decay_strictly_increasing_in_momentum(self, k, factor, t):
        sched = exp_decay_schedule(2.0)
        assert frequency_at(sched, k * factor, t) > frequency_at(sched, k, t)

    @given(k=st.floats(min_value=1e-3, max_value=1e3))
    def test_initial_frequency_equals_momentum(self, k):
        assert frequency_at(constant_schedule(), k, 0.0) == k
        assert frequency_at(exp_decay_schedule(3.0), k, 0.0) == k

    def test_vectorized_matches_scalar(self):
        grid = build_mode_grid(5.0, 6)
        sched = exp_decay_schedule(0.7)
        vec = frequencies(sched, grid, 1.3)
        scal = [frequency_at(sched, k, 1.3) for k in grid.momenta]
        assert vec == pytest.approx(scal, rel=1e-15)


class TestCompetitionRatio:
    def test_zero_damping(self):
        assert competition_ratio(Damping(0.0), 3.0) == 0.0

    def test_critical_boundary(self):
        assert competition_ratio(Damping(2.0), 1.0) == 1.0

    def test_quarter(self):
        assert competition_ratio(Damping(2.0), 4.0) == 0.25

    def test_nonpositive_frequency_rejected(self):
        with pytest.raises(NonPositiveFrequencyError):
            competition_ratio(Damping(1.0), 0.0)

    def test_negative_damping_rejected(self):
        with pytest.raises(ValueError):
            Damping(-0.5)

    @given(
        omega1=st.floats(min_value=1e-3, max_value=1e3),
        factor=st.floats(min_value=1.001, max_value=100.0),
    )
    def test_strictly_decreasing_in_frequency(self, omega1, factor):
        damping = Damping(1.7)
        assert competition_ratio(damping, omega1 * factor) < competition_ratio(
            damping, omega1
        )
