"""Momentum grid, frequency schedules, and the damping-vs-frequency ratio.

Natural units throughout (hbar = c = 1). A finite box of size L carries
M discrete momenta k_i = 2*pi*i/L for i = 1..M; the zero mode is excluded
(infinite domain, degenerate frequency).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NegativeTimeError,
    NonPositiveFrequencyError,
    NonPositiveMomentumError,
    NonPositiveVolumeError,
    ZeroModeCountError,
)

TWO_PI = 2.0 * math.pi


class ScheduleKind(enum.Enum):
    CONSTANT = "constant"
    EXP_DECAY = "exp_decay"


@dataclass(frozen=True, eq=False)
class ModeGrid:
    """Finite set of strictly positive, strictly increasing momenta."""

    volume_L: float
    mode_count_M: int
    momenta: np.ndarray

    def __len__(self) -> int:
        return self.mode_count_M


@dataclass(frozen=True)
class FrequencySchedule:
    """Time dependence of the per-mode frequency.

    Constant keeps Omega_k(t) = k; ExpDecay relaxes it as k*exp(-t/T).
    """

    kind: ScheduleKind
    T: float | None = None

    def __post_init__(self):
        if self.kind is ScheduleKind.EXP_DECAY:
            if self.T is None or self.T <= 0:
                raise ValueError("exp_decay schedule requires a time constant T > 0")
        elif self.T is not None:
            raise ValueError("constant schedule takes no time constant")


def constant_schedule() -> FrequencySchedule:
    return FrequencySchedule(ScheduleKind.CONSTANT)


def exp_decay_schedule(T: float) -> FrequencySchedule:
    return FrequencySchedule(ScheduleKind.EXP_DECAY, float(T))


@dataclass(frozen=True)
class Damping:
    """Uniform damping rate Gamma >= 0; zero means the non-dissipative regime."""

    gamma: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError(f"damping rate must be >= 0, got {self.gamma}")

    @property
    def is_dissipative(self) -> bool:
        return self.gamma > 0


def build_mode_grid(volume_L: float, mode_count_M: int) -> ModeGrid:
    """Discretize the box: momenta[i] = 2*pi*(i+1)/L, exactly."""
    if volume_L <= 0:
        raise NonPositiveVolumeError(f"volume must be > 0, got {volume_L}")
    if mode_count_M < 1:
        raise ZeroModeCountError(f"mode count must be >= 1, got {mode_count_M}")
    momenta = TWO_PI * np.arange(1, mode_count_M + 1, dtype=float) / volume_L
    momenta.setflags(write=False)
    return ModeGrid(float(volume_L), int(mode_count_M), momenta)


def domain_size(k: float) -> float:
    """Spatial extent of the ordered domain a mode can organize: 1/k."""
    if k <= 0:
        raise NonPositiveMomentumError(f"momentum must be > 0, got {k}")
    return 1.0 / k


def frequency_at(schedule: FrequencySchedule, k: float, t: float) -> float:
    """Instantaneous frequency Omega_k(t) of the mode with momentum k."""
    if k <= 0:
        raise NonPositiveMomentumError(f"momentum must be > 0, got {k}")
    if t < 0:
        raise NegativeTimeError(f"time must be >= 0, got {t}")
    if schedule.kind is ScheduleKind.CONSTANT:
        return float(k)
    return float(k) * math.exp(-t / schedule.T)


def frequencies(schedule: FrequencySchedule, grid: ModeGrid, t: float) -> np.ndarray:
    """Vectorized Omega_k(t) over every grid mode."""
    if t < 0:
        raise NegativeTimeError(f"time must be >= 0, got {t}")
    if schedule.kind is ScheduleKind.CONSTANT:
        return grid.momenta.copy()
    return grid.momenta * math.exp(-t / schedule.T)


def competition_ratio(damping: Damping, omega: float) -> float:
    """Dissipation-to-frequency ratio Gamma/(2*Omega).

    Above 1 the dissipative term dominates (overdamped mode); below 1 the
    frequency term does.
    """
    if omega <= 0:
        raise NonPositiveFrequencyError(f"frequency must be > 0, got {omega}")
    return damping.gamma / (2.0 * omega)
