"""Irreversible evolution of memory states.

The mode equation u'' + Gamma*u' + Omega_k(t)^2 u = 0 sets the stage: a
mode stays oscillatory while its frequency term beats the dissipative
term, and its lifetime is the instant the balance tips (Omega_k(tau) =
Gamma/2). Condensate occupations then decay exponentially with each
mode's own lifetime, entropy falls monotonically, and a state whose
occupations all drop below the forget threshold collapses to the empty
vacuum.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .condensate import MemoryCode, entropy as _entropy
from .errors import (
    GridMismatchError,
    NonPositiveHorizonError,
    NonPositiveMomentumError,
    NonPositiveStepError,
    NonPositiveTimeStepError,
    RefreshForgottenError,
    ZeroDampingFiniteLifetimeError,
)
from .spectrum import (
    Damping,
    FrequencySchedule,
    ModeGrid,
    ScheduleKind,
    competition_ratio,
    frequencies,
    frequency_at,
)

DEFAULT_FORGET_EPS = 1e-6


class Backend(enum.Enum):
    ANALYTIC = "analytic"
    NUMERIC = "numeric"


class Status(enum.Enum):
    ALIVE = "alive"
    FORGOTTEN = "forgotten"


@dataclass(frozen=True, eq=False)
class LifetimeProfile:
    """Per-mode lifetimes tau_k; +inf marks modes that never overdamp."""

    lifetimes: np.ndarray
    backend: Backend

    @property
    def mode_count(self) -> int:
        return self.lifetimes.shape[0]


@dataclass(frozen=True, eq=False)
class MemoryState:
    """A recorded memory: its original code, its decayed present, and its clock."""

    code0: MemoryCode
    current: MemoryCode
    t: float
    status: Status

    def __post_init__(self):
        if self.t < self.code0.recorded_at:
            raise ValueError("state clock cannot precede the recording time")

    @property
    def code_id(self) -> str:
        return self.code0.code_id


def fresh_state(code: MemoryCode) -> MemoryState:
    """Wrap a just-recorded code: present equals past, clock at recording."""
    return MemoryState(code, code, code.recorded_at, Status.ALIVE)


@dataclass(frozen=True, eq=False)
class ModeTrajectory:
    times: np.ndarray
    u: np.ndarray
    u_dot: np.ndarray


# -- lifetimes ----------------------------------------------------------------


def overdamping_crossing_time(k: float, damping: Damping, schedule: FrequencySchedule) -> float:
    """First time Omega_k(t) falls to Gamma/2; 0 if overdamped at onset, inf if never.

    For the exponential schedule this is T*ln(2k/Gamma) whenever 2k > Gamma.
    """
    if k <= 0:
        raise NonPositiveMomentumError(f"momentum must be > 0, got {k}")
    gamma = damping.gamma
    if 2.0 * k <= gamma:
        return 0.0
    if gamma == 0.0 or schedule.kind is ScheduleKind.CONSTANT:
        return math.inf
    return schedule.T * math.log(2.0 * k / gamma)


def _bisect_crossing(
    k: float, damping: Damping, schedule: FrequencySchedule, tol: float = 1e-10
) -> float:
    """Bisection on Omega_k(t) - Gamma/2, independent of the closed form."""
    half_gamma = damping.gamma / 2.0
    if frequency_at(schedule, k, 0.0) - half_gamma <= 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    for _ in range(200):
        if frequency_at(schedule, k, hi) - half_gamma < 0.0:
            break
        lo, hi = hi, hi * 2.0
    else:
        return math.inf
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if frequency_at(schedule, k, mid) - half_gamma > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lifetime_profile(
    grid: ModeGrid,
    damping: Damping,
    schedule: FrequencySchedule,
    backend: Backend = Backend.ANALYTIC,
) -> LifetimeProfile:
    """Per-mode lifetimes from the overdamping crossing of the mode equation.

    With Gamma = 0 no mode ever overdamps; the analytic backend returns the
    all-infinite profile while the numeric backend refuses (there is no
    crossing to bracket).
    """
    if damping.gamma == 0.0 and backend is Backend.NUMERIC:
        raise ZeroDampingFiniteLifetimeError(
            "numeric lifetime search needs Gamma > 0; zero damping has no crossing"
        )
    if backend is Backend.ANALYTIC:
        taus = np.array(
            [overdamping_crossing_time(k, damping, schedule) for k in grid.momenta]
        )
    else:
        taus = np.array([_bisect_crossing(k, damping, schedule) for k in grid.momenta])
    taus.setflags(write=False)
    return LifetimeProfile(taus, backend)


def infinite_profile(grid: ModeGrid) -> LifetimeProfile:
    """The non-dissipative profile: every mode lives forever."""
    taus = np.full(grid.mode_count_M, math.inf)
    taus.setflags(write=False)
    return LifetimeProfile(taus, Backend.ANALYTIC)


# -- mode-equation integrator ---------------------------------------------------


def default_step(grid: ModeGrid) -> float:
    """Integration step resolving the fastest initial oscillation: min period/200."""
    return (2.0 * math.pi / float(grid.momenta[-1])) / 200.0


def solve_mode_equation(
    k: float,
    damping: Damping,
    schedule: FrequencySchedule,
    t_end: float,
    dt: float,
    u0: float = 1.0,
    v0: float = 0.0,
) -> ModeTrajectory:
    """Integrate u'' + Gamma*u' + Omega_k(t)^2 u = 0 with classic RK4.

    Fixed step dt; the final step is shortened to land on t_end exactly.
    """
    if dt <= 0:
        raise NonPositiveStepError(f"step must be > 0, got {dt}")
    if t_end <= 0:
        raise NonPositiveHorizonError(f"horizon must be > 0, got {t_end}")
    gamma = damping.gamma

    def accel(t: float, u: float, v: float) -> float:
        w = frequency_at(schedule, k, t)
        return -gamma * v - w * w * u

    n_steps = max(1, math.ceil(t_end / dt - 1e-9))
    times = [0.0]
    us = [float(u0)]
    vs = [float(v0)]
    u, v = float(u0), float(v0)
    for i in range(n_steps):
        t = i * dt
        h = dt if i < n_steps - 1 else t_end - t
        k1u = v
        k1v = accel(t, u, v)
        k2u = v + 0.5 * h * k1v
        k2v = accel(t + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v)
        k3u = v + 0.5 * h * k2v
        k3v = accel(t + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v)
        k4u = v + h * k3v
        k4v = accel(t + h, u + h * k3u, v + h * k3v)
        u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        times.append(t + h)
        us.append(u)
        vs.append(v)
    return ModeTrajectory(np.array(times), np.array(us), np.array(vs))


# -- condensate evolution -------------------------------------------------------


def evolve(
    state: MemoryState,
    dt: float,
    profile: LifetimeProfile,
    eps_forget: float = DEFAULT_FORGET_EPS,
) -> MemoryState:
    """Advance a memory by dt: N_k(t) = N_k(0) * exp(-(t - t_rec)/tau_k).

    Occupations are recomputed from the recorded code and the total
    elapsed time, so repeated small steps cannot drift. A state whose
    largest occupation falls below eps_forget collapses to the empty
    vacuum and is marked forgotten; forgotten states only age.

    Rejecting dt <= 0 is the arrow of time: no operation rewinds a state.
    """
    if dt <= 0:
        raise NonPositiveTimeStepError(f"time step must be > 0, got {dt}")
    if profile.mode_count != state.code0.mode_count:
        raise GridMismatchError(
            f"profile has {profile.mode_count} modes, state has {state.code0.mode_count}"
        )
    new_t = state.t + dt
    if state.status is Status.FORGOTTEN:
        return replace(state, t=new_t)
    elapsed = new_t - state.code0.recorded_at
    with np.errstate(divide="ignore"):
        decayed = state.code0.occupations * np.exp(-elapsed / profile.lifetimes)
    if float(np.max(decayed, initial=0.0)) < eps_forget:
        empty = MemoryCode(
            np.zeros_like(decayed), state.code0.code_id, state.code0.recorded_at
        )
        return MemoryState(state.code0, empty, new_t, Status.FORGOTTEN)
    current = MemoryCode(decayed, state.code0.code_id, state.code0.recorded_at)
    return MemoryState(state.code0, current, new_t, Status.ALIVE)


def is_forgotten(state: MemoryState, eps_forget: float = DEFAULT_FORGET_EPS) -> bool:
    occ = state.current.occupations
    return float(np.max(occ, initial=0.0)) < eps_forget


def forget(state: MemoryState) -> MemoryState:
    """Reduce the memory to the empty vacuum: all occupations exactly zero."""
    empty = MemoryCode(
        np.zeros(state.code0.mode_count), state.code0.code_id, state.code0.recorded_at
    )
    return MemoryState(state.code0, empty, state.t, Status.FORGOTTEN)


def refresh(state: MemoryState) -> MemoryState:
    """Restore the condensate to the recorded code without rewinding the clock.

    Only alive states can be refreshed; once reduced to the empty vacuum
    the code is gone and there is nothing to restore.
    """
    if state.status is Status.FORGOTTEN:
        raise RefreshForgottenError(
            f"memory '{state.code0.code_id}' was forgotten; its code cannot be restored"
        )
    return MemoryState(state.code0, state.code0, state.t, Status.ALIVE)


def state_entropy(state: MemoryState) -> float:
    return _entropy(state.current)


# -- regime report ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RegimeReport:
    """Snapshot of the frequency-vs-dissipation competition at one instant."""

    t: float
    ratios: np.ndarray  # Gamma/(2*Omega_k(t)) per mode
    domain_sizes: np.ndarray  # 1/k per mode
    surviving: np.ndarray  # ratio < 1, i.e. still underdamped
    overdamped_count: int
    underdamped_count: int
    surviving_fraction_small_domains: float
    surviving_fraction_large_domains: float


def regime_report(
    grid: ModeGrid, damping: Damping, schedule: FrequencySchedule, t: float
) -> RegimeReport:
    """Count overdamped vs underdamped modes and how survival skews by domain size.

    Domains are split at the median size: the small-domain class is the
    upper half of the momentum grid. When dissipation dominates, the
    small-domain class retains the larger surviving fraction.
    """
    omegas = frequencies(schedule, grid, t)
    ratios = np.array([competition_ratio(damping, w) for w in omegas])
    sizes = 1.0 / grid.momenta
    surviving = ratios < 1.0
    half = grid.mode_count_M // 2
    small = surviving[half:]  # higher momentum, smaller domains
    large = surviving[:half]
    frac_small = float(np.mean(small)) if small.size else 0.0
    frac_large = float(np.mean(large)) if large.size else 0.0
    for arr in (ratios, sizes, surviving):
        arr.setflags(write=False)
    return RegimeReport(
        t=float(t),
        ratios=ratios,
        domain_sizes=sizes,
        surviving=surviving,
        overdamped_count=int(np.sum(~surviving)),
        underdamped_count=int(np.sum(surviving)),
        surviving_fraction_small_domains=frac_small,
        surviving_fraction_large_domains=frac_large,
    )
