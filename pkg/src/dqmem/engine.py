"""Deterministic scenario execution.

Timeline events are applied at their timestamps, interleaved with
evolution steps on the sampling grid. At equal timestamps events apply
first (in file order) and the sample is taken afterwards, so a recording
at t is visible in the sample at t. The whole run is a pure function of
the config: identical configs produce identical results, bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bank import MemoryBank, RecallOutcome, Stimulus, effective_mass
from .condensate import MemoryCode, entropy
from .dynamics import (
    Backend,
    RegimeReport,
    lifetime_profile,
    regime_report,
)
from .errors import MemoryModelError, ScenarioEventError
from .scenario import (
    AssociateEvent,
    PerturbEvent,
    RecordEvent,
    RefreshEvent,
    SampleEvent,
    ScenarioConfig,
    StimulusEvent,
)
from .spectrum import build_mode_grid, frequencies


@dataclass(frozen=True)
class MemorySampleRow:
    code_id: str
    status: str
    entropy: float
    occupations: tuple[float, ...]


@dataclass(frozen=True)
class Sample:
    t: float
    memories: tuple[MemorySampleRow, ...]
    alive_count: int
    overdamped_mode_count: int


@dataclass(frozen=True)
class LifetimeRow:
    k: float
    domain_size: float
    lifetime: float  # +inf when the mode never overdamps


@dataclass(frozen=True)
class LogEntry:
    event_index: int | None  # None for transitions the engine detects itself
    t: float
    kind: str
    detail: str


@dataclass(frozen=True)
class ScenarioResults:
    mode_count: int
    samples: tuple[Sample, ...]
    lifetimes: tuple[LifetimeRow, ...]
    regime: RegimeReport
    events: tuple[LogEntry, ...]


def _sample_times(horizon: float, dt: float) -> list[float]:
    times = [0.0]
    i = 1
    while True:
        t = i * dt
        if t >= horizon - 1e-9 * max(1.0, horizon):
            break
        times.append(t)
        i += 1
    times.append(horizon)
    return times


def _fmt9(x: float) -> str:
    return format(x, ".9g")


def _outcome_detail(result) -> str:
    if result.outcome is RecallOutcome.RECALLED:
        return f"recalled {result.code_id} overlap={_fmt9(result.overlap)}"
    if result.outcome is RecallOutcome.TARGET_FORGOTTEN:
        return f"target_forgotten {result.code_id}"
    if result.outcome is RecallOutcome.CONTINUOUS_FLOW:
        return "continuous_flow " + " ".join(result.flow_code_ids)
    return result.outcome.value


def lifetime_table(config: ScenarioConfig) -> tuple[LifetimeRow, ...]:
    """Per-mode (momentum, domain size, lifetime) rows for a config's grid."""
    grid = build_mode_grid(config.volume_L, config.mode_count_M)
    profile = lifetime_profile(grid, config.damping, config.schedule, Backend.ANALYTIC)
    return tuple(
        LifetimeRow(float(k), 1.0 / float(k), float(tau))
        for k, tau in zip(grid.momenta, profile.lifetimes)
    )


def run_scenario(config: ScenarioConfig) -> ScenarioResults:
    """Execute a scenario: evolve, apply events, sample, and summarize."""
    grid = build_mode_grid(config.volume_L, config.mode_count_M)
    profile = lifetime_profile(grid, config.damping, config.schedule, Backend.ANALYTIC)
    bank = MemoryBank(
        grid=grid,
        dissipative=config.dissipative,
        m_eff=effective_mass(config.volume_L),
        match_threshold=config.thresholds.match,
        assoc_threshold=config.thresholds.assoc,
    )
    eps_forget = config.thresholds.epsilon_forget

    grid_times = _sample_times(config.horizon, config.sample_dt)
    grid_time_set = set(grid_times)
    events_at: dict[float, list[tuple[int, object]]] = {}
    for index, event in enumerate(config.events):
        events_at.setdefault(event.time, []).append((index, event))
    breakpoints = sorted(grid_time_set | set(events_at))

    log: list[LogEntry] = []
    samples: list[Sample] = []

    def apply_event(index: int, event, t: float) -> bool:
        """Apply one event; returns whether it requests a sample at t."""
        if isinstance(event, RecordEvent):
            overprints_before = bank.overprint_count
            code = MemoryCode(np.array(event.occupations), event.code_id, t)
            bank.record(code, t)
            for replaced_id, _ in bank.overprint_log[overprints_before:]:
                log.append(LogEntry(index, t, "overprint", f"destroyed {replaced_id}"))
            log.append(LogEntry(index, t, "record", event.code_id))
            return False
        if isinstance(event, StimulusEvent):
            address = MemoryCode(np.array(event.occupations), f"stimulus-{index}", t)
            result = bank.recall(Stimulus(address, event.energy), t)
            log.append(LogEntry(index, t, "recall", _outcome_detail(result)))
            return False
        if isinstance(event, PerturbEvent):
            applied = bank.perturb(event.amplitude, config.thresholds.perturb, event.seed)
            detail = (
                f"applied amplitude={_fmt9(event.amplitude)} seed={event.seed}"
                if applied
                else "skipped_below_threshold"
            )
            log.append(LogEntry(index, t, "perturb", detail))
            return False
        if isinstance(event, RefreshEvent):
            bank.refresh(event.code_id)
            log.append(LogEntry(index, t, "refresh", event.code_id))
            return False
        if isinstance(event, AssociateEvent):
            result = bank.associate(event.code_id, event.max_hops)
            log.append(LogEntry(index, t, "associate", "path=" + "->".join(result.path)))
            if result.confusion_warning:
                log.append(
                    LogEntry(index, t, "confusion_warning", "association threshold is zero")
                )
            return False
        if isinstance(event, SampleEvent):
            return True
        raise TypeError(f"unhandled event type {type(event).__name__}")

    for t in breakpoints:
        for code_id, when in bank.evolve_to(t, profile, eps_forget):
            log.append(LogEntry(None, when, "forget", code_id))
        want_sample = t in grid_time_set
        for index, event in events_at.get(t, ()):
            try:
                want_sample = apply_event(index, event, t) or want_sample
            except MemoryModelError as exc:
                raise ScenarioEventError(index, exc) from exc
        if want_sample:
            samples.append(_take_sample(bank, config, grid, t))

    regime = regime_report(grid, config.damping, config.schedule, config.horizon)
    return ScenarioResults(
        mode_count=config.mode_count_M,
        samples=tuple(samples),
        lifetimes=lifetime_table(config),
        regime=regime,
        events=tuple(log),
    )


def _take_sample(bank: MemoryBank, config: ScenarioConfig, grid, t: float) -> Sample:
    omegas = frequencies(config.schedule, grid, t)
    overdamped = int(np.sum(config.damping.gamma >= 2.0 * omegas))
    memories = tuple(
        MemorySampleRow(
            code_id=state.code_id,
            status=state.status.value,
            entropy=entropy(state.current),
            occupations=tuple(float(n) for n in state.current.occupations),
        )
        for state in bank.states
    )
    return Sample(float(t), memories, bank.alive_count, overdamped)
