"""Registry of recorded memories.

A dissipative bank lets arbitrarily many codes coexist; a non-dissipative
bank destroys the previous memory on every new recording (overprinting).
Recall is a two-gate process: the stimulus energy must clear the
finite-size mass threshold, and the stimulus address must overlap a
stored code strongly enough. Association walks the graph of memories
whose mutual overlap exceeds a weaker threshold.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .condensate import MemoryCode, overlap
from .dynamics import (
    LifetimeProfile,
    MemoryState,
    Status,
    evolve,
    fresh_state,
    refresh,
    DEFAULT_FORGET_EPS,
)
from .errors import (
    ClockRegressionError,
    DuplicateCodeError,
    GridMismatchError,
    NonPositiveVolumeError,
    StartForgottenError,
    UnknownCodeError,
)
from .spectrum import ModeGrid

DEFAULT_MATCH_THRESHOLD = 0.9
DEFAULT_ASSOC_THRESHOLD = 0.3


def effective_mass(volume_L: float) -> float:
    """Finite-size energy threshold pi/L; vanishes in the infinite-volume limit."""
    if volume_L <= 0:
        raise NonPositiveVolumeError(f"volume must be > 0, got {volume_L}")
    return math.pi / volume_L


@dataclass(frozen=True)
class Stimulus:
    """A recall stimulus: the mirror-mode address pattern plus its energy."""

    address: MemoryCode
    energy: float

    def __post_init__(self):
        if self.energy < 0:
            raise ValueError(f"stimulus energy must be >= 0, got {self.energy}")


class RecallOutcome(enum.Enum):
    RECALLED = "recalled"
    BELOW_ENERGY_THRESHOLD = "below_energy_threshold"
    NO_MATCH = "no_match"
    TARGET_FORGOTTEN = "target_forgotten"
    CONTINUOUS_FLOW = "continuous_flow"


@dataclass(frozen=True)
class RecallResult:
    outcome: RecallOutcome
    code_id: str | None = None
    overlap: float | None = None
    flow_code_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class AssociationResult:
    path: tuple[str, ...]
    confusion_warning: bool = False


def greedy_association_path(
    overlaps: np.ndarray, start: int, threshold: float, max_hops: int
) -> list[int]:
    """Greedy walk over an overlap matrix: always the strongest unvisited edge.

    Indices are in recording order, and ties break toward the earlier
    index, so the walk is fully deterministic.
    """
    n = overlaps.shape[0]
    path = [start]
    visited = {start}
    cur = start
    for _ in range(max_hops):
        best = None
        best_ov = -1.0
        for j in range(n):
            if j in visited:
                continue
            ov = overlaps[cur, j]
            if ov >= threshold and ov > best_ov:
                best, best_ov = j, ov
        if best is None:
            break
        path.append(best)
        visited.add(best)
        cur = best
    return path


@dataclass
class MemoryBank:
    """Ordered collection of memory states plus the recall/association gates.

    Mutations (record, perturb, evolve_to) must be externally serialized;
    recall and associate are read-only.
    """

    grid: ModeGrid
    dissipative: bool
    m_eff: float
    match_threshold: float = DEFAULT_MATCH_THRESHOLD
    assoc_threshold: float = DEFAULT_ASSOC_THRESHOLD
    states: list[MemoryState] = field(default_factory=list)
    clock: float = 0.0
    overprint_log: list[tuple[str, float]] = field(default_factory=list)

    def __post_init__(self):
        if self.m_eff < 0:
            raise ValueError(f"effective mass must be >= 0, got {self.m_eff}")
        if not 0.0 < self.match_threshold <= 1.0:
            raise ValueError("match threshold must lie in (0, 1]")
        if not 0.0 <= self.assoc_threshold < 1.0:
            raise ValueError("association threshold must lie in [0, 1)")
        if self.match_threshold <= self.assoc_threshold:
            raise ValueError("recall must be stricter than association")

    # -- introspection ------------------------------------------------------

    @property
    def continuous_flow_regime(self) -> bool:
        """Zero recall threshold: every signal excites every nearby memory."""
        return self.m_eff == 0.0

    @property
    def overprint_count(self) -> int:
        return len(self.overprint_log)

    def alive_states(self) -> list[MemoryState]:
        return [s for s in self.states if s.status is Status.ALIVE]

    @property
    def alive_count(self) -> int:
        return len(self.alive_states())

    def find(self, code_id: str) -> MemoryState:
        for s in self.states:
            if s.code_id == code_id:
                return s
        raise UnknownCodeError(f"no memory with code id '{code_id}'")

    # -- mutations ------------------------------------------------------------

    def record(self, code: MemoryCode, t: float) -> MemoryState:
        """Store a code at time t.

        Dissipative banks append without touching existing memories;
        non-dissipative banks destroy any alive memory first and log the
        overprint.
        """
        if t < self.clock:
            raise ClockRegressionError(f"record at t={t} behind bank clock {self.clock}")
        if code.mode_count != self.grid.mode_count_M:
            raise GridMismatchError(
                f"code has {code.mode_count} modes, grid has {self.grid.mode_count_M}"
            )
        if any(s.code_id == code.code_id for s in self.states):
            raise DuplicateCodeError(f"code id '{code.code_id}' already recorded")
        if not self.dissipative:
            for s in self.alive_states():
                self.overprint_log.append((s.code_id, t))
                self.states.remove(s)
        stamped = MemoryCode(code.occupations, code.code_id, float(t))
        state = fresh_state(stamped)
        self.states.append(state)
        self.clock = float(t)
        return state

    def evolve_to(
        self,
        t: float,
        profile: LifetimeProfile,
        eps_forget: float = DEFAULT_FORGET_EPS,
    ) -> list[tuple[str, float]]:
        """Evolve every state to time t; returns (code_id, t) per forget transition."""
        if t < self.clock:
            raise ClockRegressionError(f"evolve to t={t} behind bank clock {self.clock}")
        transitions = []
        for i, s in enumerate(self.states):
            dt = t - s.t
            if dt <= 0:
                continue
            evolved = evolve(s, dt, profile, eps_forget)
            if s.status is Status.ALIVE and evolved.status is Status.FORGOTTEN:
                transitions.append((s.code_id, float(t)))
            self.states[i] = evolved
        self.clock = float(t)
        return transitions

    def perturb(self, amplitude: float, threshold: float, seed: int) -> bool:
        """Apply multiplicative noise N_k *= 1 + amplitude*xi, xi ~ U[-1, 1].

        Below the threshold the bank is untouched (weak perturbations do
        nothing); above it every alive memory drifts to a nearby code.
        Occupations are clamped at zero. Returns whether noise was applied.
        """
        if amplitude < 0:
            raise ValueError(f"amplitude must be >= 0, got {amplitude}")
        if threshold < 0:
            raise ValueError(f"threshold must be >= 0, got {threshold}")
        if amplitude < threshold:
            return False
        rng = np.random.default_rng(seed)
        for i, s in enumerate(self.states):
            if s.status is not Status.ALIVE:
                continue
            xi = rng.uniform(-1.0, 1.0, size=s.current.mode_count)
            noisy = np.maximum(s.current.occupations * (1.0 + amplitude * xi), 0.0)
            current = MemoryCode(noisy, s.code_id, s.code0.recorded_at)
            self.states[i] = MemoryState(s.code0, current, s.t, s.status)
        return True

    def refresh(self, code_id: str) -> MemoryState:
        """Refresh one memory: restore its condensate to the recorded code."""
        for i, s in enumerate(self.states):
            if s.code_id == code_id:
                restored = refresh(s)
                self.states[i] = restored
                return restored
        raise UnknownCodeError(f"no memory with code id '{code_id}'")

    # -- queries -----------------------------------------------------------------

    def recall(self, stimulus: Stimulus, t: float) -> RecallResult:
        """Match a recall stimulus against the registry.

        Gate 1: with zero effective mass any signal excites recall and the
        result is the continuous flow of all sufficiently-overlapping
        memories. Gate 2: a finite threshold rejects signals with less
        energy. Past the gates, the best-overlapping alive memory wins if
        it clears the match threshold; failing that, an address that
        points at a forgotten recording reports the loss.
        """
        if t < self.clock:
            raise ClockRegressionError(f"recall at t={t} behind bank clock {self.clock}")
        address = stimulus.address
        if address.mode_count != self.grid.mode_count_M:
            raise GridMismatchError(
                f"address has {address.mode_count} modes, grid has {self.grid.mode_count_M}"
            )
        if self.continuous_flow_regime:
            flow = tuple(
                s.code_id
                for s in self.alive_states()
                if overlap(address, s.current) > self.assoc_threshold
            )
            return RecallResult(RecallOutcome.CONTINUOUS_FLOW, flow_code_ids=flow)
        if stimulus.energy < self.m_eff:
            return RecallResult(RecallOutcome.BELOW_ENERGY_THRESHOLD)

        best_id, best_ov = None, -1.0
        for s in self.alive_states():
            ov = overlap(address, s.current)
            if ov > best_ov:
                best_id, best_ov = s.code_id, ov
        if best_id is not None and best_ov >= self.match_threshold:
            return RecallResult(RecallOutcome.RECALLED, code_id=best_id, overlap=best_ov)

        # The address may point at a memory that has decayed away: match
        # against the recorded codes of forgotten slots.
        lost_id, lost_ov = None, -1.0
        for s in self.states:
            if s.status is not Status.FORGOTTEN:
                continue
            ov = overlap(address, s.code0)
            if ov > lost_ov:
                lost_id, lost_ov = s.code_id, ov
        if lost_id is not None and lost_ov >= self.match_threshold:
            return RecallResult(
                RecallOutcome.TARGET_FORGOTTEN, code_id=lost_id, overlap=lost_ov
            )
        return RecallResult(RecallOutcome.NO_MATCH)

    def associate(self, start_code_id: str, max_hops: int) -> AssociationResult:
        """Follow a path of memories along above-threshold overlaps."""
        if max_hops < 1:
            raise ValueError(f"max_hops must be >= 1, got {max_hops}")
        start = self.find(start_code_id)
        if start.status is Status.FORGOTTEN:
            raise StartForgottenError(f"memory '{start_code_id}' is forgotten")
        alive = self.alive_states()
        index = {s.code_id: i for i, s in enumerate(alive)}
        n = len(alive)
        overlaps = np.ones((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                ov = overlap(alive[i].current, alive[j].current)
                overlaps[i, j] = overlaps[j, i] = ov
        walk = greedy_association_path(
            overlaps, index[start_code_id], self.assoc_threshold, max_hops
        )
        # A zero threshold connects every pair (overlaps are strictly
        # positive): associations degenerate into confusion.
        return AssociationResult(
            path=tuple(alive[i].code_id for i in walk),
            confusion_warning=self.assoc_threshold == 0.0,
        )


def bank_for_grid(
    grid: ModeGrid,
    dissipative: bool,
    match_threshold: float = DEFAULT_MATCH_THRESHOLD,
    assoc_threshold: float = DEFAULT_ASSOC_THRESHOLD,
) -> MemoryBank:
    """Bank with the finite-size recall threshold implied by the grid volume."""
    return MemoryBank(
        grid=grid,
        dissipative=dissipative,
        m_eff=effective_mass(grid.volume_L),
        match_threshold=match_threshold,
        assoc_threshold=assoc_threshold,
    )
