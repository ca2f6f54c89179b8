"""Declarative scenario configs: a flat key/value + event-list text format.

Grammar (see docs/config-format.md for the full reference):

    # comment lines and trailing comments are allowed
    key = value
    event <time> <kind> <args...>

Event kinds: record, stimulus, perturb, refresh, associate, sample.
Parsing is strict: unknown keys, duplicate keys, malformed lines, unsorted
events, and shape mismatches are all rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Union

from .errors import ScenarioParseError, ScenarioValidationError, UnknownKeyError
from .spectrum import (
    Damping,
    FrequencySchedule,
    constant_schedule,
    exp_decay_schedule,
)

DEFAULT_EPSILON_FORGET = 1e-6
DEFAULT_MATCH_THRESHOLD = 0.9
DEFAULT_ASSOC_THRESHOLD = 0.3
DEFAULT_PERTURB_THRESHOLD = 0.0
SAMPLE_COUNT_DEFAULT = 200  # sample_dt defaults to horizon / 200

_CODE_ID_RE = re.compile(r"[A-Za-z0-9_.\-]+\Z")

KNOWN_KEYS = frozenset(
    {
        "grid.volume_L",
        "grid.mode_count_M",
        "damping.gamma",
        "schedule.kind",
        "schedule.T",
        "dissipative",
        "horizon",
        "sample_dt",
        "thresholds.epsilon_forget",
        "thresholds.match",
        "thresholds.assoc",
        "thresholds.perturb",
    }
)


@dataclass(frozen=True)
class Thresholds:
    epsilon_forget: float = DEFAULT_EPSILON_FORGET
    match: float = DEFAULT_MATCH_THRESHOLD
    assoc: float = DEFAULT_ASSOC_THRESHOLD
    perturb: float = DEFAULT_PERTURB_THRESHOLD


@dataclass(frozen=True)
class RecordEvent:
    time: float
    code_id: str
    occupations: tuple[float, ...]


@dataclass(frozen=True)
class StimulusEvent:
    time: float
    energy: float
    occupations: tuple[float, ...]


@dataclass(frozen=True)
class PerturbEvent:
    time: float
    amplitude: float
    seed: int


@dataclass(frozen=True)
class RefreshEvent:
    time: float
    code_id: str


@dataclass(frozen=True)
class AssociateEvent:
    time: float
    code_id: str
    max_hops: int


@dataclass(frozen=True)
class SampleEvent:
    time: float


Event = Union[
    RecordEvent, StimulusEvent, PerturbEvent, RefreshEvent, AssociateEvent, SampleEvent
]


@dataclass(frozen=True)
class ScenarioConfig:
    volume_L: float
    mode_count_M: int
    damping: Damping
    schedule: FrequencySchedule
    dissipative: bool
    thresholds: Thresholds
    horizon: float
    sample_dt: float
    events: tuple[Event, ...]


# -- low-level token conversion ----------------------------------------------


def _parse_float(token: str, line: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ScenarioParseError(line, f"{what}: invalid number '{token}'") from None
    if value != value or value in (float("inf"), float("-inf")):
        raise ScenarioParseError(line, f"{what}: non-finite number '{token}'")
    return value


def _parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token, 10)
    except ValueError:
        raise ScenarioParseError(line, f"{what}: invalid integer '{token}'") from None


def _parse_bool(token: str, line: int, what: str) -> bool:
    if token == "true":
        return True
    if token == "false":
        return False
    raise ScenarioParseError(line, f"{what}: expected 'true' or 'false', got '{token}'")


def _parse_code_id(token: str, line: int, what: str) -> str:
    if not _CODE_ID_RE.match(token):
        raise ScenarioParseError(
            line, f"{what}: code ids may only contain [A-Za-z0-9_.-], got '{token}'"
        )
    return token


# -- parsing -------------------------------------------------------------------


def _parse_event(line_no: int, tokens: list[str]) -> Event:
    if len(tokens) < 2:
        raise ScenarioParseError(line_no, "event needs a time and a kind")
    time = _parse_float(tokens[0], line_no, "event time")
    kind = tokens[1]
    args = tokens[2:]
    if kind == "record":
        if len(args) < 2:
            raise ScenarioParseError(
                line_no, "record needs a code id and at least one occupation"
            )
        code_id = _parse_code_id(args[0], line_no, "record code id")
        occ = tuple(_parse_float(a, line_no, "record occupation") for a in args[1:])
        return RecordEvent(time, code_id, occ)
    if kind == "stimulus":
        if len(args) < 2:
            raise ScenarioParseError(
                line_no, "stimulus needs an energy and at least one occupation"
            )
        energy = _parse_float(args[0], line_no, "stimulus energy")
        occ = tuple(_parse_float(a, line_no, "stimulus occupation") for a in args[1:])
        return StimulusEvent(time, energy, occ)
    if kind == "perturb":
        if len(args) != 2:
            raise ScenarioParseError(line_no, "perturb needs an amplitude and a seed")
        return PerturbEvent(
            time,
            _parse_float(args[0], line_no, "perturb amplitude"),
            _parse_int(args[1], line_no, "perturb seed"),
        )
    if kind == "refresh":
        if len(args) != 1:
            raise ScenarioParseError(line_no, "refresh needs a code id")
        return RefreshEvent(time, _parse_code_id(args[0], line_no, "refresh code id"))
    if kind == "associate":
        if len(args) != 2:
            raise ScenarioParseError(line_no, "associate needs a code id and max hops")
        return AssociateEvent(
            time,
            _parse_code_id(args[0], line_no, "associate code id"),
            _parse_int(args[1], line_no, "associate max hops"),
        )
    if kind == "sample":
        if args:
            raise ScenarioParseError(line_no, "sample takes no arguments")
        return SampleEvent(time)
    raise ScenarioParseError(line_no, f"unknown event kind '{kind}'")


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse and validate a scenario config from its text form."""
    settings: dict[str, tuple[int, str]] = {}
    events: list[Event] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "event":
            events.append(_parse_event(line_no, tokens[1:]))
            continue
        if "=" not in line:
            raise ScenarioParseError(line_no, "expected 'key = value' or 'event ...'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ScenarioParseError(line_no, "empty key or value")
        if key not in KNOWN_KEYS:
            raise UnknownKeyError(line_no, key)
        if key in settings:
            raise ScenarioValidationError(key, "duplicate key")
        settings[key] = (line_no, value)

    def setting(key):
        return settings.get(key)

    def required(key, conv):
        entry = setting(key)
        if entry is None:
            raise ScenarioValidationError(key, "missing required key")
        return conv(entry[1], entry[0], key)

    def optional(key, conv, default):
        entry = setting(key)
        if entry is None:
            return default
        return conv(entry[1], entry[0], key)

    volume = required("grid.volume_L", _parse_float)
    modes = required("grid.mode_count_M", _parse_int)
    gamma = required("damping.gamma", _parse_float)
    horizon = required("horizon", _parse_float)

    if volume <= 0:
        raise ScenarioValidationError("grid.volume_L", "must be > 0")
    if modes < 1:
        raise ScenarioValidationError("grid.mode_count_M", "must be >= 1")
    if gamma < 0:
        raise ScenarioValidationError("damping.gamma", "must be >= 0")
    if horizon <= 0:
        raise ScenarioValidationError("horizon", "must be > 0")

    kind = optional("schedule.kind", lambda v, l, k: v, "constant")
    t_entry = setting("schedule.T")
    if kind == "constant":
        if t_entry is not None:
            raise ScenarioValidationError(
                "schedule.T", "only valid with schedule.kind = exp_decay"
            )
        schedule = constant_schedule()
    elif kind == "exp_decay":
        if t_entry is None:
            raise ScenarioValidationError("schedule.T", "required for exp_decay")
        T = _parse_float(t_entry[1], t_entry[0], "schedule.T")
        if T <= 0:
            raise ScenarioValidationError("schedule.T", "must be > 0")
        schedule = exp_decay_schedule(T)
    else:
        line = setting("schedule.kind")[0]
        raise ScenarioParseError(line, "schedule.kind must be constant or exp_decay")

    dissipative = optional("dissipative", _parse_bool, True)
    sample_dt = optional("sample_dt", _parse_float, horizon / SAMPLE_COUNT_DEFAULT)
    if sample_dt <= 0:
        raise ScenarioValidationError("sample_dt", "must be > 0")

    thresholds = Thresholds(
        epsilon_forget=optional(
            "thresholds.epsilon_forget", _parse_float, DEFAULT_EPSILON_FORGET
        ),
        match=optional("thresholds.match", _parse_float, DEFAULT_MATCH_THRESHOLD),
        assoc=optional("thresholds.assoc", _parse_float, DEFAULT_ASSOC_THRESHOLD),
        perturb=optional(
            "thresholds.perturb", _parse_float, DEFAULT_PERTURB_THRESHOLD
        ),
    )
    if thresholds.epsilon_forget <= 0:
        raise ScenarioValidationError("thresholds.epsilon_forget", "must be > 0")
    if not 0.0 < thresholds.match <= 1.0:
        raise ScenarioValidationError("thresholds.match", "must lie in (0, 1]")
    if not 0.0 <= thresholds.assoc < 1.0:
        raise ScenarioValidationError("thresholds.assoc", "must lie in [0, 1)")
    if thresholds.match <= thresholds.assoc:
        raise ScenarioValidationError(
            "thresholds.match", "must exceed thresholds.assoc"
        )
    if thresholds.perturb < 0:
        raise ScenarioValidationError("thresholds.perturb", "must be >= 0")

    _validate_events(events, modes, horizon)

    return ScenarioConfig(
        volume_L=volume,
        mode_count_M=modes,
        damping=Damping(gamma),
        schedule=schedule,
        dissipative=dissipative,
        thresholds=thresholds,
        horizon=horizon,
        sample_dt=sample_dt,
        events=tuple(events),
    )


def _validate_events(events: list[Event], modes: int, horizon: float) -> None:
    times = [e.time for e in events]
    if any(a > b for a, b in zip(times, times[1:])):
        raise ScenarioValidationError("events", "not sorted by time")
    seen_ids = set()
    for i, event in enumerate(events):
        if not 0.0 <= event.time <= horizon:
            raise ScenarioValidationError(
                f"events[{i}].time", f"outside [0, {horizon}]"
            )
        if isinstance(event, (RecordEvent, StimulusEvent)):
            if len(event.occupations) != modes:
                raise ScenarioValidationError(f"events[{i}].code", "length mismatch")
            if any(n < 0 for n in event.occupations):
                raise ScenarioValidationError(f"events[{i}].code", "negative occupation")
        if isinstance(event, RecordEvent):
            if event.code_id in seen_ids:
                raise ScenarioValidationError(
                    f"events[{i}].code_id", f"duplicate id '{event.code_id}'"
                )
            seen_ids.add(event.code_id)
        if isinstance(event, StimulusEvent) and event.energy < 0:
            raise ScenarioValidationError(f"events[{i}].energy", "must be >= 0")
        if isinstance(event, PerturbEvent):
            if event.amplitude < 0:
                raise ScenarioValidationError(f"events[{i}].amplitude", "must be >= 0")
            if event.seed < 0:
                raise ScenarioValidationError(f"events[{i}].seed", "must be >= 0")
        if isinstance(event, AssociateEvent) and event.max_hops < 1:
            raise ScenarioValidationError(f"events[{i}].max_hops", "must be >= 1")


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Read and parse a scenario config file."""
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def override_perturb_seeds(config: ScenarioConfig, seed: int) -> ScenarioConfig:
    """Re-seed every perturb event: the i-th one (in file order) gets seed + i."""
    out = []
    ordinal = 0
    for event in config.events:
        if isinstance(event, PerturbEvent):
            out.append(replace(event, seed=seed + ordinal))
            ordinal += 1
        else:
            out.append(event)
    return replace(config, events=tuple(out))
