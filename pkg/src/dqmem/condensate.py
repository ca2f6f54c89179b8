"""Code-labeled condensate vacua built from per-mode two-mode squeezing.

A memory is the vector of per-mode condensate occupations N_k. Each mode is
a two-mode squeezed pair (system mode and its mirror), so the mirror
occupation equals the system occupation by construction and the pair is
fully described by one squeeze angle theta_k = asinh(sqrt(N_k)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    GridMismatchError,
    NegativeOccupationError,
    NegativeSqueezeError,
    NonPositiveBetaError,
)
from .spectrum import FrequencySchedule, ModeGrid, frequencies

LOG2 = math.log(2.0)


def _as_readonly_vector(values, what: str, error_cls) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be a 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must be finite")
    if np.any(arr < 0):
        raise error_cls(f"{what} must be >= 0")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MemoryCode:
    """Per-mode occupation vector labeling one vacuum, plus its identity.

    The code is the full vector, not an aggregate; occupations are
    nonnegative reals so the same type serves freshly recorded integer
    codes and their decayed descendants.
    """

    occupations: np.ndarray
    code_id: str
    recorded_at: float

    def __post_init__(self):
        object.__setattr__(
            self,
            "occupations",
            _as_readonly_vector(self.occupations, "occupations", NegativeOccupationError),
        )

    @property
    def mode_count(self) -> int:
        return self.occupations.shape[0]


@dataclass(frozen=True, eq=False)
class SqueezeVector:
    """Per-mode squeeze angles; theta_k = asinh(sqrt(N_k)) for a paired code."""

    thetas: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "thetas", _as_readonly_vector(self.thetas, "squeeze angles", NegativeSqueezeError)
        )

    @property
    def mode_count(self) -> int:
        return self.thetas.shape[0]


@dataclass(frozen=True, eq=False)
class BalanceReport:
    """Per-mode system-minus-mirror occupation differences (audit trail)."""

    per_mode_residuals: np.ndarray
    max_abs_residual: float


def code_to_squeeze(code: MemoryCode) -> SqueezeVector:
    """Squeeze angles reproducing the code: sinh^2(theta_k) = N_k."""
    return SqueezeVector(np.arcsinh(np.sqrt(code.occupations)))


def squeeze_to_code(thetas: SqueezeVector, code_id: str, t: float) -> MemoryCode:
    """Occupations generated by the squeeze angles: N_k = sinh^2(theta_k)."""
    return MemoryCode(np.sinh(thetas.thetas) ** 2, code_id, float(t))


def balance_residual(code: MemoryCode) -> BalanceReport:
    """Difference between system and mirror occupations per mode.

    The pairwise construction creates system and mirror quanta together,
    so the mirror occupation is defined equal to N_k and every residual
    is exactly zero; the report exists for audit trails.
    """
    mirror = code.occupations.copy()
    residuals = code.occupations - mirror
    residuals.setflags(write=False)
    return BalanceReport(residuals, float(np.max(np.abs(residuals))) if residuals.size else 0.0)


def _log_cosh(x: np.ndarray) -> np.ndarray:
    # |x| + log1p(e^{-2|x|}) - log 2 avoids cosh overflow for large angles
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - LOG2


def _require_same_grid(a: MemoryCode, b: MemoryCode) -> None:
    if a.mode_count != b.mode_count:
        raise GridMismatchError(
            f"codes live on different grids ({a.mode_count} vs {b.mode_count} modes)"
        )


def log_overlap(code_a: MemoryCode, code_b: MemoryCode) -> float:
    """Natural log of the vacuum overlap; -sum_k log cosh(dtheta_k)."""
    _require_same_grid(code_a, code_b)
    dtheta = code_to_squeeze(code_a).thetas - code_to_squeeze(code_b).thetas
    return float(-np.sum(_log_cosh(dtheta)))


def overlap(code_a: MemoryCode, code_b: MemoryCode) -> float:
    """Overlap of two code-labeled vacua: prod_k 1/cosh(theta^a_k - theta^b_k).

    Equals 1 iff the codes coincide and shrinks toward zero as modes with
    differing angles accumulate, which is how finite volume smooths the
    strict inequivalence of distinct vacua.
    """
    return math.exp(log_overlap(code_a, code_b))


def entropy(code: MemoryCode) -> float:
    """Condensate entropy S = sum_k [(N_k+1) ln(N_k+1) - N_k ln N_k].

    The N_k = 0 term is 0 by continuity. S is strictly increasing in each
    N_k, so it tracks the irreversible loss of condensate along evolution.
    """
    n = code.occupations
    terms = (n + 1.0) * np.log1p(n)
    nz = n > 0
    terms[nz] -= n[nz] * np.log(n[nz])
    return float(np.sum(terms))


def thermal_code(
    beta: float,
    grid: ModeGrid,
    schedule: FrequencySchedule,
    t: float,
    code_id: str = "thermal",
) -> MemoryCode:
    """Bose occupations N_k = 1/(exp(beta*Omega_k(t)) - 1) at inverse temperature beta.

    This is the stationary (free-energy extremizing) occupation profile, so
    memory states double as finite-temperature states.
    """
    if beta <= 0:
        raise NonPositiveBetaError(f"inverse temperature must be > 0, got {beta}")
    omega = frequencies(schedule, grid, t)
    with np.errstate(over="ignore"):
        n = 1.0 / np.expm1(beta * omega)
    return MemoryCode(n, code_id, float(t))
