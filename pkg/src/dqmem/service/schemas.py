"""Pydantic request/response models for the simulation service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class RunRequest(BaseModel):
    config: str = Field(description="Scenario config text (key/value + event lines)")
    format: Literal["csv", "json"] = "csv"
    seed: Optional[int] = Field(
        default=None, ge=0, description="Overrides the seed of every perturb event"
    )


class FilePayload(BaseModel):
    name: str
    content: str


class RunResponse(BaseModel):
    files: list[FilePayload]
    sample_count: int
    event_count: int
    final_alive_count: int
    overprint_count: int
    forget_count: int


class LifetimesRequest(BaseModel):
    config: str


class LifetimeEntry(BaseModel):
    k: float
    domain_size: float
    lifetime: Optional[float] = Field(
        description="Overdamping crossing time; null when the mode never overdamps"
    )


class LifetimesResponse(BaseModel):
    gamma: float
    entries: list[LifetimeEntry]


class VerifyOracleRequest(BaseModel):
    dim: int = Field(default=64, ge=2)
    theta_max: float = Field(default=1.2, gt=0.0)


class OracleCheckEntry(BaseModel):
    name: str
    max_error: float
    tolerance: float
    passed: bool


class VerifyOracleResponse(BaseModel):
    dim: int
    theta_max: float
    checks: list[OracleCheckEntry]
    passed: bool


class ErrorBody(BaseModel):
    error: str
    category: Literal["validation", "runtime"]
    detail: str
