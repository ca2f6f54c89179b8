"""FastAPI service wrapping the simulation engine.

Stateless endpoints: each request carries a full scenario config and the
response carries rendered outputs, so two identical requests produce
identical bytes. Config problems map to 400 with category "validation";
failures inside a run map to 500 with category "runtime".
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..emit import render
from ..engine import lifetime_table, run_scenario
from ..errors import MemoryModelError, ScenarioError
from ..fock import run_oracle_checks
from ..scenario import override_perturb_seeds, parse_scenario
from .schemas import (
    ErrorBody,
    FilePayload,
    LifetimeEntry,
    LifetimesRequest,
    LifetimesResponse,
    OracleCheckEntry,
    RunRequest,
    RunResponse,
    VerifyOracleRequest,
    VerifyOracleResponse,
)


def _error_response(status: int, category: str, exc: Exception) -> JSONResponse:
    body = ErrorBody(error=type(exc).__name__, category=category, detail=str(exc))
    return JSONResponse(status_code=status, content=body.model_dump())


def create_app() -> FastAPI:
    app = FastAPI(
        title="dissipative memory simulator",
        description="Scenario runs, lifetime tables, and validator checks "
        "for the condensate memory model.",
        version=__version__,
    )

    @app.exception_handler(ScenarioError)
    async def scenario_error_handler(request: Request, exc: ScenarioError):
        return _error_response(400, "validation", exc)

    @app.exception_handler(MemoryModelError)
    async def model_error_handler(request: Request, exc: MemoryModelError):
        return _error_response(500, "runtime", exc)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/run", response_model=RunResponse)
    def run(request: RunRequest) -> RunResponse:
        config = parse_scenario(request.config)
        if request.seed is not None:
            config = override_perturb_seeds(config, request.seed)
        results = run_scenario(config)
        files = [
            FilePayload(name=name, content=content)
            for name, content in render(results, request.format).items()
        ]
        return RunResponse(
            files=files,
            sample_count=len(results.samples),
            event_count=len(results.events),
            final_alive_count=results.samples[-1].alive_count if results.samples else 0,
            overprint_count=sum(1 for e in results.events if e.kind == "overprint"),
            forget_count=sum(1 for e in results.events if e.kind == "forget"),
        )

    @app.post("/lifetimes", response_model=LifetimesResponse)
    def lifetimes(request: LifetimesRequest) -> LifetimesResponse:
        config = parse_scenario(request.config)
        entries = [
            LifetimeEntry(
                k=row.k,
                domain_size=row.domain_size,
                lifetime=None if math.isinf(row.lifetime) else row.lifetime,
            )
            for row in lifetime_table(config)
        ]
        return LifetimesResponse(gamma=config.damping.gamma, entries=entries)

    @app.post("/verify-oracle", response_model=VerifyOracleResponse)
    def verify_oracle(request: VerifyOracleRequest) -> VerifyOracleResponse:
        checks = run_oracle_checks(dim_D=request.dim, theta_max=request.theta_max)
        entries = [
            OracleCheckEntry(
                name=c.name,
                max_error=c.max_error,
                tolerance=c.tolerance,
                passed=c.passed,
            )
            for c in checks
        ]
        return VerifyOracleResponse(
            dim=request.dim,
            theta_max=request.theta_max,
            checks=entries,
            passed=all(c.passed for c in checks),
        )

    return app


app = create_app()
