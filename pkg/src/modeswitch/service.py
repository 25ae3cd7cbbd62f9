"""HTTP front end: schedule optimization as a stateless compute service.

Every endpoint is a pure function of its request body; artifacts come back
as strings so clients own all file I/O.
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .config import parse_run_config
from .errors import (BadBlocks, ConfigError, LengthMismatch, ModeswitchError,
                     NonFiniteState)
from .models import BUILTIN_MODELS
from .runner import replay_schedule, run_from_config, validate

app = FastAPI(title="modeswitch", version=__version__,
              description="Optimal mode scheduling for switched dynamical systems")


class RunRequest(BaseModel):
    config_text: str = Field(description="Run configuration (INI text)")


class RunResponse(BaseModel):
    status: str
    summary: dict
    artifacts: dict[str, str]


class ReplayRequest(BaseModel):
    config_text: str
    schedule_csv: str


class ReplayResponse(BaseModel):
    cost: float
    d_sigma: float
    artifacts: dict[str, str]


class ValidateRequest(BaseModel):
    seed: int = 0


class ValidateResponse(BaseModel):
    all_pass: bool
    report: dict
    artifacts: dict[str, str]


def _bad_request(exc: ModeswitchError) -> HTTPException:
    detail = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ConfigError) and exc.field:
        detail["field"] = exc.field
    return HTTPException(status_code=422, detail=detail)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/models")
def models() -> dict:
    return {"builtin": sorted(BUILTIN_MODELS), "inline": ["switched_linear"]}


@app.post("/run", response_model=RunResponse)
def run(request: RunRequest) -> RunResponse:
    try:
        config = parse_run_config(request.config_text)
        result = run_from_config(config)
    except (ConfigError, BadBlocks) as exc:
        raise _bad_request(exc) from exc
    except NonFiniteState as exc:
        raise HTTPException(status_code=422, detail={
            "error": "NonFiniteState", "message": str(exc)}) from exc
    return RunResponse(status=result.status, summary=result.summary,
                       artifacts=result.artifacts)


@app.post("/replay", response_model=ReplayResponse)
def replay(request: ReplayRequest) -> ReplayResponse:
    try:
        config = parse_run_config(request.config_text)
        result = replay_schedule(config, request.schedule_csv)
    except (ConfigError, BadBlocks, LengthMismatch) as exc:
        raise _bad_request(exc) from exc
    return ReplayResponse(cost=result.cost, d_sigma=result.d_sigma,
                          artifacts=result.artifacts)


@app.post("/validate", response_model=ValidateResponse)
def run_validation(request: ValidateRequest) -> ValidateResponse:
    report, artifacts = validate(seed=request.seed)
    return ValidateResponse(all_pass=report["all_pass"], report=report,
                            artifacts=artifacts)
