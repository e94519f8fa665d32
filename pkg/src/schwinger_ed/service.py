"""HTTP service exposing the experiment tasks.

POST /run/{task} with a JSON body {"config": {...}, "seed": int|null,
"workers": int} runs one task and returns the CSV body, the summary mapping,
and the effective-configuration echo.  Errors come back as a structured
record {"code": "config"|"solver"|"capacity", "message": ..., "field": ...}
so clients can map them onto exit codes.
"""
from __future__ import annotations

from typing import Any

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .config import normalize_config
from .errors import (
    CapacityError,
    ConfigurationError,
    SchwingerEDError,
    SolverConvergenceError,
)
from .experiments import TASKS, run_task

app = FastAPI(title="schwinger-ed", description="Lattice Schwinger model exact diagonalization")


class RunRequest(BaseModel):
    config: dict[str, Any] = Field(default_factory=dict)
    seed: int | None = None
    workers: int = 1


class RunResponse(BaseModel):
    task: str
    csv: str
    summary: dict[str, Any]
    config_echo: str


def _error_payload(code: str, exc: Exception) -> dict[str, Any]:
    payload: dict[str, Any] = {"code": code, "message": str(exc)}
    field = getattr(exc, "field", None)
    if field:
        payload["field"] = field
    return payload


@app.get("/health")
def health() -> dict[str, str]:
    return {"status": "ok"}


@app.get("/tasks")
def tasks() -> dict[str, list[str]]:
    return {"tasks": sorted(TASKS)}


@app.post("/run/{task}", response_model=RunResponse)
def run(task: str, request: RunRequest) -> RunResponse:
    try:
        if task not in TASKS:
            raise ConfigurationError(f"unknown task {task!r}", field="task")
        config = normalize_config(request.config)
        if request.seed is not None:
            config["solver.seed"] = int(request.seed)
        result = run_task(task, config, workers=max(1, request.workers))
    except ConfigurationError as exc:
        raise HTTPException(status_code=400, detail=_error_payload("config", exc))
    except SolverConvergenceError as exc:
        raise HTTPException(status_code=500, detail=_error_payload("solver", exc))
    except CapacityError as exc:
        raise HTTPException(status_code=413, detail=_error_payload("capacity", exc))
    except SchwingerEDError as exc:
        raise HTTPException(status_code=400, detail=_error_payload("config", exc))
    return RunResponse(
        task=result.task,
        csv=result.csv_text,
        summary={k: _jsonable(v) for k, v in result.summary.items()},
        config_echo=result.config_echo,
    )


def _jsonable(v: Any) -> Any:
    if hasattr(v, "item"):
        return v.item()
    return v
