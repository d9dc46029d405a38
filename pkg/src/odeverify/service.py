"""FastAPI service wrapping the experiment recipes.

Domain errors (bad configuration, contract violations) map to HTTP 400
with a structured body; request-shape problems surface as FastAPI's
usual 422.  All endpoints are synchronous pure computations.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .config import ExperimentConfig, resolve_config
from .errors import OdeVerifyError
from .experiments import (
    compare_experiment,
    fig1_experiment,
    fig2_experiment,
    order_experiment,
    refine_experiment,
    run_experiment,
    stability_experiment,
)
from .schemas import (
    CompareResponse,
    Fig1Response,
    Fig2Response,
    HealthResponse,
    ModelInfo,
    OrderResponse,
    RefineResponse,
    RunResponse,
    StabilityResponse,
    TrajectoryPayload,
)
from .systems import get_model, model_names

app = FastAPI(
    title="odeverify",
    version=__version__,
    description=(
        "Fixed-step ODE integration with convergence verification: "
        "pairwise run comparison, divergence diagnostics, step refinement, "
        "and observed-order estimation."
    ),
)


@app.exception_handler(OdeVerifyError)
async def _domain_error_handler(_request: Request, exc: OdeVerifyError) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content={"error": type(exc).__name__, "detail": str(exc)},
    )


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.get("/models", response_model=list[ModelInfo])
def models() -> list[ModelInfo]:
    return [ModelInfo.from_system(get_model(name)) for name in model_names()]


@app.post("/run", response_model=RunResponse)
def run(cfg: ExperimentConfig) -> RunResponse:
    resolved = resolve_config(cfg, "run")
    trajectory = run_experiment(resolved)
    return RunResponse(config=resolved, trajectory=TrajectoryPayload.from_domain(trajectory))


@app.post("/compare", response_model=CompareResponse)
def compare(cfg: ExperimentConfig) -> CompareResponse:
    resolved = resolve_config(cfg, "compare")
    return CompareResponse.from_domain(resolved, compare_experiment(resolved))


@app.post("/refine", response_model=RefineResponse)
def refine(cfg: ExperimentConfig) -> RefineResponse:
    resolved = resolve_config(cfg, "refine")
    return RefineResponse.from_domain(resolved, refine_experiment(resolved))


@app.post("/order", response_model=OrderResponse)
def order(cfg: ExperimentConfig) -> OrderResponse:
    resolved = resolve_config(cfg, "order")
    return OrderResponse.from_domain(resolved, order_experiment(resolved))


@app.post("/stability", response_model=StabilityResponse)
def stability(cfg: ExperimentConfig) -> StabilityResponse:
    resolved = resolve_config(cfg, "stability")
    return StabilityResponse.from_domain(resolved, stability_experiment(resolved))


@app.post("/fig1", response_model=Fig1Response)
def fig1(cfg: ExperimentConfig) -> Fig1Response:
    resolved = resolve_config(cfg, "fig1")
    return Fig1Response.from_domain(resolved, fig1_experiment(resolved))


@app.post("/fig2", response_model=Fig2Response)
def fig2(cfg: ExperimentConfig) -> Fig2Response:
    resolved = resolve_config(cfg, "fig2")
    return Fig2Response.from_domain(resolved, fig2_experiment(resolved))
