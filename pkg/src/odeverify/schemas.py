"""Pydantic request/response models for the HTTP service.

Responses carry the fully-resolved configuration alongside the data, so
a thin client can persist both and reproduce the run exactly.  Floats
round-trip bit-exactly through JSON (shortest-repr serialization on the
way out, exact binary64 parsing on the way in).
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from .config import ExperimentConfig
from .convergence import (
    DifferenceSeries,
    DivergenceReport,
    GrowthRateFit,
    OrderEstimate,
    RefinementOutcome,
)
from .experiments import CompareResult, Fig1Result, Fig2Result, StabilityResult
from .integrators import Trajectory
from .stability import LocalClassification
from .systems import QuadraticOdeSystem

__all__ = [
    "ClassificationRow",
    "CompareResponse",
    "DivergencePayload",
    "Fig1Response",
    "Fig2Response",
    "GrowthFitPayload",
    "HealthResponse",
    "ModelInfo",
    "OrderPoint",
    "OrderResponse",
    "RefineLevelPayload",
    "RefineResponse",
    "RunResponse",
    "SampledFunction",
    "SeriesPayload",
    "StabilityResponse",
    "TrajectoryPayload",
]


class HealthResponse(BaseModel):
    status: str
    version: str


class ModelInfo(BaseModel):
    name: str
    dimension: int
    default_initial_state: list[float]
    has_exact_solution: bool

    @classmethod
    def from_system(cls, system: QuadraticOdeSystem) -> "ModelInfo":
        return cls(
            name=system.name,
            dimension=system.n,
            default_initial_state=system.default_initial_state.tolist(),
            has_exact_solution=system.exact is not None,
        )


class TrajectoryPayload(BaseModel):
    model: str
    method: str
    dt: float
    output_interval: float
    initial_state: list[float]
    terminated_early: Optional[str]
    times: list[float]
    states: list[list[float]]

    @classmethod
    def from_domain(cls, traj: Trajectory) -> "TrajectoryPayload":
        return cls(
            model=traj.model,
            method=traj.spec.label,
            dt=traj.spec.dt,
            output_interval=traj.output_interval,
            initial_state=traj.initial_state.tolist(),
            terminated_early=traj.terminated_early,
            times=traj.times.tolist(),
            states=traj.states.tolist(),
        )


class SampledFunction(BaseModel):
    times: list[float]
    states: list[list[float]]


class SeriesPayload(BaseModel):
    norm: str
    source_a: str
    source_b: str
    truncated: bool
    times: list[float]
    values: list[float]

    @classmethod
    def from_domain(cls, series: DifferenceSeries) -> "SeriesPayload":
        return cls(
            norm=series.norm_kind,
            source_a=series.source_a,
            source_b=series.source_b,
            truncated=series.truncated,
            times=series.times.tolist(),
            values=series.values.tolist(),
        )


class GrowthFitPayload(BaseModel):
    slope: float
    t_lo: float
    t_hi: float
    n_points: int
    rms_residual: float

    @classmethod
    def from_domain(cls, fit: GrowthRateFit) -> "GrowthFitPayload":
        return cls(
            slope=fit.slope,
            t_lo=fit.t_lo,
            t_hi=fit.t_hi,
            n_points=fit.n_points,
            rms_residual=fit.rms_residual,
        )


class DivergencePayload(BaseModel):
    threshold: float
    onset: Optional[float]
    growth: Optional[GrowthFitPayload]
    norm: str

    @classmethod
    def from_domain(cls, report: DivergenceReport) -> "DivergencePayload":
        return cls(
            threshold=report.threshold,
            onset=report.onset,
            growth=None if report.growth is None else GrowthFitPayload.from_domain(report.growth),
            norm=report.norm_kind,
        )


class RunResponse(BaseModel):
    config: ExperimentConfig
    trajectory: TrajectoryPayload


class Fig1Response(BaseModel):
    config: ExperimentConfig
    run_a: TrajectoryPayload
    run_b: TrajectoryPayload
    exact: SampledFunction
    comparison_interval: float
    pair_difference: SeriesPayload
    error_a: SeriesPayload
    error_b: SeriesPayload

    @classmethod
    def from_domain(cls, cfg: ExperimentConfig, result: Fig1Result) -> "Fig1Response":
        return cls(
            config=cfg,
            run_a=TrajectoryPayload.from_domain(result.run_a),
            run_b=TrajectoryPayload.from_domain(result.run_b),
            exact=SampledFunction(
                times=result.exact_times.tolist(), states=result.exact_states.tolist()
            ),
            comparison_interval=result.comparison_interval,
            pair_difference=SeriesPayload.from_domain(result.pair_diff),
            error_a=SeriesPayload.from_domain(result.error_a),
            error_b=SeriesPayload.from_domain(result.error_b),
        )


class Fig2Response(BaseModel):
    config: ExperimentConfig
    scale: str
    dt_a: float
    dt_b: float
    difference: SeriesPayload
    report: DivergencePayload

    @classmethod
    def from_domain(cls, cfg: ExperimentConfig, result: Fig2Result) -> "Fig2Response":
        return cls(
            config=cfg,
            scale=result.scale,
            dt_a=result.dt_a,
            dt_b=result.dt_b,
            difference=SeriesPayload.from_domain(result.series),
            report=DivergencePayload.from_domain(result.report),
        )


class CompareResponse(BaseModel):
    config: ExperimentConfig
    difference: SeriesPayload
    max_difference: float
    onset: Optional[float]

    @classmethod
    def from_domain(cls, cfg: ExperimentConfig, result: CompareResult) -> "CompareResponse":
        return cls(
            config=cfg,
            difference=SeriesPayload.from_domain(result.series),
            max_difference=result.max_difference,
            onset=result.onset,
        )


class RefineLevelPayload(BaseModel):
    level: int
    dt: float
    max_diff: Optional[float]
    truncated: bool


class RefineResponse(BaseModel):
    config: ExperimentConfig
    ladder: list[RefineLevelPayload]
    converged: bool
    epsilon: float
    final_dt: float

    @classmethod
    def from_domain(cls, cfg: ExperimentConfig, outcome: RefinementOutcome) -> "RefineResponse":
        return cls(
            config=cfg,
            ladder=[
                RefineLevelPayload(
                    level=lv.level, dt=lv.dt, max_diff=lv.max_diff, truncated=lv.truncated
                )
                for lv in outcome.ladder
            ],
            converged=outcome.converged,
            epsilon=outcome.epsilon,
            final_dt=outcome.final_dt,
        )


class OrderPoint(BaseModel):
    dt: float
    error: float


class OrderResponse(BaseModel):
    config: ExperimentConfig
    order: float
    points: list[OrderPoint]
    dropped: list[float]

    @classmethod
    def from_domain(cls, cfg: ExperimentConfig, est: OrderEstimate) -> "OrderResponse":
        return cls(
            config=cfg,
            order=est.order,
            points=[OrderPoint(dt=dt, error=err) for dt, err in est.points],
            dropped=list(est.dropped),
        )


class ClassificationRow(BaseModel):
    t: float
    max_real_part: float
    label: str = Field(serialization_alias="class")

    @classmethod
    def from_domain(cls, row: LocalClassification) -> "ClassificationRow":
        return cls(t=row.t, max_real_part=row.max_real_part, label=row.label)


class StabilityResponse(BaseModel):
    config: ExperimentConfig
    rows: list[ClassificationRow]

    @classmethod
    def from_domain(cls, cfg: ExperimentConfig, result: StabilityResult) -> "StabilityResponse":
        return cls(config=cfg, rows=[ClassificationRow.from_domain(r) for r in result.rows])
