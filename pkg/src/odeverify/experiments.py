"""Experiment recipes behind the service endpoints and CLI subcommands.

Each function takes a resolved :class:`~odeverify.config.ExperimentConfig`
and returns plain result objects; file emission belongs to the client.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .config import ExperimentConfig
from .convergence import (
    DifferenceSeries,
    DivergenceReport,
    OrderEstimate,
    RefinementOutcome,
    divergence_time,
    error_vs_exact,
    make_divergence_report,
    observed_order,
    pair_difference,
    refine_until_converged,
)
from .errors import ConfigurationError
from .integrators import Trajectory, integrate, make_spec
from .stability import LocalClassification, classify_along
from .systems import exact_solution, get_model

__all__ = [
    "CompareResult",
    "Fig1Result",
    "Fig2Result",
    "StabilityResult",
    "common_interval",
    "compare_experiment",
    "fig1_experiment",
    "fig2_experiment",
    "order_experiment",
    "refine_experiment",
    "run_experiment",
    "stability_experiment",
]

FIG1_EXACT_INTERVAL = 0.01


def common_interval(dt_a: float, dt_b: float) -> float:
    """Smallest interval that is an integer multiple of both steps.

    Computed exactly through rational approximation of the binary64
    inputs, so the result survives the driver's divisibility checks.
    """
    fa = Fraction(dt_a).limit_denominator(10**12)
    fb = Fraction(dt_b).limit_denominator(10**12)
    if fa <= 0 or fb <= 0:
        raise ConfigurationError("step sizes must be positive")
    lcm = Fraction(
        math.lcm(fa.numerator, fb.numerator), math.gcd(fa.denominator, fb.denominator)
    )
    return float(lcm)


def _initial_state(cfg: ExperimentConfig, system) -> np.ndarray:
    if cfg.u0 is None:
        return system.default_initial_state
    return np.asarray(cfg.u0, dtype=np.float64)


def run_experiment(cfg: ExperimentConfig) -> Trajectory:
    system = get_model(cfg.model)
    spec = make_spec(cfg.method, cfg.dt)
    return integrate(system, _initial_state(cfg, system), spec, cfg.t_end, cfg.out_interval)


@dataclass(frozen=True)
class Fig1Result:
    """Two Euler runs of the linear-decay problem against its closed form."""

    run_a: Trajectory
    run_b: Trajectory
    exact_times: np.ndarray
    exact_states: np.ndarray
    pair_diff: DifferenceSeries
    error_a: DifferenceSeries
    error_b: DifferenceSeries
    comparison_interval: float


def fig1_experiment(cfg: ExperimentConfig) -> Fig1Result:
    """Two step sizes of one method: close to each other at the common
    sample times, yet much farther from the exact solution."""
    system = get_model(cfg.model)
    u0 = _initial_state(cfg, system)
    run_a = integrate(system, u0, make_spec(cfg.method, cfg.dt), cfg.t_end, cfg.dt)
    run_b = integrate(system, u0, make_spec(cfg.method, cfg.dt2), cfg.t_end, cfg.dt2)

    # pairwise comparison lives on the coarsest shared grid; per-run error
    # series stay on each run's own grid for plotting
    common = common_interval(cfg.dt, cfg.dt2)
    cmp_a = integrate(system, u0, make_spec(cfg.method, cfg.dt), cfg.t_end, common)
    cmp_b = integrate(system, u0, make_spec(cfg.method, cfg.dt2), cfg.t_end, common)
    pair = pair_difference(cmp_a, cmp_b, cfg.norm)
    err_a = error_vs_exact(run_a, cfg.norm)
    err_b = error_vs_exact(run_b, cfg.norm)

    n_exact = int(round(cfg.t_end / FIG1_EXACT_INTERVAL))
    exact_times = np.arange(n_exact + 1, dtype=np.float64) * FIG1_EXACT_INTERVAL
    exact_states = np.empty((n_exact + 1, system.n))
    for k, t in enumerate(exact_times):
        exact_states[k] = exact_solution(system, float(t), u0)
    return Fig1Result(
        run_a=run_a,
        run_b=run_b,
        exact_times=exact_times,
        exact_states=exact_states,
        pair_diff=pair,
        error_a=err_a,
        error_b=err_b,
        comparison_interval=common,
    )


@dataclass(frozen=True)
class Fig2Result:
    """Divergence of two step sizes on the chaotic model."""

    scale: str
    dt_a: float
    dt_b: float
    series: DifferenceSeries
    report: DivergenceReport


def fig2_experiment(cfg: ExperimentConfig) -> Fig2Result:
    system = get_model(cfg.model)
    u0 = _initial_state(cfg, system)
    run_a = integrate(system, u0, make_spec(cfg.method, cfg.dt), cfg.t_end, cfg.out_interval)
    run_b = integrate(system, u0, make_spec(cfg.method, cfg.dt2), cfg.t_end, cfg.out_interval)
    series = pair_difference(run_a, run_b, cfg.norm)
    report = make_divergence_report(
        series, cfg.threshold, cfg.growth_floor, cfg.growth_ceiling
    )
    return Fig2Result(
        scale=cfg.scale or "custom",
        dt_a=cfg.dt,
        dt_b=cfg.dt2,
        series=series,
        report=report,
    )


@dataclass(frozen=True)
class CompareResult:
    """Two methods at one step size: the necessary-condition check."""

    series: DifferenceSeries
    max_difference: float
    onset: Optional[float]


def compare_experiment(cfg: ExperimentConfig) -> CompareResult:
    system = get_model(cfg.model)
    u0 = _initial_state(cfg, system)
    run_a = integrate(system, u0, make_spec(cfg.method, cfg.dt), cfg.t_end, cfg.out_interval)
    run_b = integrate(system, u0, make_spec(cfg.method2, cfg.dt), cfg.t_end, cfg.out_interval)
    series = pair_difference(run_a, run_b, cfg.norm)
    return CompareResult(
        series=series,
        max_difference=float(np.max(series.values)),
        onset=divergence_time(series, cfg.threshold),
    )


def refine_experiment(cfg: ExperimentConfig) -> RefinementOutcome:
    system = get_model(cfg.model)
    return refine_until_converged(
        system,
        _initial_state(cfg, system),
        cfg.method,
        cfg.dt,
        cfg.ratio,
        cfg.epsilon,
        cfg.t_end,
        norm_kind=cfg.norm,
        max_levels=cfg.max_levels,
    )


def order_experiment(cfg: ExperimentConfig) -> OrderEstimate:
    system = get_model(cfg.model)
    return observed_order(
        system, _initial_state(cfg, system), cfg.method, cfg.dt_ladder, cfg.t_probe
    )


@dataclass(frozen=True)
class StabilityResult:
    rows: list[LocalClassification]


def stability_experiment(cfg: ExperimentConfig) -> StabilityResult:
    system = get_model(cfg.model)
    trajectory = run_experiment(cfg)
    return StabilityResult(rows=classify_along(system, trajectory))
