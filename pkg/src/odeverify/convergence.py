"""Convergence verification for transient solutions.

Agreement of two runs bounds only the difference of their errors, so a
small pairwise difference is a necessary condition for convergence,
never a sufficient one.  This module provides the machinery to apply
and stress that check: pairwise trajectory differencing on a shared
output grid, error against a closed-form solution where one exists,
divergence-onset detection with exponential growth-rate fitting, the
successive step-refinement protocol, and empirical order estimation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InsufficientDataError, UsageError
from .integrators import IntegratorSpec, Trajectory, integrate, make_spec
from .systems import QuadraticOdeSystem, exact_solution, get_model

__all__ = [
    "DifferenceSeries",
    "DivergenceReport",
    "GrowthRateFit",
    "OrderEstimate",
    "RefinementLevel",
    "RefinementOutcome",
    "divergence_time",
    "error_vs_exact",
    "growth_rate",
    "make_divergence_report",
    "observed_order",
    "pair_difference",
    "parse_norm",
]

# Errors below this are indistinguishable from binary64 rounding noise;
# observed_order drops such ladder points instead of fitting them.
ROUNDING_FLOOR = 1e-14

MIN_FIT_SAMPLES = 10


def _line_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Least-squares line y = slope*x + intercept via exactly-rounded sums.

    math.fsum makes the fit bit-reproducible across platforms, which
    matters because fitted slopes are pinned as committed baselines.
    """
    n = x.shape[0]
    xm = math.fsum(x) / n
    ym = math.fsum(y) / n
    dx = x - xm
    sxx = math.fsum(dx * dx)
    if sxx == 0.0:
        raise InsufficientDataError("degenerate fit: all abscissae identical")
    slope = math.fsum(dx * (y - ym)) / sxx
    intercept = ym - slope * xm
    return slope, intercept


def parse_norm(norm_kind: str, dimension: Optional[int] = None) -> str:
    """Validate a norm name: "inf", "euclidean", or "component:<i>"."""
    norm_kind = norm_kind.strip().lower()
    if norm_kind in ("inf", "euclidean"):
        return norm_kind
    if norm_kind.startswith("component:"):
        tail = norm_kind.split(":", 1)[1]
        try:
            idx = int(tail)
        except ValueError:
            raise UsageError(f"bad component index in norm {norm_kind!r}") from None
        if idx < 0 or (dimension is not None and idx >= dimension):
            raise UsageError(
                f"component index {idx} out of range for dimension {dimension}"
            )
        return f"component:{idx}"
    raise UsageError(
        f"unknown norm {norm_kind!r}; expected 'inf', 'euclidean', or 'component:<i>'"
    )


def _apply_norm(diff: np.ndarray, norm_kind: str) -> np.ndarray:
    if norm_kind == "inf":
        return np.max(np.abs(diff), axis=1)
    if norm_kind == "euclidean":
        return np.sqrt(np.sum(diff * diff, axis=1))
    idx = int(norm_kind.split(":", 1)[1])
    return np.abs(diff[:, idx])


@dataclass(frozen=True)
class DifferenceSeries:
    """|X1 - X2| per common sample time, under one norm.

    ``truncated`` records that samples past one run's end (overflow or a
    shorter horizon) were excluded from the comparison.
    """

    times: np.ndarray
    values: np.ndarray
    norm_kind: str
    source_a: str
    source_b: str
    truncated: bool = False

    @property
    def n_samples(self) -> int:
        return self.times.shape[0]


def pair_difference(a: Trajectory, b: Trajectory, norm_kind: str = "inf") -> DifferenceSeries:
    """Normed state difference of two runs at their common sample times.

    The runs must share model, initial state, and output interval (the
    grids are then exactly equal floats by construction - comparison
    never interpolates).  Methods and step sizes may differ.  Symmetric
    in (a, b).
    """
    if a.model != b.model:
        raise UsageError(f"model mismatch: {a.model!r} vs {b.model!r}")
    if not np.array_equal(a.initial_state, b.initial_state):
        raise UsageError("initial-state mismatch between trajectories")
    if a.output_interval != b.output_interval:
        raise UsageError(
            f"output-interval mismatch: {a.output_interval!r} vs {b.output_interval!r}"
        )
    norm_kind = parse_norm(norm_kind, a.dimension)
    n = min(a.n_samples, b.n_samples)
    if not np.array_equal(a.times[:n], b.times[:n]):
        raise UsageError("sample grids disagree despite equal output intervals")
    diff = a.states[:n] - b.states[:n]
    truncated = (
        n < max(a.n_samples, b.n_samples)
        or a.terminated_early is not None
        or b.terminated_early is not None
    )
    return DifferenceSeries(
        times=a.times[:n],
        values=_apply_norm(diff, norm_kind),
        norm_kind=norm_kind,
        source_a=a.describe(),
        source_b=b.describe(),
        truncated=truncated,
    )


def error_vs_exact(a: Trajectory, norm_kind: str = "inf") -> DifferenceSeries:
    """|X(t) - u(t)| per sample against the model's closed form."""
    system = get_model(a.model)
    norm_kind = parse_norm(norm_kind, a.dimension)
    exact_states = np.empty_like(a.states)
    for k, t in enumerate(a.times):
        exact_states[k] = exact_solution(system, float(t), a.initial_state)
    diff = a.states - exact_states
    return DifferenceSeries(
        times=a.times,
        values=_apply_norm(diff, norm_kind),
        norm_kind=norm_kind,
        source_a=a.describe(),
        source_b=f"{a.model} exact",
        truncated=a.terminated_early is not None,
    )


def divergence_time(series: DifferenceSeries, threshold: float) -> Optional[float]:
    """Earliest sample time with value >= threshold, or None."""
    threshold = float(threshold)
    if not math.isfinite(threshold) or threshold <= 0.0:
        raise UsageError(f"threshold must be finite and > 0, got {threshold!r}")
    hits = np.nonzero(series.values >= threshold)[0]
    if hits.size == 0:
        return None
    return float(series.times[hits[0]])


@dataclass(frozen=True)
class GrowthRateFit:
    """Least-squares exponent of ln(value) vs t over a value window."""

    slope: float
    t_lo: float
    t_hi: float
    n_points: int
    rms_residual: float


def growth_rate(series: DifferenceSeries, floor: float, ceiling: float) -> GrowthRateFit:
    """Fit an exponential growth rate inside a value window.

    The window runs from the first sample >= floor up to (exclusive) the
    first sample >= ceiling; zero values inside it are excluded from the
    log fit.  Raises InsufficientDataError with fewer than 10 usable
    samples.
    """
    floor = float(floor)
    ceiling = float(ceiling)
    if not (0.0 < floor < ceiling) or not math.isfinite(ceiling):
        raise UsageError(f"need 0 < floor < ceiling, got {floor!r}, {ceiling!r}")
    values = series.values
    above_floor = np.nonzero(values >= floor)[0]
    if above_floor.size == 0:
        raise InsufficientDataError(f"no sample reaches the fit floor {floor!r}")
    start = above_floor[0]
    above_ceiling = np.nonzero(values >= ceiling)[0]
    stop = above_ceiling[0] if above_ceiling.size else values.shape[0]
    window = np.arange(start, stop)
    window = window[values[window] > 0.0]
    if window.size < MIN_FIT_SAMPLES:
        raise InsufficientDataError(
            f"only {window.size} usable samples in the fit window, need {MIN_FIT_SAMPLES}"
        )
    x = series.times[window]
    y = np.log(values[window])
    slope, intercept = _line_fit(x, y)
    resid = y - (slope * x + intercept)
    return GrowthRateFit(
        slope=float(slope),
        t_lo=float(x[0]),
        t_hi=float(x[-1]),
        n_points=int(window.size),
        rms_residual=float(np.sqrt(np.mean(resid * resid))),
    )


@dataclass(frozen=True)
class DivergenceReport:
    """Onset time and growth-rate fit for one difference series."""

    threshold: float
    onset: Optional[float]
    growth: Optional[GrowthRateFit]
    norm_kind: str
    source_a: str
    source_b: str


def make_divergence_report(
    series: DifferenceSeries,
    threshold: float,
    growth_floor: float = 1e-12,
    growth_ceiling: float = 1e-2,
) -> DivergenceReport:
    """Bundle onset detection with a growth fit (absent when the fit
    window holds fewer than 10 samples)."""
    onset = divergence_time(series, threshold)
    try:
        growth = growth_rate(series, growth_floor, growth_ceiling)
    except InsufficientDataError:
        growth = None
    return DivergenceReport(
        threshold=float(threshold),
        onset=onset,
        growth=growth,
        norm_kind=series.norm_kind,
        source_a=series.source_a,
        source_b=series.source_b,
    )


@dataclass(frozen=True)
class RefinementLevel:
    """One rung of the step-refinement ladder.

    ``max_diff`` is the largest difference against the previous rung
    over the whole horizon (None for the first rung); ``truncated``
    flags an incomplete comparison (some run overflowed).
    """

    level: int
    dt: float
    max_diff: Optional[float]
    truncated: bool


@dataclass(frozen=True)
class RefinementOutcome:
    ladder: tuple[RefinementLevel, ...]
    converged: bool
    epsilon: float
    final_dt: float


def refine_until_converged(
    system: QuadraticOdeSystem,
    u0,
    method: str,
    dt0: float,
    ratio: int,
    epsilon: float,
    t_end: float,
    norm_kind: str = "inf",
    max_levels: int = 20,
) -> RefinementOutcome:
    """Successively reduce dt until two consecutive runs agree.

    Integrates at dt0, dt0/ratio, dt0/ratio^2, ...; after each new level
    the maximum pair difference against the previous level over
    [0, t_end] is recorded.  Stops as converged when that maximum falls
    below epsilon on a complete (untruncated) comparison, or gives up
    after max_levels.  An overflow at a coarse level is recorded and
    refinement continues - the next level may survive.
    """
    if int(ratio) != ratio or ratio < 2:
        raise UsageError(f"refinement ratio must be an integer >= 2, got {ratio!r}")
    ratio = int(ratio)
    if max_levels < 1:
        raise UsageError(f"max_levels must be >= 1, got {max_levels!r}")
    epsilon = float(epsilon)
    if not math.isfinite(epsilon) or epsilon <= 0.0:
        raise UsageError(f"epsilon must be finite and > 0, got {epsilon!r}")
    norm_kind = parse_norm(norm_kind, system.n)

    # all levels share the coarsest grid, so comparisons are exact
    output_interval = float(dt0)
    prev = integrate(system, u0, make_spec(method, dt0), t_end, output_interval)
    ladder = [
        RefinementLevel(
            level=0,
            dt=float(dt0),
            max_diff=None,
            truncated=prev.terminated_early is not None,
        )
    ]
    converged = False
    for level in range(1, max_levels):
        dt = float(dt0) / ratio**level
        curr = integrate(system, u0, make_spec(method, dt), t_end, output_interval)
        series = pair_difference(prev, curr, norm_kind)
        max_diff = float(np.max(series.values)) if series.n_samples else math.inf
        ladder.append(
            RefinementLevel(
                level=level, dt=dt, max_diff=max_diff, truncated=series.truncated
            )
        )
        if not series.truncated and max_diff < epsilon:
            converged = True
            break
        prev = curr
    return RefinementOutcome(
        ladder=tuple(ladder),
        converged=converged,
        epsilon=epsilon,
        final_dt=ladder[-1].dt,
    )


@dataclass(frozen=True)
class OrderEstimate:
    """Empirical convergence order from a dt ladder at one probe time."""

    order: float
    points: tuple[tuple[float, float], ...]  # (dt, error) pairs used
    dropped: tuple[float, ...]  # dts whose error fell below the rounding floor


def observed_order(
    system: QuadraticOdeSystem,
    u0,
    method: str,
    dt_ladder,
    t_probe: float,
) -> OrderEstimate:
    """Least-squares slope of ln(error) vs ln(dt) at a fixed probe time.

    The model must carry an exact solution; t_probe must be an exact
    multiple of every dt.  Ladder points whose error underflows the
    1e-14 rounding floor are dropped; at least 3 must survive.
    """
    if system.exact is None:
        raise UsageError(f"model {system.name!r} has no exact solution to probe against")
    dts = [float(dt) for dt in dt_ladder]
    if len(dts) < 3:
        raise UsageError(f"dt ladder needs >= 3 entries, got {len(dts)}")
    if any(dt <= 0 for dt in dts) or any(
        dts[i + 1] >= dts[i] for i in range(len(dts) - 1)
    ):
        raise UsageError("dt ladder must be strictly decreasing and positive")
    t_probe = float(t_probe)
    points: list[tuple[float, float]] = []
    dropped: list[float] = []
    for dt in dts:
        traj = integrate(system, u0, make_spec(method, dt), t_probe, t_probe)
        if traj.terminated_early is not None:
            raise UsageError(
                f"ladder run at dt={dt!r} overflowed before reaching t_probe"
            )
        err_vec = traj.states[-1] - exact_solution(system, t_probe, traj.initial_state)
        err = float(np.max(np.abs(err_vec)))
        if err < ROUNDING_FLOOR:
            dropped.append(dt)
        else:
            points.append((dt, err))
    if len(points) < 3:
        raise InsufficientDataError(
            f"only {len(points)} ladder points above the rounding floor, need 3"
        )
    x = np.log([p[0] for p in points])
    y = np.log([p[1] for p in points])
    slope, _ = _line_fit(x, y)
    return OrderEstimate(order=float(slope), points=tuple(points), dropped=tuple(dropped))
