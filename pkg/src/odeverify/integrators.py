"""Fixed-step time integration: explicit Euler, classical RK4, and the
arbitrary-order Taylor-series method for quadratic systems.

The driver :func:`integrate` is streaming - it stores only decimated
samples - and computes every sample time as ``k * output_interval`` from
the integer sample index, never by accumulated addition, so two runs that
share an output interval share their time grid exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._kernels import (
    METHOD_EULER,
    METHOD_RK4,
    METHOD_TAYLOR,
    OVERFLOW_LIMIT,
    euler_into,
    integrate_loop,
    rk4_into,
    taylor_coeffs_into,
    taylor_eval_into,
)
from .errors import ConfigurationError, UsageError
from .systems import QuadraticOdeSystem, as_state

__all__ = [
    "IntegratorSpec",
    "Trajectory",
    "euler_step",
    "integrate",
    "make_spec",
    "parse_method",
    "rk4_step",
    "taylor_coefficients",
    "taylor_step",
]

MAX_TAYLOR_ORDER = 30
DEFAULT_TAYLOR_ORDER = 5

_METHOD_IDS = {"euler": METHOD_EULER, "rk4": METHOD_RK4, "taylor": METHOD_TAYLOR}


def parse_method(text: str) -> tuple[str, int]:
    """Parse a method string: "euler", "rk4", or "taylor:<p>".

    Returns (method, taylor_order); the order is meaningful only for
    the Taylor method and defaults to 5 for a bare "taylor".
    """
    text = text.strip().lower()
    if text in ("euler", "rk4"):
        return text, DEFAULT_TAYLOR_ORDER
    if text == "taylor":
        return "taylor", DEFAULT_TAYLOR_ORDER
    if text.startswith("taylor:"):
        tail = text.split(":", 1)[1]
        try:
            p = int(tail)
        except ValueError:
            raise UsageError(f"bad Taylor order in method string {text!r}") from None
        return "taylor", p
    raise UsageError(
        f"unknown method {text!r}; expected 'euler', 'rk4', or 'taylor:<p>'"
    )


def _validate_dt(dt: float) -> float:
    dt = float(dt)
    if not math.isfinite(dt) or dt <= 0.0:
        raise UsageError(f"step size must be finite and > 0, got {dt!r}")
    return dt


@dataclass(frozen=True)
class IntegratorSpec:
    """A fixed-step method choice: method name, step size, Taylor order."""

    method: str
    dt: float
    taylor_order: int = DEFAULT_TAYLOR_ORDER

    def __post_init__(self) -> None:
        if self.method not in _METHOD_IDS:
            raise UsageError(f"unknown method {self.method!r}")
        _validate_dt(self.dt)
        if self.method == "taylor" and not (1 <= self.taylor_order <= MAX_TAYLOR_ORDER):
            raise UsageError(
                f"Taylor order must be in [1, {MAX_TAYLOR_ORDER}], got {self.taylor_order}"
            )

    @property
    def expected_order(self) -> int:
        """Formal order of accuracy: Euler 1, RK4 4, Taylor p."""
        if self.method == "euler":
            return 1
        if self.method == "rk4":
            return 4
        return self.taylor_order

    @property
    def label(self) -> str:
        """Canonical method string as used by CLI and config files."""
        if self.method == "taylor":
            return f"taylor:{self.taylor_order}"
        return self.method


def make_spec(method_text: str, dt: float) -> IntegratorSpec:
    method, p = parse_method(method_text)
    return IntegratorSpec(method=method, dt=float(dt), taylor_order=p)


@dataclass(frozen=True)
class Trajectory:
    """Decimated numerical solution of one model under one method.

    ``times[k]`` is exactly ``k * output_interval``; ``states[k]`` is the
    state after ``k * (output_interval / dt)`` steps.  If the run hit the
    overflow cutoff, ``terminated_early == "overflow"`` and only the
    finite prefix is retained.
    """

    model: str
    initial_state: np.ndarray
    spec: IntegratorSpec
    output_interval: float
    times: np.ndarray
    states: np.ndarray
    terminated_early: Optional[str] = None

    @property
    def n_samples(self) -> int:
        return self.times.shape[0]

    @property
    def dimension(self) -> int:
        return self.states.shape[1]

    def describe(self) -> str:
        return f"{self.model} {self.spec.label} dt={self.spec.dt!r}"


def exact_step_count(total: float, part: float, what: str, allow_zero: bool = False) -> int:
    """Integer ratio total/part, or ConfigurationError if not exact.

    "Exact" is judged on the reconstructed product to within 1e-9
    relative; no silent interpolation is ever performed.
    """
    if not math.isfinite(total) or total < 0.0:
        raise ConfigurationError(f"{what}: total {total!r} must be finite and >= 0")
    if not math.isfinite(part) or part <= 0.0:
        raise ConfigurationError(f"{what}: interval {part!r} must be finite and > 0")
    m = int(round(total / part))
    if m == 0:
        if allow_zero and total == 0.0:
            return 0
        raise ConfigurationError(f"{what}: {total!r} is smaller than {part!r}")
    if abs(m * part - total) > 1e-9 * max(abs(total), part):
        raise ConfigurationError(
            f"{what}: {total!r} is not an integer multiple of {part!r}"
        )
    return m


def euler_step(system: QuadraticOdeSystem, u, dt: float) -> np.ndarray:
    """One explicit Euler update u + dt * rhs(u)."""
    u = as_state(u, system.n)
    dt = _validate_dt(dt)
    work = np.empty(system.n)
    out = np.empty(system.n)
    euler_into(system.c, system.L, system.Q, u, dt, work, out)
    return out


def rk4_step(system: QuadraticOdeSystem, u, dt: float) -> np.ndarray:
    """One classical 4-stage Runge-Kutta update, fixed stage order."""
    u = as_state(u, system.n)
    dt = _validate_dt(dt)
    n = system.n
    k1, k2, k3, k4, tmp, out = (np.empty(n) for _ in range(6))
    rk4_into(system.c, system.L, system.Q, u, dt, k1, k2, k3, k4, tmp, out)
    return out


def taylor_coefficients(system: QuadraticOdeSystem, u, p: int) -> np.ndarray:
    """Taylor coefficients u_0..u_p of the local solution at ``u``.

    Returns an array of shape (p + 1, n): row k is the coefficient of
    tau^k in the exact local expansion u(t0 + tau).
    """
    u = as_state(u, system.n)
    if not (1 <= p <= MAX_TAYLOR_ORDER):
        raise UsageError(f"Taylor order must be in [1, {MAX_TAYLOR_ORDER}], got {p}")
    coeffs = np.empty((p + 1, system.n))
    coeffs[0, :] = u
    taylor_coeffs_into(system.c, system.L, system.Q, p, coeffs)
    return coeffs


def taylor_step(system: QuadraticOdeSystem, u, dt: float, p: int) -> np.ndarray:
    """One Taylor-series update: Horner evaluation of sum u_k dt^k.

    Order 1 reduces exactly (bitwise) to :func:`euler_step`.
    """
    dt = _validate_dt(dt)
    coeffs = taylor_coefficients(system, u, p)
    out = np.empty(system.n)
    taylor_eval_into(coeffs, p, dt, out)
    return out


def integrate(
    system: QuadraticOdeSystem,
    u0,
    spec: IntegratorSpec,
    t_end: float,
    output_interval: float,
) -> Trajectory:
    """Integrate from t=0 to t_end, sampling every output_interval.

    ``output_interval`` must be an integer multiple of ``spec.dt`` and
    ``t_end`` an integer multiple of ``output_interval`` (checked on the
    step counts; no interpolation).  If any state component exceeds
    1e300 in magnitude or goes non-finite the run stops early, keeps the
    finite samples, and marks ``terminated_early="overflow"`` - a
    divergent run is data, not a failure.
    """
    u0 = as_state(u0, system.n)
    m_sub = exact_step_count(output_interval, spec.dt, "output_interval vs dt")
    n_blocks = exact_step_count(
        t_end, output_interval, "t_end vs output_interval", allow_zero=True
    )
    buf = np.empty((n_blocks + 1, system.n))
    stored, overflowed = integrate_loop(
        system.c,
        system.L,
        system.Q,
        u0,
        float(spec.dt),
        _METHOD_IDS[spec.method],
        spec.taylor_order if spec.method == "taylor" else 1,
        n_blocks,
        m_sub,
        OVERFLOW_LIMIT,
        buf,
    )
    times = np.arange(stored, dtype=np.float64) * float(output_interval)
    states = buf[:stored].copy()
    times.flags.writeable = False
    states.flags.writeable = False
    return Trajectory(
        model=system.name,
        initial_state=u0.copy(),
        spec=spec,
        output_interval=float(output_interval),
        times=times,
        states=states,
        terminated_early="overflow" if overflowed else None,
    )
