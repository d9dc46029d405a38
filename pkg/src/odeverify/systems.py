"""Autonomous ODE systems with quadratic right-hand sides.

Every model is stored in one uniform tensor form

    du/dt = c + L.u + Q(u, u)

with ``Q`` symmetrized in its last two indices at construction.  The
representation is exact for both registered models (the scalar linear
decay ``du/dt = -10 u`` and the three-variable Lorenz 1990 system) and
is what makes the arbitrary-order Taylor recurrence in
:mod:`odeverify.integrators` exact, with no automatic differentiation.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._kernels import rhs_into
from .errors import NoExactSolutionError, UsageError

__all__ = [
    "ExactSolution",
    "QuadraticOdeSystem",
    "as_state",
    "build_linear_decay",
    "build_lorenz1990",
    "exact_solution",
    "get_model",
    "jacobian",
    "model_names",
    "rhs",
]


def as_state(u, n: Optional[int] = None) -> np.ndarray:
    """Validate and convert ``u`` to a finite float64 state vector.

    Raises UsageError on NaN/Inf components or on a dimension mismatch;
    non-finite input is rejected at the boundary, never propagated.
    """
    arr = np.asarray(u, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise UsageError(f"state must be a 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise UsageError("state contains NaN or Inf components")
    if n is not None and arr.shape[0] != n:
        raise UsageError(f"state has dimension {arr.shape[0]}, system expects {n}")
    return arr


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.float64, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ExactSolution:
    """Closed-form solution evaluator: (t, u0) -> state at time t."""

    label: str
    evaluate: Callable[[float, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadraticOdeSystem:
    """Immutable coefficients (c, L, Q) of one quadratic ODE system.

    ``Q`` is symmetric in its last two indices; all arrays are read-only
    float64, so instances are safely shareable across threads.
    """

    name: str
    c: np.ndarray
    L: np.ndarray
    Q: np.ndarray
    default_initial_state: np.ndarray
    exact: Optional[ExactSolution] = None

    @property
    def n(self) -> int:
        return self.c.shape[0]

    def __repr__(self) -> str:  # keep reprs short; tensors are not useful output
        return f"QuadraticOdeSystem(name={self.name!r}, n={self.n})"


def make_system(
    name: str,
    c,
    L,
    Q,
    default_initial_state,
    exact: Optional[ExactSolution] = None,
) -> QuadraticOdeSystem:
    """Build a system, symmetrizing Q and validating finiteness."""
    c = np.asarray(c, dtype=np.float64)
    L = np.asarray(L, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64)
    n = c.shape[0]
    if c.shape != (n,) or L.shape != (n, n) or Q.shape != (n, n, n):
        raise UsageError(
            f"inconsistent coefficient shapes: c {c.shape}, L {L.shape}, Q {Q.shape}"
        )
    if not (np.all(np.isfinite(c)) and np.all(np.isfinite(L)) and np.all(np.isfinite(Q))):
        raise UsageError("system coefficients must be finite")
    Q = 0.5 * (Q + Q.transpose(0, 2, 1))
    u0 = as_state(default_initial_state, n)
    return QuadraticOdeSystem(
        name=name,
        c=_readonly(c),
        L=_readonly(L),
        Q=_readonly(Q),
        default_initial_state=_readonly(u0),
        exact=exact,
    )


@functools.lru_cache(maxsize=None)
def build_linear_decay() -> QuadraticOdeSystem:
    """Scalar linear decay du/dt = -10 u with closed-form solution."""

    def _exact(t: float, u0: np.ndarray) -> np.ndarray:
        return u0 * math.exp(-10.0 * t)

    return make_system(
        name="linear-decay",
        c=[0.0],
        L=[[-10.0]],
        Q=np.zeros((1, 1, 1)),
        default_initial_state=[1.0],
        exact=ExactSolution(label="u0 * exp(-10 t)", evaluate=_exact),
    )


@functools.lru_cache(maxsize=None)
def build_lorenz1990() -> QuadraticOdeSystem:
    """Three-variable Lorenz 1990 model.

        dX/dt = 2 - X/4 - Y^2 - Z^2
        dY/dt = 1 - Y + XY - 4XZ
        dZ/dt =    - Z + 4XY + XZ

    Chaotic at these coefficients; no closed-form solution.  The
    registered initial condition is (2, 1, 0).
    """
    c = [2.0, 1.0, 0.0]
    L = [
        [-0.25, 0.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, -1.0],
    ]
    Q = np.zeros((3, 3, 3))
    Q[0, 1, 1] = -1.0  # -Y^2
    Q[0, 2, 2] = -1.0  # -Z^2
    Q[1, 0, 1] = 1.0   # +XY
    Q[1, 0, 2] = -4.0  # -4XZ
    Q[2, 0, 1] = 4.0   # +4XY
    Q[2, 0, 2] = 1.0   # +XZ
    # make_system symmetrizes the natural one-sided coefficients above
    return make_system(
        name="lorenz1990",
        c=c,
        L=L,
        Q=Q,
        default_initial_state=[2.0, 1.0, 0.0],
    )


_MODEL_BUILDERS: dict[str, Callable[[], QuadraticOdeSystem]] = {
    "linear-decay": build_linear_decay,
    "lorenz1990": build_lorenz1990,
}


def model_names() -> list[str]:
    return sorted(_MODEL_BUILDERS)


def get_model(name: str) -> QuadraticOdeSystem:
    """Look up a registered model by its CLI/config name."""
    try:
        builder = _MODEL_BUILDERS[name]
    except KeyError:
        known = ", ".join(model_names())
        raise UsageError(f"unknown model {name!r}; known models: {known}") from None
    return builder()


def rhs(system: QuadraticOdeSystem, u) -> np.ndarray:
    """Evaluate c + L.u + Q(u, u) componentwise.

    Pure and bit-deterministic: the accumulation order is fixed, so
    repeated calls with the same input give bitwise-identical output.
    """
    u = as_state(u, system.n)
    out = np.empty(system.n, dtype=np.float64)
    rhs_into(system.c, system.L, system.Q, u, out)
    return out


def jacobian(system: QuadraticOdeSystem, u) -> np.ndarray:
    """J[i, j] = L[i, j] + 2 sum_k Q[i, j, k] u[k] (Q is symmetrized)."""
    u = as_state(u, system.n)
    return system.L + 2.0 * (system.Q @ u)


def exact_solution(system: QuadraticOdeSystem, t: float, u0=None) -> np.ndarray:
    """Evaluate the attached closed form at time t >= 0.

    ``u0`` defaults to the model's registered initial condition.
    """
    if system.exact is None:
        raise NoExactSolutionError(f"model {system.name!r} has no exact solution")
    if not (isinstance(t, (int, float)) and math.isfinite(t)) or t < 0:
        raise UsageError(f"time must be finite and >= 0, got {t!r}")
    u0 = system.default_initial_state if u0 is None else as_state(u0, system.n)
    return system.exact.evaluate(float(t), u0)
