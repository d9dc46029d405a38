"""Amplification factors and local Jacobian stability classification.

For the scalar linear scheme u^{n+1} = (1 + lambda dt) u^n the per-step
amplification factor g = 1 + lambda dt decides the regime.  Along a
computed trajectory of a nonlinear system, the sign of the largest real
part among the local Jacobian's eigenvalues classifies each sample as
locally stable (errors contract), locally unstable (errors amplify), or
marginal.  Eigenvalues are extracted by closed form (n <= 3), not by an
iterative solver; tests guard the branch logic against a brute-force
oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedDimensionError, UsageError
from .integrators import Trajectory
from .systems import QuadraticOdeSystem, jacobian

__all__ = [
    "AmplificationReport",
    "LocalClassification",
    "MARGINAL_TOL",
    "classify_along",
    "max_real_eigenvalue",
    "scalar_amplification",
]

# Band around zero treated as marginal, to avoid sign-flip noise when an
# eigenvalue's real part crosses zero.
MARGINAL_TOL = 1e-10

REGIME_MONOTONE = "monotone-stable"
REGIME_OSCILLATORY = "oscillatory-stable"
REGIME_MARGINAL = "marginal"
REGIME_UNSTABLE = "unstable"

CLASS_STABLE = "locally-stable"
CLASS_UNSTABLE = "locally-unstable"
CLASS_MARGINAL = "marginal"


@dataclass(frozen=True)
class AmplificationReport:
    """Per-step factor g = 1 + lambda * dt and its stability regime."""

    lam: float
    dt: float
    factor: float
    regime: str


def scalar_amplification(lam: float, dt: float) -> AmplificationReport:
    """Classify the explicit scheme for du/dt = lam * u at step dt.

    Regimes partition the factor g = 1 + lam * dt:
    monotone-stable for 0 <= g < 1, oscillatory-stable for -1 < g < 0,
    marginal for |g| = 1, unstable for |g| > 1.
    """
    lam = float(lam)
    dt = float(dt)
    if not math.isfinite(lam):
        raise UsageError(f"lambda must be finite, got {lam!r}")
    if not math.isfinite(dt) or dt <= 0.0:
        raise UsageError(f"dt must be finite and > 0, got {dt!r}")
    g = 1.0 + lam * dt
    if abs(g) == 1.0:
        regime = REGIME_MARGINAL
    elif abs(g) > 1.0:
        regime = REGIME_UNSTABLE
    elif g >= 0.0:
        regime = REGIME_MONOTONE
    else:
        regime = REGIME_OSCILLATORY
    return AmplificationReport(lam=lam, dt=dt, factor=g, regime=regime)


def _max_real_root_cubic(b: float, c: float, d: float) -> float:
    """Largest real part among the roots of x^3 + b x^2 + c x + d.

    Trigonometric form when all roots are real, Cardano otherwise; the
    discriminant chooses the branch.
    """
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d
    disc = -4.0 * p * p * p - 27.0 * q * q
    if disc >= 0.0:
        # three real roots; p <= 0 up to rounding
        if p >= 0.0:
            # p and q are both ~0: (near-)triple root
            return -shift
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg)
        t_max = m * math.cos(phi / 3.0)  # cos is maximal at k = 0
        return t_max - shift
    # one real root t1 and a conjugate pair with real part -t1/2
    rad = math.sqrt(q * q / 4.0 + p * p * p / 27.0)
    if q >= 0.0:
        w = -q / 2.0 - rad
    else:
        w = -q / 2.0 + rad
    alpha = math.copysign(abs(w) ** (1.0 / 3.0), w)
    beta = 0.0 if alpha == 0.0 else -p / (3.0 * alpha)
    t1 = alpha + beta
    return max(t1, -t1 / 2.0) - shift


def max_real_eigenvalue(J) -> float:
    """Maximum real part over the eigenvalues of a 1x1, 2x2 or 3x3 matrix."""
    J = np.asarray(J, dtype=np.float64)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {J.shape}")
    if not np.all(np.isfinite(J)):
        raise UsageError("matrix contains NaN or Inf entries")
    n = J.shape[0]
    if n == 1:
        return float(J[0, 0])
    if n == 2:
        tr = J[0, 0] + J[1, 1]
        det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        disc = tr * tr / 4.0 - det
        if disc >= 0.0:
            return float(tr / 2.0 + math.sqrt(disc))
        return float(tr / 2.0)
    if n == 3:
        tr = J[0, 0] + J[1, 1] + J[2, 2]
        minors = (
            J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1]
            + J[0, 0] * J[2, 2] - J[0, 2] * J[2, 0]
            + J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        )
        det = (
            J[0, 0] * (J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1])
            - J[0, 1] * (J[1, 0] * J[2, 2] - J[1, 2] * J[2, 0])
            + J[0, 2] * (J[1, 0] * J[2, 1] - J[1, 1] * J[2, 0])
        )
        # characteristic polynomial: x^3 - tr x^2 + minors x - det
        return float(_max_real_root_cubic(-tr, minors, -det))
    raise UnsupportedDimensionError(
        f"closed-form eigenvalues support n <= 3, got n = {n}"
    )


@dataclass(frozen=True)
class LocalClassification:
    """Stability class of one trajectory sample."""

    t: float
    max_real_part: float
    label: str


def classify_value(max_real_part: float, tol: float = MARGINAL_TOL) -> str:
    if max_real_part > tol:
        return CLASS_UNSTABLE
    if max_real_part < -tol:
        return CLASS_STABLE
    return CLASS_MARGINAL


def classify_along(
    system: QuadraticOdeSystem, trajectory: Trajectory
) -> list[LocalClassification]:
    """Classify every sample of ``trajectory`` by its local Jacobian.

    The trajectory must have been produced from ``system``; output order
    follows the sample index.
    """
    if trajectory.model != system.name:
        raise UsageError(
            f"trajectory is for model {trajectory.model!r}, not {system.name!r}"
        )
    out = []
    for t, state in zip(trajectory.times, trajectory.states):
        mre = max_real_eigenvalue(jacobian(system, state))
        out.append(LocalClassification(t=float(t), max_real_part=mre, label=classify_value(mre)))
    return out
