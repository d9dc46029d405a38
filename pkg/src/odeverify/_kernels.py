"""Compiled inner loops for right-hand-side evaluation and time stepping.

Every floating-point reduction in the package funnels through these
kernels, which accumulate strictly in index-ascending order.  That makes
repeat runs bitwise identical on one machine and keeps the order-1
Taylor step exactly equal to the Euler step, term for term.

The kernels are JIT-compiled with numba when it is importable; otherwise
they run as plain Python (same operation order, same IEEE-754 results,
much slower).  ``NUMBA_DISABLE_JIT=1`` gives the same fallback.
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


# Magnitude cutoff below binary64 max: divergent runs stop cleanly
# before producing Inf, so every stored sample is finite.
OVERFLOW_LIMIT = 1e300

METHOD_EULER = 0
METHOD_RK4 = 1
METHOD_TAYLOR = 2


@njit(cache=True)
def rhs_into(c, L, Q, u, out):
    """out <- c + L.u + Q(u, u), accumulated in index-ascending order."""
    n = c.shape[0]
    for i in range(n):
        acc = c[i]
        for j in range(n):
            acc += L[i, j] * u[j]
        for j in range(n):
            for k in range(n):
                acc += Q[i, j, k] * u[j] * u[k]
        out[i] = acc


@njit(cache=True)
def euler_into(c, L, Q, u, dt, work, out):
    rhs_into(c, L, Q, u, work)
    n = u.shape[0]
    for i in range(n):
        out[i] = u[i] + dt * work[i]


@njit(cache=True)
def taylor_coeffs_into(c, L, Q, p, coeffs):
    """Fill rows 1..p of ``coeffs`` given the state in row 0.

    Row k holds the k-th Taylor coefficient of the local solution, via
    the quadratic-convolution recurrence

        (k+1) u_{k+1} = c[k=0] + L.u_k + sum_{m=0..k} Q(u_m, u_{k-m}).

    The k = 0 stage performs exactly the same operations as `rhs_into`,
    so ``coeffs[1]`` is bitwise equal to the right-hand side.
    """
    n = c.shape[0]
    for k in range(p):
        for i in range(n):
            if k == 0:
                acc = c[i]
            else:
                acc = 0.0
            for j in range(n):
                acc += L[i, j] * coeffs[k, j]
            for m in range(k + 1):
                for j in range(n):
                    for l in range(n):
                        acc += Q[i, j, l] * coeffs[m, j] * coeffs[k - m, l]
            coeffs[k + 1, i] = acc / (k + 1.0)


@njit(cache=True)
def taylor_eval_into(coeffs, p, dt, out):
    """Horner evaluation of the degree-p Taylor polynomial at dt."""
    n = coeffs.shape[1]
    for i in range(n):
        acc = coeffs[p, i]
        for k in range(p - 1, -1, -1):
            acc = coeffs[k, i] + dt * acc
        out[i] = acc


@njit(cache=True)
def rk4_into(c, L, Q, u, dt, k1, k2, k3, k4, tmp, out):
    """Classical 4-stage Runge-Kutta update with fixed stage order."""
    n = u.shape[0]
    rhs_into(c, L, Q, u, k1)
    half = 0.5 * dt
    for i in range(n):
        tmp[i] = u[i] + half * k1[i]
    rhs_into(c, L, Q, tmp, k2)
    for i in range(n):
        tmp[i] = u[i] + half * k2[i]
    rhs_into(c, L, Q, tmp, k3)
    for i in range(n):
        tmp[i] = u[i] + dt * k3[i]
    rhs_into(c, L, Q, tmp, k4)
    sixth = dt / 6.0
    for i in range(n):
        out[i] = u[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


@njit(cache=True)
def integrate_loop(c, L, Q, u0, dt, method_id, p, n_blocks, m_sub, limit, states):
    """Step n_blocks * m_sub times, storing the state every m_sub steps.

    ``states`` must have shape (n_blocks + 1, n); row 0 receives u0.
    Returns (n_stored, overflowed).  On overflow (any component non-finite
    or beyond ``limit``) the loop stops without storing the bad state.
    """
    n = u0.shape[0]
    u = u0.copy()
    unew = np.empty(n)
    coeffs = np.empty((p + 1, n))
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)

    for i in range(n):
        states[0, i] = u[i]
    stored = 1
    for _b in range(n_blocks):
        for _s in range(m_sub):
            if method_id == METHOD_EULER:
                euler_into(c, L, Q, u, dt, k1, unew)
            elif method_id == METHOD_RK4:
                rk4_into(c, L, Q, u, dt, k1, k2, k3, k4, tmp, unew)
            else:
                for i in range(n):
                    coeffs[0, i] = u[i]
                taylor_coeffs_into(c, L, Q, p, coeffs)
                taylor_eval_into(coeffs, p, dt, unew)
            ok = True
            for i in range(n):
                v = unew[i]
                if not np.isfinite(v) or abs(v) > limit:
                    ok = False
            if not ok:
                return stored, True
            for i in range(n):
                u[i] = unew[i]
        for i in range(n):
            states[stored, i] = u[i]
        stored += 1
    return stored, False
