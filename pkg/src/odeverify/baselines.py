"""Pinned desk-scale baselines, computed once by this build and committed.

Every run of the integrator is bit-deterministic on one machine, so on
the build platform these values reproduce exactly; across platforms they
are expected to agree loosely (the difference series is seeded by
float64 rounding noise, which is ABI-sensitive).  Set
ODEVERIFY_LOOSE_BASELINE=1 to compare within 20 percent instead of
bit-exactly.

Build platform: Linux x86-64 (glibc), CPython 3.10, numpy 2.2, numba 0.66.

Recipe behind the numbers: lorenz1990 from the registered initial state
(2, 1, 0), Taylor-5 runs at dt = 1e-4 and 1e-5 (plus RK4 at 1e-4 for the
cross-method pair), t_end = 200, output interval 0.01, difference norm
component:0, divergence threshold 1e-2, growth-fit window [1e-12, 1e-2].
The horizon is 200, not the fig2 default 50, because the measured
divergence onset sits near t = 133: at these step sizes the pairwise
difference is seeded at the 1e-13 level and grows at the system's
Lyapunov rate (about 0.15-0.2 per time unit), so no 1e-2 crossing can
occur within t = 50.
"""

# first time |dX| >= 1e-2 between Taylor-5 dt=1e-4 and dt=1e-5
DESK_ONSET = 133.07

# first time the same difference reaches the 1e-4 visibility floor
DESK_FIRST_VISIBLE = 105.75

# least-squares exponent of ln|dX| vs t over the [1e-12, 1e-2) window
DESK_GROWTH_SLOPE = 0.18046102445725798
DESK_GROWTH_T_LO = 25.330000000000002
DESK_GROWTH_T_HI = 133.06
DESK_GROWTH_N_POINTS = 10774

# spot value of the desk difference at t = 50 (the fig2 default horizon)
DESK_DIFF_AT_T50 = 1.9979772281075725e-09

# Taylor-5 vs RK4 at dt = 1e-4: first time |dX| >= 1e-6; the two methods
# agree within 1e-6 strictly below this time
CROSS_METHOD_ONSET_1E6 = 69.65

DESK_T_END = 200.0
DESK_OUTPUT_INTERVAL = 0.01
DESK_THRESHOLD = 1e-2
