"""Model registry, tensor right-hand side, Jacobian, exact solutions."""

import math

import mpmath
import numpy as np
import pytest

from odeverify.errors import NoExactSolutionError, UsageError
from odeverify.systems import (
    as_state,
    build_linear_decay,
    build_lorenz1990,
    exact_solution,
    get_model,
    jacobian,
    make_system,
    model_names,
    rhs,
)


def lorenz_rhs_by_hand(u):
    """Direct transcription of the three equations, written independently
    of the tensor encoding.  Returns (f, scale): scale is the sum of the
    absolute term magnitudes per component, the natural conditioning
    scale for comparing the two encodings."""
    x, y, z = u
    f = np.array([
        -y * y - z * z - 0.25 * (x - 8.0),
        x * y - 4.0 * x * z - y + 1.0,
        4.0 * x * y + x * z - z,
    ])
    scale = np.array([
        y * y + z * z + 0.25 * (abs(x) + 8.0),
        abs(x * y) + 4.0 * abs(x * z) + abs(y) + 1.0,
        4.0 * abs(x * y) + abs(x * z) + abs(z),
    ])
    return f, scale


class TestRegistry:
    def test_model_names(self):
        assert model_names() == ["linear-decay", "lorenz1990"]

    def test_unknown_model(self):
        with pytest.raises(UsageError, match="unknown model"):
            get_model("lorenz1963")

    def test_default_initial_states(self, decay, lorenz):
        assert decay.default_initial_state.tolist() == [1.0]
        assert lorenz.default_initial_state.tolist() == [2.0, 1.0, 0.0]

    def test_coefficients_are_read_only(self, lorenz):
        with pytest.raises(ValueError):
            lorenz.Q[0, 0, 0] = 1.0


class TestRhs:
    def test_linear_decay_values(self, decay):
        assert rhs(decay, [1.0]).tolist() == [-10.0]
        assert rhs(decay, [0.0]).tolist() == [0.0]
        assert rhs(decay, [2.0]).tolist() == [-20.0]

    def test_lorenz_reference_points(self, lorenz):
        assert rhs(lorenz, [2.0, 1.0, 0.0]).tolist() == [0.5, 2.0, 8.0]
        assert rhs(lorenz, [8.0, 0.0, 0.0]).tolist() == [0.0, 1.0, 0.0]

    def test_repeat_call_is_bitwise_identical(self, lorenz):
        u = [1.234, -5.678, 9.1011]
        first = rhs(lorenz, u)
        for _ in range(5):
            assert np.array_equal(rhs(lorenz, u), first)

    def test_dimension_mismatch(self, lorenz):
        with pytest.raises(UsageError, match="dimension"):
            rhs(lorenz, [1.0, 2.0])

    def test_non_finite_state_rejected(self, lorenz):
        with pytest.raises(UsageError, match="NaN or Inf"):
            rhs(lorenz, [np.nan, 0.0, 0.0])
        with pytest.raises(UsageError, match="NaN or Inf"):
            rhs(lorenz, [np.inf, 0.0, 0.0])

    def test_two_encodings_agree(self, lorenz, rng):
        # tensor form vs hand transcription at 1000 random states
        for _ in range(1000):
            u = rng.uniform(-10.0, 10.0, size=3)
            tensor = rhs(lorenz, u)
            hand, scale = lorenz_rhs_by_hand(u)
            assert np.all(np.abs(tensor - hand) <= 1e-14 * np.maximum(1.0, scale))


class TestQSymmetry:
    def test_stored_tensor_is_symmetric(self, lorenz):
        assert np.array_equal(lorenz.Q, lorenz.Q.transpose(0, 2, 1))
        assert lorenz.Q[0, 1, 2] == lorenz.Q[0, 2, 1]

    def test_asymmetric_q_gives_same_rhs(self, rng):
        # a deliberately one-sided Q must produce the same quadratic form
        # as its symmetrized version
        q_raw = rng.standard_normal((3, 3, 3))
        sys_raw = make_system("raw", np.zeros(3), np.zeros((3, 3)), q_raw, [1.0, 1.0, 1.0])
        q_sym = 0.5 * (q_raw + q_raw.transpose(0, 2, 1))
        sys_sym = make_system("sym", np.zeros(3), np.zeros((3, 3)), q_sym, [1.0, 1.0, 1.0])
        for _ in range(50):
            u = rng.uniform(-5.0, 5.0, size=3)
            a = rhs(sys_raw, u)
            b = rhs(sys_sym, u)
            assert np.allclose(a, b, rtol=1e-13, atol=1e-13)
            # and both match the mathematical quadratic form
            expected = np.einsum("ijk,j,k->i", q_raw, u, u)
            assert np.allclose(a, expected, rtol=1e-12, atol=1e-12)


class TestJacobian:
    def test_linear_decay_constant(self, decay):
        assert jacobian(decay, [3.7]).tolist() == [[-10.0]]

    def test_lorenz_at_origin(self, lorenz):
        J = jacobian(lorenz, [0.0, 0.0, 0.0])
        assert np.array_equal(J, np.diag([-0.25, -1.0, -1.0]))

    def test_matches_central_differences(self, lorenz, decay, rng):
        h = 1e-6
        for system in (lorenz, decay):
            for _ in range(100):
                u = rng.uniform(-10.0, 10.0, size=system.n)
                J = jacobian(system, u)
                fd = np.empty_like(J)
                for j in range(system.n):
                    e = np.zeros(system.n)
                    e[j] = h
                    fd[:, j] = (rhs(system, u + e) - rhs(system, u - e)) / (2.0 * h)
                assert np.all(np.abs(J - fd) <= 1e-5 * np.maximum(1.0, np.abs(J)))


class TestExactSolution:
    def test_initial_condition(self, decay):
        assert exact_solution(decay, 0.0).tolist() == [1.0]

    @pytest.mark.parametrize("t", [0.05, 0.1, 0.3, 1.0])
    def test_high_precision_exponential(self, decay, t):
        # oracle: 50-digit evaluation of exp(-10 t)
        expected = float(mpmath.exp(mpmath.mpf(-10) * mpmath.mpf(repr(t))))
        got = exact_solution(decay, t)[0]
        assert math.isclose(got, expected, rel_tol=1e-15)

    def test_scaled_by_initial_value(self, decay):
        got = exact_solution(decay, 0.1, u0=[2.0])[0]
        assert math.isclose(got, 2.0 * math.exp(-1.0), rel_tol=1e-15)

    def test_lorenz_has_no_exact_solution(self, lorenz):
        with pytest.raises(NoExactSolutionError):
            exact_solution(lorenz, 1.0)

    def test_negative_time_rejected(self, decay):
        with pytest.raises(UsageError):
            exact_solution(decay, -0.5)


class TestValidation:
    def test_as_state_shape(self):
        with pytest.raises(UsageError):
            as_state([[1.0, 2.0]])

    def test_make_system_shape_mismatch(self):
        with pytest.raises(UsageError, match="shapes"):
            make_system("bad", [0.0, 0.0], np.zeros((3, 3)), np.zeros((3, 3, 3)), [0.0, 0.0])

    def test_make_system_non_finite(self):
        with pytest.raises(UsageError, match="finite"):
            make_system("bad", [np.inf], np.zeros((1, 1)), np.zeros((1, 1, 1)), [0.0])
