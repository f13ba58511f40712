import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from locscale_w1.errors import ConvergenceError
from locscale_w1.quadrature import integrate, integrate_quantile


def test_polynomial_exact():
    res = integrate(lambda x: 3 * x**2, [0.0, 2.0])
    assert abs(res.value - 8.0) < 1e-14
    assert res.intervals == 1


def test_kink_at_breakpoint_is_cheap():
    res = integrate(lambda x: np.abs(x - 0.3), [0.0, 0.3, 1.0])
    assert abs(res.value - (0.045 + 0.245)) < 1e-15
    assert res.intervals == 2


def test_endpoint_singularity():
    res = integrate(lambda x: 1.0 / np.sqrt(x), [0.0, 1.0], abs_tol=1e-10)
    assert abs(res.value - 2.0) < 1e-9


def test_oscillatory():
    res = integrate(np.cos, [0.0, 50.0], abs_tol=1e-12)
    assert abs(res.value - math.sin(50.0)) < 1e-11


def test_nonconvergence_reports_estimate():
    with pytest.raises(ConvergenceError) as info:
        integrate(lambda x: np.sign(np.sin(1.0 / np.maximum(x, 1e-300))), [0.0, 1.0],
                  abs_tol=1e-14, max_intervals=50)
    assert math.isfinite(info.value.estimate)
    assert info.value.error > 0


def test_degenerate_breakpoints():
    assert integrate(np.exp, [1.0]).value == 0.0


@given(st.floats(min_value=0.01, max_value=0.99))
@settings(max_examples=50)
def test_quantile_integral_of_normal_abs(c):
    # integral over q of |q - c| is (c^2 + (1-c)^2)/2
    def h(v, upper):
        q = 1.0 - v if upper else v
        return np.abs(q - c)
    res = integrate_quantile(h, (c,), abs_tol=1e-13)
    assert abs(res.value - 0.5 * (c * c + (1 - c) ** 2)) < 1e-12


def test_quantile_tail_singularity():
    # h = q^(-1/3) integrates to 1.5
    res = integrate_quantile(lambda v, upper: (1.0 - v if upper else v) ** (-1.0 / 3.0), power=3)
    assert abs(res.value - 1.5) < 1e-9
