"""Exponential integral and second-projection kernel tests.

The Ei oracle is the convergent series gamma + ln|x| + sum x^k/(k k!),
summed to machine precision; the kernel oracle is 2-D quadrature of the
conditional expectation of the four-argument kernel.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from expgof.special import EULER_GAMMA, ei_neg_scaled, ei_scaled, expi, h2_tilde
from expgof.statistic import kernel_h


def ei_series(x):
    """Convergent power series for Ei, usable for moderate |x|."""
    total = EULER_GAMMA + math.log(abs(x))
    term = 1.0
    for k in range(1, 200):
        term *= x / k
        contrib = term / k
        total += contrib
        if abs(contrib) < 1e-18 * max(1.0, abs(total)):
            break
    return total


def test_expi_series_oracle_unit():
    assert expi(1.0) == pytest.approx(1.895117816355937, rel=1e-12)
    assert expi(1.0) == pytest.approx(ei_series(1.0), rel=1e-13)


def test_expi_series_oracle_negative():
    assert expi(-1.0) == pytest.approx(-0.219383934395520, rel=1e-12)
    assert expi(-1.0) == pytest.approx(ei_series(-1.0), rel=1e-13)


@pytest.mark.parametrize("x", [1e-6, 1e-3, 0.5, 2.0, 5.0, -1e-6, -0.5, -3.0, -10.0])
def test_expi_matches_series(x):
    assert expi(x) == pytest.approx(ei_series(x), rel=1e-12)


def test_expi_near_zero_log_behavior():
    x = 1e-8
    assert expi(x) == pytest.approx(EULER_GAMMA + math.log(x), abs=2e-8)


def test_expi_zero_raises():
    with pytest.raises(ValueError):
        expi(0.0)


def test_expi_overflow_signaled():
    with pytest.raises(OverflowError):
        expi(800.0)


def test_expi_large_argument_domain():
    # relative accuracy holds through the top of the supported range
    x = 700.0
    # asymptotic reference e^x/x * (1 + 1/x + 2/x^2 + ...)
    s = sum(math.factorial(k) / x**k for k in range(8))
    assert expi(x) == pytest.approx(math.exp(x) / x * s, rel=1e-10)


@pytest.mark.parametrize("x", [0.5, -0.5, 1.0, -1.0, 2.0, -2.0])
def test_expi_derivative_is_exp_over_x(x):
    h = 1e-5
    deriv = (expi(x + h) - expi(x - h)) / (2 * h)
    assert deriv == pytest.approx(math.exp(x) / x, rel=1e-6)


def test_scaled_ei_consistent_with_expi():
    for s in (0.3, 1.0, 50.0, 600.0):
        assert ei_scaled(s) == pytest.approx(math.exp(-s) * expi(s), rel=1e-13)
        assert ei_neg_scaled(s) == pytest.approx(math.exp(s) * expi(-s), rel=1e-13)


def test_scaled_ei_asymptotic_branch():
    import mpmath

    for s in (800.0, 2000.0):
        ref = float(mpmath.exp(-s) * mpmath.ei(s))
        assert ei_scaled(s) == pytest.approx(ref, rel=1e-12)
        ref_neg = float(mpmath.exp(s) * mpmath.ei(-s))
        assert ei_neg_scaled(s) == pytest.approx(ref_neg, rel=1e-12)


# ---------------------------------------------------------------------------
# second projection


def test_h2_at_origin_closed_form():
    expected = 1.0 / 3.0 + 0.5 * math.e * expi(-1.0)
    assert h2_tilde(0.0, 0.0, 1.0) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(0.0351596, abs=5e-7)


def test_h2_symmetry_example():
    assert h2_tilde(1.0, 2.0, 1.0) == h2_tilde(2.0, 1.0, 1.0)


@settings(max_examples=200, deadline=None)
@given(
    x=st.floats(0.0, 30.0, allow_nan=False),
    y=st.floats(0.0, 30.0, allow_nan=False),
    a=st.floats(0.05, 20.0, allow_nan=False),
)
def test_h2_symmetry_property(x, y, a):
    assert h2_tilde(x, y, a) == h2_tilde(y, x, a)


def conditional_kernel_expectation(x, y, a):
    """Average of the kernel over the placements of (x, y) among the four
    arguments, integrating the remaining two over Exp(1)^2."""

    def integrand(w, z):
        s = (
            kernel_h(x, y, z, w, a)
            + kernel_h(y, x, z, w, a)
            + kernel_h(x, z, y, w, a)
            + kernel_h(x, z, w, y, a)
            + kernel_h(z, x, y, w, a)
            + kernel_h(z, x, w, y, a)
        )
        return math.exp(-z - w) * s / 6.0

    val, _ = integrate.dblquad(integrand, 0, 50, 0, 50, epsabs=1e-9, epsrel=1e-9)
    return val


@pytest.mark.parametrize("x,y,a", [(1.0, 1.0, 1.0), (0.5, 2.0, 0.5), (0.0, 1.0, 2.0)])
def test_h2_matches_kernel_conditional_expectation(x, y, a):
    assert h2_tilde(x, y, a) == pytest.approx(
        conditional_kernel_expectation(x, y, a), abs=1e-6
    )


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("x", [0.0, 0.5, 1.0, 2.0, 5.0])
def test_h2_first_projection_vanishes(x, a):
    val, _ = integrate.quad(
        lambda y: h2_tilde(x, y, a) * math.exp(-y), 0, 120, limit=300
    )
    assert abs(val) <= 1e-6


@pytest.mark.parametrize("a", [0.5, 1.0, 5.0])
def test_h2_double_degeneracy(a):
    val, _ = integrate.dblquad(
        lambda y, x: h2_tilde(x, y, a) * math.exp(-x - y),
        0, 60, 0, 60, epsabs=1e-8,
    )
    assert abs(val) <= 1e-6


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 5.0])
def test_h2_non_constant(a):
    grid = np.linspace(0.0, 5.0, 10)
    vals = h2_tilde(grid[:, None], grid[None, :], a)
    assert vals.max() - vals.min() > 1e-4


def test_h2_large_arguments_finite():
    assert np.isfinite(h2_tilde(600.0, 500.0, 5.0))
    assert np.isfinite(h2_tilde(0.0, 1500.0, 1.0))


def test_h2_domain_errors():
    with pytest.raises(ValueError):
        h2_tilde(-0.1, 0.0, 1.0)
    with pytest.raises(ValueError):
        h2_tilde(0.0, 0.0, 0.0)
