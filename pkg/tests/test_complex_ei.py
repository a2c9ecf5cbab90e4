import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fgreen import DomainError, OrderError
from fgreen.complex_ei import (asymptotic_remainder_bound, e1, e1_estimate, e1_scaled, ei,
                               ei_asymptotic_partial_sum, optimal_truncation)
from fgreen.oracle import e1_quadrature


def mp_e1(z):
    return complex(mpmath.e1(mpmath.mpc(z.real, z.imag)))


def test_e1_real_values():
    assert e1(1.0) == pytest.approx(0.21938393439552062, rel=1e-14)
    assert e1(0.1) == pytest.approx(1.8229239584193906, rel=1e-14)
    assert e1(50.0) == pytest.approx(3.7832640295504590e-24, rel=1e-12)


def test_e1_imaginary_axis():
    # E1(i) = -Ci(1) + i(Si(1) - pi/2)
    want = complex(-0.33740392290096816, 0.94608307036718301 - math.pi / 2)
    assert abs(e1(1j) - want) < 1e-14


def test_ei_positive_axis_is_principal_value():
    assert ei(1.0).real == pytest.approx(1.8951178163559368, rel=1e-14)
    assert ei(1.0).imag == 0
    assert ei(30.0).real == pytest.approx(float(mpmath.ei(30)), rel=1e-13)


def test_ei_off_axis_is_minus_e1():
    z = 2 - 3j
    assert ei(z) == -e1(-z)


@pytest.mark.parametrize("z", [0, -1.0, -5.0 + 0j, -0.3 - 0.0j])
def test_e1_domain(z):
    with pytest.raises(DomainError):
        e1(z)


def test_e1_vectorised_matches_scalar():
    z = np.array([0.3, 2 + 1j, -4 + 0.5j, 40j, 100 - 3j])
    v = e1(z)
    for zi, vi in zip(z, v):
        assert vi == e1(complex(zi))


def test_e1_estimate_is_honest():
    for z in [0.5, 3 + 4j, -8 + 1j, 25j, 120.0]:
        est = e1_estimate(z)
        assert abs(est.value - mp_e1(complex(z))) <= max(est.error, 1e-15 * abs(est.value))


def test_e1_matches_independent_quadrature():
    for z in [1.0, 0.2 + 3j, 7 - 2j, -2 + 6j]:
        ref, _ = e1_quadrature(z)
        assert abs(e1(z) - ref) <= 1e-12 * abs(ref)


@settings(max_examples=200, deadline=None)
@given(st.floats(-3, 2.5), st.floats(-math.pi + 1e-3, math.pi - 1e-3))
def test_e1_against_mpmath(log_r, arg):
    z = 10 ** log_r * cmath.exp(1j * arg)
    ref = mp_e1(z)
    assert abs(e1(z) - ref) <= 1e-12 * abs(ref)


@settings(max_examples=100, deadline=None)
@given(st.floats(-2, 2), st.floats(-math.pi + 1e-3, math.pi - 1e-3))
def test_e1_conjugate_symmetry(log_r, arg):
    z = 10 ** log_r * cmath.exp(1j * arg)
    assert abs(e1(z.conjugate()) - e1(z).conjugate()) <= 1e-14 * abs(e1(z))


@settings(max_examples=100, deadline=None)
@given(st.floats(-1, 2), st.floats(-math.pi + 1e-3, math.pi - 1e-3), st.integers(-2, 2))
def test_sheet_continuation(log_r, arg, k):
    # E1 on the sheet arg z = Arg z + 2 pi k differs by -2 pi i k
    z = 10 ** log_r * cmath.exp(1j * arg)
    principal = e1_scaled(z)
    cont = e1_scaled(z, arg + 2 * math.pi * k)
    want = principal - 2j * math.pi * k * cmath.exp(z)
    assert abs(cont - want) <= 1e-12 * max(abs(want), abs(principal))


def test_cut_sides_via_sheet_argument():
    x = 2.0
    upper = e1_scaled(-x + 0j, math.pi) * math.exp(x)
    lower = e1_scaled(-x + 0j, -math.pi) * math.exp(x)
    assert abs(upper - lower + 2j * math.pi) < 1e-13
    assert abs(upper.real + float(mpmath.ei(x))) < 1e-13


def test_e1_derivative():
    z, h = 1.5 + 2j, 1e-5
    fd = (e1(z + h) - e1(z - h)) / (2 * h)
    assert abs(fd + cmath.exp(-z) / z) < 1e-9


def test_asymptotic_partial_sum_single_term():
    z = 30.0
    assert ei_asymptotic_partial_sum(z, 0) == pytest.approx(1 / 30)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 10])
@pytest.mark.parametrize("z", [40.0, 30 + 25j, -10 + 60j, 50j])
def test_asymptotic_remainder_bound(n, z):
    if abs(z) < 2 * (n + 1):
        pytest.skip("bound only claimed for |z| >= 2(n+1)")
    exact = cmath.exp(-z) * ei(z)
    err = abs(ei_asymptotic_partial_sum(z, n) - exact)
    assert err <= asymptotic_remainder_bound(z, n)


def test_asymptotic_errors():
    with pytest.raises(OrderError):
        ei_asymptotic_partial_sum(10.0, -1)
    with pytest.raises(OrderError):
        ei_asymptotic_partial_sum(10.0, 1.5)
    with pytest.raises(OrderError):
        ei_asymptotic_partial_sum(10.0, 25)
    with pytest.raises(DomainError):
        ei_asymptotic_partial_sum(10.0 + 0.01j, 2)
    with pytest.raises(DomainError):
        ei_asymptotic_partial_sum(0, 2)


def test_optimal_truncation():
    assert optimal_truncation(10.5) == 9
    assert optimal_truncation(0.5) == 0
    z = 12.0
    n_opt = optimal_truncation(z)
    exact = cmath.exp(-z) * ei(z)
    errs = [abs(ei_asymptotic_partial_sum(z, n) - exact) for n in range(0, 19)]
    assert errs[n_opt] <= 2 * min(errs)


def test_asymptotic_sum_arithmetic():
    assert ei_asymptotic_partial_sum(10.0, 3) == pytest.approx(0.1126, rel=1e-14)


def test_asymptotic_remainder_slope():
    zs = np.array([20.0, 40.0, 80.0])
    err = [abs(cmath.exp(-z) * ei(z) - ei_asymptotic_partial_sum(z, 2)) for z in zs]
    slope = np.polyfit(np.log(zs), np.log(err), 1)[0]
    assert slope == pytest.approx(-4, abs=0.2)


@settings(max_examples=20, deadline=None)
@given(st.floats(-1, 1.5), st.floats(-math.pi + 0.2, math.pi - 0.2))
def test_derivative_richardson(log_r, arg):
    z = 10 ** log_r * cmath.exp(1j * arg)
    h = 1e-3 * abs(z)
    d1 = (e1(z + h) - e1(z - h)) / (2 * h)
    d2 = (e1(z + h / 2) - e1(z - h / 2)) / h
    rich = (4 * d2 - d1) / 3
    want = -cmath.exp(-z) / z
    assert abs(rich - want) <= 1e-8 * abs(want)
