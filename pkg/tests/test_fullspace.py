import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, settings, strategies as st

from fgreen import CausticError, DomainError, FieldPoint, UnsupportedOrderError, make_direction
from fgreen.fullspace import (RadialKernelParams, expansion_coefficient, first_term,
                              g_zeta_fullspace, radial_integral_closed, radial_integral_oracle,
                              radial_integral_paper, radial_integral_series, series_terms)
from fgreen.oracle import fullspace_cylindrical

CALDERON = np.array([1, 1j, 0]) / math.sqrt(2)


def test_radial_closed_example():
    # A = 20, B = -i:  I = int_0^inf r e^{ir}/(r + 20) dr
    p = RadialKernelParams(1.0, 10.0, 1.0, 1.0)
    v, _ = radial_integral_oracle(p)
    assert abs(radial_integral_closed(p) - v) < 1e-11 * abs(v)


def test_radial_errors():
    with pytest.raises(CausticError):
        RadialKernelParams(1.0, 10.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        RadialKernelParams(-1.0, 10.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        radial_integral_closed(RadialKernelParams(1.0, 10.0, -1.0 + 1e-9j, 1.0))


alphas = st.builds(lambda r, a: r * complex(math.cos(a), math.sin(a)),
                   st.floats(0.05, 1.0), st.floats(-math.pi + 0.05, math.pi - 0.05))
betas = st.one_of(st.floats(0.05, 1.0), st.floats(-1.0, -0.05))


@settings(max_examples=60, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.5, 200.0), alphas, betas)
def test_radial_closed_matches_oracle(R, s, alpha, beta):
    p = RadialKernelParams(R, s, alpha, beta)
    ref, err = radial_integral_oracle(p)
    assert abs(radial_integral_closed(p) - ref) <= 1e-8 * abs(ref) + 10 * err


@settings(max_examples=60, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.5, 50.0), alphas, betas)
def test_paper_form_agrees_in_principal_sector(R, s, alpha, beta):
    p = RadialKernelParams(R, s, alpha, beta)
    assume(abs(p.unwrapped_arg) < math.pi - 1e-3)
    a, b = radial_integral_paper(p), radial_integral_closed(p)
    assert abs(a - b) <= 1e-10 * max(abs(a), 1.0)


def test_paper_form_refuses_outside_sector():
    p = RadialKernelParams(1.0, 10.0, complex(math.cos(2.5), math.sin(2.5)), -1.0)
    with pytest.raises(DomainError):
        radial_integral_paper(p)
    v, _ = radial_integral_oracle(p)
    assert abs(radial_integral_closed(p) - v) < 1e-9 * abs(v)


def test_series_coefficients_symbolic():
    # Watson's lemma on int_0^inf r e^{-B r}/(r + A) dr, term by term
    r, A, B, s, al, R, be = sp.symbols("r A B s alpha R beta", positive=True)
    expansion = sp.series(r / (r + A), A, sp.oo, 8).removeO()
    for k in range(1, 7):
        term = expansion.coeff(A, -k) * A ** -k
        sym = sp.integrate(term * sp.exp(-B * r), (r, 0, sp.oo))
        sym = sym.subs({A: 2 * s * al, B: -sp.I * R * be})
        vals = {s: sp.Rational(7, 3), al: sp.Rational(3, 5), R: sp.Rational(5, 4),
                be: sp.Rational(2, 7)}
        want = complex(sp.N(sym.subs(vals), 30))
        p = RadialKernelParams(1.25, 7 / 3, 0.6, 2 / 7)
        got = series_terms(p, k)[-1].value(7 / 3)
        assert got == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_series_remainder_order(n):
    p0 = dict(R=1.0, alpha=0.8 + 0.3j, beta=0.7)
    errs = []
    ss = [100.0, 200.0, 400.0]
    for s in ss:
        p = RadialKernelParams(s=s, **p0)
        v, _ = radial_integral_series(p, n)
        errs.append(abs(v - radial_integral_closed(p)))
    slope = np.polyfit(np.log(ss), np.log(errs), 1)[0]
    assert slope == pytest.approx(-(n + 1), abs=0.1)


def test_series_errors():
    p = RadialKernelParams(1.0, 10.0, 0.8, 1e-4)
    with pytest.raises(CausticError):
        radial_integral_series(p, 2)
    p = RadialKernelParams(1.0, 10.0, 0.8, 0.5)
    with pytest.raises(DomainError):
        radial_integral_series(p, 0)
    with pytest.raises(DomainError):
        radial_integral_series(p, 30)


@pytest.mark.parametrize("xyz", [(0.3, 0.5, 0.4), (0.3, -0.5, 0.4), (1.0, 0.0, 0.2),
                                 (-0.2, -0.9, -0.6)])
@pytest.mark.parametrize("s", [2.0, 20.0])
def test_g_fullspace_matches_cylindrical_oracle(xyz, s):
    p = FieldPoint.from_cartesian(*xyz)
    d = make_direction(CALDERON, s)
    g = g_zeta_fullspace(p, d)
    ref = fullspace_cylindrical(np.array(xyz), CALDERON, s)
    assert abs(g.value - ref) <= 1e-7 * abs(ref)


def test_g_fullspace_on_im_axis_has_constant_modulus():
    # x along Im zeta_dot: |G| = 2 pi^2 / R for every s
    p = FieldPoint.from_cartesian(0.0, 0.8, 0.0)
    for s in [10.0, 40.0]:
        g = g_zeta_fullspace(p, make_direction(CALDERON, s))
        assert abs(g.value) == pytest.approx(2 * math.pi ** 2 / 0.8, rel=1e-7)


def test_normalizations():
    p = FieldPoint(1.0, 1.0, 0.3)
    d = make_direction(CALDERON, 5.0)
    a = g_zeta_fullspace(p, d).value
    b = g_zeta_fullspace(p, d, normalization="fourier-standard").value
    assert b == pytest.approx(-a / (2 * math.pi) ** 3)
    with pytest.raises(ValueError):
        g_zeta_fullspace(p, d, normalization="other")


def test_first_term_formula_and_order_guard():
    p = FieldPoint(1.5, 0.4, 1.0)
    d = make_direction(CALDERON, 10.0)
    assert first_term(p, d, coeff=2.0 + 1j) == pytest.approx(-(2 + 1j) / (2 * 1.5 ** 2 * 10))
    with pytest.raises(UnsupportedOrderError):
        expansion_coefficient(p, d, k=2)


def test_expansion_coefficient_vanishes_for_null_direction():
    # for zeta . zeta = 0 the s^-1 coefficient integrates to zero
    c = expansion_coefficient(FieldPoint(1.0, math.pi / 3, 0.0), make_direction(CALDERON, 1.0))
    assert abs(c.value) < 1e-9
