import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from fgreen import DomainError, QuadratureSpec, make_direction
from fgreen.fullspace import RadialKernelParams, radial_integral_closed
from fgreen.oracle import (fullspace_cylindrical, integrate_adaptive,
                           integrate_pv_circle, integrate_semiinfinite_oscillatory)


def test_adaptive_examples():
    v, _ = integrate_adaptive(lambda x: np.ones_like(x, dtype=complex), (0.0, 1.0))
    assert v == pytest.approx(1.0, abs=1e-14)
    v, _ = integrate_adaptive(lambda u: np.exp(-u) / u, (1.0, math.inf))
    assert v == pytest.approx(0.21938393439552062, rel=1e-10)
    v, _ = integrate_adaptive(lambda t, p: np.sin(t) + 0 * p, ((0.0, math.pi), (0.0, 2 * math.pi)))
    assert v == pytest.approx(4 * math.pi, rel=1e-12)


def test_oscillatory_examples():
    v, _ = integrate_semiinfinite_oscillatory(lambda r: np.exp(1j * r) * np.exp(-r), 1.0)
    assert v == pytest.approx(0.5 + 0.5j, abs=1e-12)
    v, _ = integrate_semiinfinite_oscillatory(lambda r: r * np.exp(1j * r) / (r + 20), 1.0,
                                              poles=[-20.0])
    # I = int r exp(-B r)/(r + A) with A = 2 s alpha = 20, B = -i R beta = -i
    want = radial_integral_closed(RadialKernelParams(1.0, 10.0, 1.0, 1.0))
    assert abs(v - want) < 1e-9 * abs(want)


def test_oscillatory_rejects_zero_rate_and_pole_on_ray():
    with pytest.raises(DomainError):
        integrate_semiinfinite_oscillatory(lambda r: r, 0.0)
    with pytest.raises(DomainError):
        integrate_semiinfinite_oscillatory(lambda r: 1 / (r - 2), 1.0, poles=[2.0])


def test_oscillatory_residue_crossing():
    # pole in the first quadrant: rotating across it needs its residue
    p = 3 + 1j
    f = lambda r: np.exp(1j * r) / (r - p) ** 2 / (r + 1)
    ref_re = integrate_adaptive(lambda r: (np.exp(1j * r) / (r - p) ** 2 / (r + 1)).real,
                                (0.0, 400.0), QuadratureSpec(max_subdivisions=40000))[0]
    h = 1e-6
    res = (np.exp(1j * (p + h)) / (p + h + 1) - np.exp(1j * (p - h)) / (p - h + 1)) / (2 * h)
    v, _ = integrate_semiinfinite_oscillatory(f, 1.0, poles=[p, -1.0], residues=[res, 0.0])
    # the tail beyond 400 is O(1/400^3)
    assert v.real == pytest.approx(ref_re.real, abs=1e-6)


def test_pv_examples():
    v, _ = integrate_pv_circle(lambda p: 1 / np.cos(p), [math.pi / 2, 3 * math.pi / 2])
    assert abs(v) < 1e-9
    v, _ = integrate_pv_circle(lambda p: np.cos(p) / np.cos(p), [math.pi / 2, 3 * math.pi / 2])
    assert v == pytest.approx(2 * math.pi, abs=1e-9)


def test_pv_against_closed_form():
    # PV int_0^{2pi} cos(phi)/cos(theta - phi) = 2 pi cos(theta)
    th = math.pi / 4
    v, err = integrate_pv_circle(lambda p: np.cos(p) / np.cos(th - p),
                                 [th + math.pi / 2, th + 3 * math.pi / 2])
    assert v == pytest.approx(2 * math.pi * math.cos(th), abs=1e-8)
    assert err < 1e-6


def test_pv_separation_error():
    with pytest.raises(DomainError):
        integrate_pv_circle(lambda p: 1 / np.sin(p), [0.0, 0.01])


def test_quadrature_spec_validation():
    for bad in [dict(abs_tol=0), dict(pv_epsilon=-1), dict(contour_angle=2.0),
                dict(upper_cutoff=0)]:
        with pytest.raises(ValueError):
            QuadratureSpec(**bad)


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.5, 4), st.floats(0.2, 3))
def test_linearity(a, b, w, c):
    f = lambda x: np.cos(w * x) * np.exp(-x)
    g = lambda x: 1 / (c + x * x)
    dom = (0.0, 5.0)
    lhs, _ = integrate_adaptive(lambda x: a * f(x) + b * g(x), dom)
    rf, _ = integrate_adaptive(f, dom)
    rg, _ = integrate_adaptive(g, dom)
    assert abs(lhs - (a * rf + b * rg)) <= 10 * (1e-12 + 1e-10 * abs(lhs))


CORPUS = [
    (lambda x: x ** 2, (0.0, 1.0), 1 / 3),
    (lambda x: np.exp(x), (0.0, 1.0), math.e - 1),
    (lambda x: np.sin(x), (0.0, math.pi), 2.0),
    (lambda x: 1 / (1 + x * x), (0.0, math.inf), math.pi / 2),
    (lambda x: np.exp(-x * x), (0.0, math.inf), math.sqrt(math.pi) / 2),
    (lambda x: np.sqrt(x), (0.0, 1.0), 2 / 3),
    (lambda x: np.log(x), (0.0, 1.0), -1.0),
    (lambda x: 1 / np.sqrt(x), (0.0, 1.0), 2.0),
    (lambda x: np.cos(10 * x), (0.0, math.pi / 2), math.sin(5 * math.pi) / 10),
    (lambda x: x * np.exp(-x), (0.0, math.inf), 1.0),
    (lambda x: np.exp(-x) / x, (1.0, math.inf), 0.21938393439552062),
    (lambda x: np.exp(1j * x), (0.0, math.pi), 2j),
    (lambda x: 1 / (1 + x), (0.0, 1.0), math.log(2)),
    (lambda x: np.abs(x - 0.3), (0.0, 1.0), 0.29),
    (lambda x: x ** 5 - x, (-1.0, 2.0), 63 / 6 - 1.5),
    (lambda x: np.exp(-2 * x) * np.cos(x), (0.0, math.inf), 0.4),
    (lambda x: 1 / (1 + x) ** 2, (0.0, math.inf), 1.0),
    (lambda x: special.j0(x), (0.0, 2.0), 1.4257838249637426),
    (lambda x: np.sin(x) ** 2, (0.0, 2 * math.pi), math.pi),
    (lambda x: x ** 3 * np.exp(-x), (0.0, math.inf), 6.0),
]


def test_error_estimate_honesty():
    honest = 0
    for f, dom, truth in CORPUS:
        v, err = integrate_adaptive(lambda x: np.asarray(f(x), dtype=complex), dom)
        honest += abs(v - truth) <= max(err, 1e-15 * abs(truth))
    assert honest >= 19


def test_determinism():
    f = lambda r: r * np.exp(1j * r) / (r + 20)
    a = integrate_semiinfinite_oscillatory(f, 1.0, poles=[-20.0])
    b = integrate_semiinfinite_oscillatory(f, 1.0, poles=[-20.0])
    assert a == b


def test_cylindrical_oracle_on_axis():
    # on the Im-zeta axis |G| = 2 pi^2 / R exactly
    zd = np.array([1, 1j, 0]) / math.sqrt(2)
    for s in [5.0, 50.0]:
        g = fullspace_cylindrical(np.array([0.0, 0.7, 0.0]), zd, s)
        assert abs(g) == pytest.approx(2 * math.pi ** 2 / 0.7, rel=1e-8)


def test_cylindrical_oracle_half_spaces_agree_at_small_s():
    # the two residue representations must both tend to the Coulomb kernel 2 pi^2 / R
    zd = np.array([1, 1j, 0]) / math.sqrt(2)
    for x in [np.array([0.3, 0.5, 0.4]), np.array([0.3, -0.5, 0.4])]:
        g = fullspace_cylindrical(x, zd, 1e-6)
        assert g == pytest.approx(2 * math.pi ** 2 / np.linalg.norm(x), rel=1e-5)
