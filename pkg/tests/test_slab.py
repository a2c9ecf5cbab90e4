import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from fgreen import DomainError, QuadratureError, SingularityError
from fgreen.slab import (Bump, SlabConfig, SlabFieldPoint, default_n_modes, eigen_sum_limit,
                         eigen_sum_pairing, f_pairing, g_angular, g_zeta_slab_truncated,
                         i_nu_quadrature, lambda_nu, leading_angular, m_nu_closed, m_nu_oracle,
                         m_nu_paper, m_nu_principal, mode_data, pv_angular_closed,
                         pv_angular_combination, slab_kernel_params, vertical_k, vertical_terms,
                         vertical_terms_dz)

CFG = SlabConfig()


def test_config_validation():
    for bad in [dict(H=0), dict(k0=0), dict(ell_dot_I=1.0), dict(source=(0, 0, 5.0)),
                dict(alpha_convention="other"), dict(source=(0, 0))]:
        with pytest.raises(DomainError):
            SlabConfig(**bad)
    assert CFG.z0 == 1.0
    assert CFG.with_(m=2).m_dot(4.0) == 0.5


def test_mode_data():
    assert vertical_k(0, math.pi) == 0.5
    md = lambda_nu(1, CFG)
    assert md.lambda_nu == pytest.approx(1.5)
    assert md.rho_nu == pytest.approx(math.sqrt(1 + 2.25))
    # nu and -nu-1 share |k_nu|
    assert lambda_nu(-2, CFG).lambda_nu == pytest.approx(md.lambda_nu)


def test_kernel_params_verbatim():
    alpha, b, b0 = slab_kernel_params(0.0, 10.0, 0, CFG)
    assert alpha == 1
    assert b0 ** 2 == pytest.approx(1 - 0.7)
    assert b ** 2 == pytest.approx(0.3 + 1.25 / 100)
    scaled = CFG.with_(alpha_convention="scaled")
    alpha, _, b0 = slab_kernel_params(0.0, 10.0, 0, scaled)
    assert alpha == 10
    assert b0 ** 2 == pytest.approx(100 - 0.7)
    assert mode_data(0, 10.0, CFG).beta_0 == pytest.approx(math.sqrt(0.3))
    with pytest.raises(DomainError):
        slab_kernel_params(0.0, 0.0, 0, CFG)


def _away_from_poles(phi, theta):
    return (abs(math.cos(theta - phi)) > 1e-3
            and min(abs(phi), abs(phi - math.pi), abs(phi - 2 * math.pi)) > 1e-3)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.floats(0.3, 3.0),
       st.floats(1.0, 300.0), st.integers(-4, 4), st.floats(-0.9, 0.9), st.booleans(),
       st.floats(0, 1.0))
def test_m_nu_closed_matches_oracle(phi, theta, R, s, nu, ell, jac, m):
    assume(_away_from_poles(phi, theta) and abs(ell) > 0.02)
    cfg = CFG.with_(ell_dot_I=ell, include_jacobian=jac, m=m)
    p = SlabFieldPoint(R, theta, 1.0)
    ref, err = m_nu_oracle(phi, p, s, nu, cfg)
    got = m_nu_closed(phi, p, s, nu, cfg)
    assert abs(got - ref) <= 1e-6 * abs(ref) + 10 * err


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0, 2 * math.pi), st.floats(1.0, 100.0),
       st.integers(0, 5))
def test_m_nu_mode_pair_symmetry(phi, theta, s, nu):
    assume(_away_from_poles(phi, theta))
    p = SlabFieldPoint(1.0, theta, 1.0)
    assert m_nu_closed(phi, p, s, nu, CFG) == pytest.approx(
        m_nu_closed(phi, p, s, -nu - 1, CFG), rel=1e-12)


def test_m_nu_continuous_across_cosine_zero():
    theta = 1.0
    phi0 = theta + math.pi / 2
    p = SlabFieldPoint(1.0, theta, 1.0)
    left = m_nu_closed(phi0 - 1e-7, p, 20.0, 0, CFG)
    right = m_nu_closed(phi0 + 1e-7, p, 20.0, 0, CFG)
    assert abs(left - right) < 1e-4 * abs(left)
    with pytest.raises(SingularityError):
        m_nu_closed(phi0, p, 20.0, 0, CFG)


def test_m_nu_pole_on_path():
    p = SlabFieldPoint(1.0, 0.3, 1.0)
    with pytest.raises(SingularityError):
        m_nu_closed(0.0, p, 20.0, 0, CFG)
    # with ell_dot_I = 0 the root is real for every phi
    with pytest.raises(SingularityError):
        m_nu_closed(1.0, p, 20.0, 0, CFG.with_(ell_dot_I=0.0))


def test_printed_forms_are_evaluable_but_differ():
    p = SlabFieldPoint(1.0, 0.3, 1.0)
    phi = 1.0
    closed = m_nu_closed(phi, p, 50.0, 0, CFG)
    paper = m_nu_paper(phi, p, 50.0, 0, CFG)
    assert np.isfinite(paper)
    assert abs(paper - closed) > 1e-3 * abs(closed)
    with pytest.raises(SingularityError):
        m_nu_principal(0.3 + math.pi / 2, p, 50.0, CFG)


def test_i_nu_excision_agrees_with_direct():
    p = SlabFieldPoint(1.0, 1.0, 1.0)
    direct = i_nu_quadrature(p, 30.0, 0, CFG)
    exc = i_nu_quadrature(p, 30.0, 0, CFG, excision=1e-3)
    assert abs(direct.value - exc.value) < 1e-4 * abs(direct.value)


def test_leading_term_independent_of_R_and_nu():
    a = leading_angular(1.0, CFG, 0).value
    b = leading_angular(1.0, CFG, 3).value
    assert a == pytest.approx(b, rel=1e-10)
    with pytest.raises(SingularityError):
        leading_angular(1.0, CFG.with_(ell_dot_I=0.0))


def test_i_nu_approaches_leading_term():
    L = leading_angular(1.0, CFG).value
    rels = []
    for s in [100.0, 400.0]:
        for R in [0.7, 1.5]:
            v = i_nu_quadrature(SlabFieldPoint(R, 1.0, 1.0), s, 0, CFG).value
            rels.append(abs(s * v - L) / abs(L))
    assert max(rels[2:]) < 0.05
    assert max(rels[2:]) < max(rels[:2])


@settings(max_examples=20, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0.3, 3.0), st.floats(-0.9, 0.9))
def test_pv_angular_closed_form(theta, R, ell):
    v = pv_angular_combination(R, theta, ell)
    assert abs(v.value - pv_angular_closed(R, theta, ell)) < 1e-6


def test_printed_angular_factor_matches_only_at_zero():
    assert g_angular(1.0, 0.0, 0.3) == pytest.approx(pv_angular_closed(1.0, 0.0, 0.3))
    assert abs(g_angular(1.0, 1.0, 0.3) - pv_angular_closed(1.0, 1.0, 0.3)) > 0.1
    with pytest.raises(SingularityError):
        g_angular(1.0, math.pi / 2, 0.3)


def test_bump_support():
    b = Bump(1.0, 0.4)
    assert b(np.array([1.0]))[0] == pytest.approx(1.0)
    assert b(np.array([0.6, 1.4, 2.0])).tolist() == [0, 0, 0]
    with pytest.raises(DomainError):
        f_pairing(Bump(0.1, 0.4), CFG)


@settings(max_examples=10, deadline=None)
@given(st.floats(0.5, 2.5), st.floats(0.2, 0.5))
def test_pairings(center, width):
    psi = Bump(center, width)
    want = float(psi(np.array([CFG.z0]))[0])
    assert f_pairing(psi, CFG) == pytest.approx(-want, abs=1e-14)
    limit = eigen_sum_limit(psi, CFG)
    assert limit.value == pytest.approx(CFG.H * want, abs=1e-3)


def test_eigen_pairing_errors():
    psi = Bump(1.0, 0.4)
    with pytest.raises(DomainError):
        eigen_sum_pairing(psi, CFG, 0)
    with pytest.raises(DomainError):
        eigen_sum_pairing(psi, CFG, 10, abel=1.5)
    with pytest.raises(QuadratureError):
        eigen_sum_limit(psi, CFG, n_modes=50)


def test_vertical_terms_vanish_on_bottom():
    # sin(k z) = 0 at z = 0; the derivative vanishes at z = H
    assert np.abs(vertical_terms(0.0, CFG, 20)).max() == 0
    assert np.abs(vertical_terms_dz(CFG.H, CFG, 20)).max() < 1e-12
    t = vertical_terms(0.7, CFG, 3)
    assert t.size == 8
    np.testing.assert_allclose(t[1], t[0])


def test_truncated_sum_checks_height():
    with pytest.raises(DomainError):
        g_zeta_slab_truncated(SlabFieldPoint(1.0, 0.3, 4.0), 10.0, CFG)
    assert default_n_modes(CFG) == 20
