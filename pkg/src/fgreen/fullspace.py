"""Faddeev-Green function of the Laplacian in R^3.

The angular representation is

    G(x) = int_0^{2pi} dphi int_0^pi dtheta sin(theta) I(R, s; alpha, beta),
    I    = int_0^inf r exp(i R beta r) / (r + 2 s alpha) dr,

with no (2 pi)^-3 factor (``normalization="paper"``).  Writing A = 2 s alpha
and B = -i R beta, I = 1/B - A exp(AB) E1(AB), where E1 must be taken on the
sheet reached by continuity from the rotated ray: the unwrapped argument
of AB is arg A + arg B.  Where that sum stays inside (-pi, pi) this is the
textbook principal-branch formula A (exp(AB) Ei(-AB) + 1/(AB)); elsewhere
the pole -A sits between the real axis and the decay direction and the
continuation adds its residue.  The only genuine singularity is alpha on
the negative real axis (pole on the path).

The 1/B term is a distribution on the caustic beta = 0: its principal
value integrates to zero over the sphere and its delta part, pi delta(R
beta), contributes exactly 2 pi^2 / R.  The remaining kernel is only
logarithmically singular there, so no excision is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _gk
from .complex_ei import Estimate, e1_scaled, e1_estimate
from .errors import CausticError, DomainError, UnsupportedOrderError
from .geometry import DirectionSpec, FieldPoint, aligned_frame, bilinear
from .oracle import QuadratureSpec, integrate_semiinfinite_oscillatory

POLE_MARGIN = 1e-6
BETA_MIN = 1e-3
MAX_ORDER = 20

NORMALIZATIONS = ("paper", "fourier-standard")


@dataclass(frozen=True)
class RadialKernelParams:
    """Parameters of the radial integral at one quadrature node."""

    R: float
    s: float
    alpha: complex
    beta: float

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError(f"R must be positive, got {self.R!r}")
        if not self.s > 0:
            raise DomainError(f"s must be positive, got {self.s!r}")
        if self.beta == 0 or not math.isfinite(self.beta):
            raise CausticError("beta = 0: the radial integral diverges on the caustic")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def A(self):
        return 2 * self.s * self.alpha

    @property
    def B(self):
        return -1j * self.R * self.beta

    @property
    def unwrapped_arg(self):
        """arg A + arg B, the argument of AB continued along the ray."""
        return _arg_alpha(self.alpha) + math.copysign(math.pi / 2, -self.beta)


@dataclass(frozen=True)
class ExpansionTerm:
    k: int
    coefficient: complex
    s_power: int

    def value(self, s):
        return self.coefficient * s ** self.s_power


def _arg_alpha(alpha):
    # alpha on the negative real axis is read as alpha - i0 (outgoing limit)
    alpha = np.asarray(alpha, dtype=complex)
    ang = np.angle(alpha)
    ang = np.where((alpha.imag == 0) & (alpha.real < 0), -np.pi, ang)
    return ang if ang.ndim else float(ang)


def _regular_kernel(A, B, beta_sign):
    """-A exp(AB) E1(AB) on the continued sheet (vectorised)."""
    theta = _arg_alpha(A) - beta_sign * (np.pi / 2)
    w = A * B
    out = np.zeros(np.broadcast(A, B).shape, dtype=complex)
    nz = np.broadcast_to(w != 0, out.shape)
    A = np.broadcast_to(A, out.shape)
    out[nz] = -A[nz] * e1_scaled(np.broadcast_to(w, out.shape)[nz],
                                 np.broadcast_to(theta, out.shape)[nz])
    return out


def _check_pole(alpha, margin):
    if abs(_arg_alpha(alpha)) >= math.pi - margin:
        raise DomainError(
            f"alpha = {alpha!r} is within {margin} rad of the negative real axis: "
            "the pole -2 s alpha lies on the integration path"
        )


def radial_integral_closed(p, margin=POLE_MARGIN):
    """I(R, s; alpha, beta) through the exponential integral.

    Matches the real-axis integral wherever it exists, i.e. for alpha off
    the negative real axis.
    """
    _check_pole(p.alpha, margin)
    A, B = p.A, p.B
    sgn = 1.0 if p.beta > 0 else -1.0
    return complex(1.0 / B + _regular_kernel(np.array([A]), B, sgn)[0])


def radial_integral_error(p):
    """Propagated error estimate of ``radial_integral_closed``."""
    A, B = p.A, p.B
    w = A * B
    if abs(p.unwrapped_arg) >= math.pi:
        return 1e-15 * (abs(1 / B) + abs(A))
    est = e1_estimate(w)
    return float(abs(A) * abs(np.exp(w)) * est.error + 4e-16 * (abs(1 / B) + abs(A / w)))


def radial_integral_paper(p, margin=POLE_MARGIN):
    """A (exp(AB) Ei(-AB) + 1/(AB)) with the principal branch of Ei, verbatim.

    Only valid while arg A + arg B stays inside (-pi, pi); raises
    DomainError outside that sector.
    """
    if abs(p.unwrapped_arg) >= math.pi - margin:
        raise DomainError(
            f"arg A + arg B = {p.unwrapped_arg:.6g}: outside the principal sector"
        )
    A, B = p.A, p.B
    w = A * B
    ei_minus_w = -e1_scaled(w) * np.exp(-w)
    return complex(A * (np.exp(w) * ei_minus_w + 1.0 / w))


def radial_integral_oracle(p, q=None):
    """Brute-force I by pole-avoiding contour rotation of the r-integral."""
    q = q or QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12)
    A, R, beta = p.A, p.R, p.beta

    def integrand(r):
        return r * np.exp(1j * R * beta * r) / (r + A)

    return integrate_semiinfinite_oscillatory(integrand, R * beta, q, poles=[-A])


def series_terms(p, n):
    """Terms k = 1..n of the large-s expansion of I."""
    out = []
    for k in range(1, n + 1):
        coef = math.factorial(k) / (1j ** (k + 1) * 2 ** k * p.alpha ** k
                                    * p.R ** (k + 1) * p.beta ** (k + 1))
        out.append(ExpansionTerm(k=k, coefficient=complex(coef), s_power=-k))
    return out


def radial_integral_series(p, n, beta_min=BETA_MIN, max_order=MAX_ORDER, margin=POLE_MARGIN):
    """Partial sum of the large-s expansion of I and its terms.

    Returns ``(value, terms)``; the error against the closed form is
    O(s^-(n+1)).
    """
    if int(n) != n or n < 1:
        raise DomainError(f"series order must be a positive integer, got {n!r}")
    if n > max_order:
        raise DomainError(f"order {n} exceeds the maximum {max_order}")
    if abs(p.beta) < beta_min:
        raise CausticError(f"|beta| = {abs(p.beta):.3g} < beta_min = {beta_min}")
    if p.alpha == 0:
        raise DomainError("alpha = 0: expansion coefficients are singular")
    if abs(np.angle(p.alpha) + math.pi / 2) < margin:
        raise DomainError("arg alpha = -pi/2 is outside -pi/2 < arg alpha < 3pi/2")
    terms = series_terms(p, int(n))
    return complex(sum(t.value(p.s) for t in terms)), terms


# ---------------------------------------------------------------------------
# angular quadrature


class _Frame:
    """alpha(t, Phi) in coordinates whose polar axis is the field point.

    xi_hat = t xhat + sqrt(1 - t^2) (cos Phi e1 + sin Phi e2), so beta = t.
    """

    def __init__(self, p, d):
        e1, e2, xhat = aligned_frame(p)
        zd = d.zeta_dot
        self.a0 = bilinear(zd, xhat)
        self.a1 = bilinear(zd, e1)
        self.a2 = bilinear(zd, e2)
        # real directions with alpha = 0: +-(Re zd x Im zd)
        n = np.cross(zd.real, zd.imag)
        self.zero_phis = ()
        self.zero_thetas = ()
        if np.linalg.norm(n) > 1e-12:
            n = n / np.linalg.norm(n)
            ph = math.atan2(n @ e2, n @ e1) % (2 * math.pi)
            th = math.acos(max(-1.0, min(1.0, n @ xhat)))
            self.zero_phis = (ph, (ph + math.pi) % (2 * math.pi))
            self.zero_thetas = (th, math.pi - th)

    def alpha(self, t, phi):
        return t * self.a0 + np.sqrt(np.maximum(1 - t * t, 0.0)) * (
            self.a1 * np.cos(phi) + self.a2 * np.sin(phi))

    def jump_polar_angles(self, phi):
        """Polar angle where alpha crosses the negative real axis, or nan."""
        p = self.a0.imag
        c = self.a1 * np.cos(phi) + self.a2 * np.sin(phi)
        qv = c.imag
        norm = np.hypot(p, qv)
        with np.errstate(invalid="ignore", divide="ignore"):
            t = -np.sign(p * qv) * np.abs(qv) / norm
        t = np.where(norm > 0, t, np.nan)
        re = t * self.a0.real + np.sqrt(np.maximum(1 - t * t, 0)) * c.real
        ok = np.isfinite(t) & (re < 0) & (np.abs(t) < 1)
        return np.where(ok, np.arccos(np.clip(t, -1, 1)), np.nan)


def _normalize(value, normalization):
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
    if normalization == "fourier-standard":
        return -value / (2 * math.pi) ** 3
    return value


def _inner_panels(frame, phis, extra=()):
    lo, hi, own = [], [], []
    jumps = frame.jump_polar_angles(phis)
    for i, ph in enumerate(phis):
        edges = {0.0, math.pi / 2, math.pi}
        if np.isfinite(jumps[i]):
            edges.add(float(jumps[i]))
        for e in extra:
            edges.add(float(e))
        edges = sorted(edges)
        lo.extend(edges[:-1])
        hi.extend(edges[1:])
        own.extend([i] * (len(edges) - 1))
    return np.array(lo), np.array(hi), np.array(own)


def g_zeta_fullspace(p, d, q=None, normalization="paper"):
    """G_zeta(x) by nested adaptive quadrature over the Fourier sphere.

    Returns an Estimate (value, absolute error estimate).  The polar axis
    of the quadrature is aligned with x so that the caustic is the equator.
    """
    q = q or QuadratureSpec(abs_tol=1e-10, rel_tol=1e-9)
    frame = _Frame(p, d)
    R, s = p.R, d.s

    def outer(phis):
        lo, hi, own = _inner_panels(frame, phis, frame.zero_thetas)

        def f(theta, o):
            t = np.cos(theta)
            alpha = frame.alpha(t, phis[o])
            A = 2 * s * alpha
            B = -1j * R * t
            return np.sin(theta) * _regular_kernel(A, B, np.sign(t))

        v, _ = _gk.adaptive_batch(f, lo, hi, own, phis.size, q.abs_tol, q.rel_tol)
        return v

    val, err = _gk.adaptive(outer, 0.0, 2 * math.pi, q.abs_tol * 2 * math.pi, q.rel_tol,
                            points=frame.zero_phis, max_panels=q.max_subdivisions)
    total = 2 * math.pi ** 2 / R + val
    return Estimate(_normalize(complex(total), normalization), err)


def expansion_coefficient(p, d, k=1, q=None):
    """Angular coefficient of the s^-1 term, int sin(theta) / (alpha beta^2).

    The beta^-2 factor is read as (beta + i0)^-2, the limit consistent
    with the outgoing radial integral: a Hadamard finite part plus
    -i pi times the beta-derivative of 1/alpha on the caustic.
    """
    if k != 1:
        raise UnsupportedOrderError(
            f"k = {k}: the angular coefficient is a distribution for k >= 2"
        )
    q = q or QuadratureSpec(abs_tol=1e-11, rel_tol=1e-10)
    frame = _Frame(p, d)

    def outer(phis):
        c = frame.a1 * np.cos(phis) + frame.a2 * np.sin(phis)
        g0 = 1.0 / c
        g1 = -frame.a0 / c ** 2
        edges = sorted({0.0, math.pi / 2, math.pi, *frame.zero_thetas})
        lo = np.tile(edges[:-1], phis.size)
        hi = np.tile(edges[1:], phis.size)
        own = np.repeat(np.arange(phis.size), len(edges) - 1)

        def f(theta, o):
            t = np.cos(theta)
            g = 1.0 / frame.alpha(t, phis[o])
            return np.sin(theta) * (g - g0[o] - t * g1[o]) / (t * t)

        v, _ = _gk.adaptive_batch(f, lo, hi, own, phis.size, q.abs_tol, q.rel_tol)
        # fp int_{-1}^{1} dt / t^2 = -2;  <delta', g> = -g'(0)
        return v - 2 * g0 - 1j * math.pi * g1

    val, err = _gk.adaptive(outer, 0.0, 2 * math.pi, q.abs_tol, q.rel_tol,
                            points=frame.zero_phis, max_panels=q.max_subdivisions)
    return Estimate(complex(val), err)


def first_term(p, d, coeff=None, q=None, normalization="paper"):
    """k = 1 reconstruction: (1/(i^2 2)) coeff R^-2 s^-1."""
    if coeff is None:
        coeff = expansion_coefficient(p, d, 1, q).value
    return _normalize(-coeff / (2 * p.R ** 2 * d.s), normalization)
