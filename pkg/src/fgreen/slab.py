"""Faddeev-Green function of the Helmholtz operator in the slab 0 < z < H.

The vertical eigenfunctions sin((nu + 1/2) pi z / H) separate the
problem; the horizontal part of mode nu is

    I_nu = int_0^{2pi} dphi M_nu(phi),
    M_nu = int_0^inf exp(-i R c r) / (r^2 - 2 a s r - lambda_nu^2) dr,

with c = cos(theta - phi) and a = cos(phi) + i ld sin(phi), ld the
imaginary slope of zeta_|| = (s, i s ld).  Splitting the denominator over
its roots r+- gives M_nu = (J(r+) - J(r-)) / (r+ - r-) with

    J(r0) = int_0^inf exp(-p r) / (r - r0) dr = exp(-r0 p) E1(-r0 p),
    p = i R c,

E1 taken on the sheet arg(-r0) + arg(p), exactly as for the full-space
radial integral.  A root on the positive real axis (phi = 0 or pi when
lambda_nu^2 > 0) puts a pole on the path; M_nu then has an integrable
logarithmic singularity in phi.  At c = 0 the two logarithms cancel and
M_nu stays finite, so I_nu needs no principal-value excision.

The formulas quoted "as written" (``m_nu_paper``, ``m_nu_principal``,
``g_angular``, ``slab_kernel_params``) are kept verbatim for comparison;
the re-derived ones are the certified paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _gk
from .complex_ei import Estimate, e1_scaled, ei
from .errors import BranchError, DomainError, QuadratureError, SingularityError
from .oracle import QuadratureSpec, integrate_pv_circle, integrate_semiinfinite_oscillatory

TWO_PI = 2 * math.pi
C_MARGIN = 1e-10
POLE_MARGIN = 1e-10
ROOT_FLOOR = 1e-12
ANGLE_MARGIN = 1e-9
ABEL_DEFAULT = (0.99, 0.995, 0.999)

ALPHA_CONVENTIONS = ("unit", "scaled")


@dataclass(frozen=True)
class SlabConfig:
    """Slab geometry, wave number and the fixed components of zeta.

    ``m`` is the vertical component of zeta and is held fixed while s
    varies; ``alpha_convention`` selects whether the verbatim kernel
    parameters use alpha = a (``unit``) or alpha = s a (``scaled``).
    ``include_jacobian`` adds the polar factor r to the radial integrand.
    """

    H: float = math.pi
    k0: float = 1.0
    m: complex = 0.0
    ell_dot_I: float = 0.3
    source: tuple = (0.0, 0.0, 1.0)
    alpha_convention: str = "unit"
    include_jacobian: bool = False

    def __post_init__(self):
        if not self.H > 0:
            raise DomainError(f"H must be positive, got {self.H!r}")
        if not self.k0 > 0:
            raise DomainError(f"k0 must be positive, got {self.k0!r}")
        if abs(abs(self.ell_dot_I) - 1.0) < 1e-12:
            raise DomainError("ell_dot_I = +-1 makes 1 - ell_dot_I^2 vanish")
        src = tuple(float(v) for v in self.source)
        if len(src) != 3:
            raise DomainError("source must be (x0, y0, z0)")
        if not 0 < src[2] < self.H:
            raise DomainError(f"source height z0 = {src[2]!r} outside (0, H)")
        if self.alpha_convention not in ALPHA_CONVENTIONS:
            raise DomainError(f"alpha_convention must be one of {ALPHA_CONVENTIONS}")
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "m", complex(self.m))

    @property
    def z0(self):
        return self.source[2]

    def m_dot(self, s):
        """m / s, the scaled vertical component."""
        return self.m / s

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class SlabModeData:
    nu: int
    lambda_nu: complex
    rho_nu: float
    beta_nu: complex | None = None
    beta_0: complex | None = None


@dataclass(frozen=True)
class SlabFieldPoint:
    """Horizontal polar coordinates of x - x0 and the height z."""

    R: float
    theta: float
    z: float
    H: float | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError(f"R must be positive, got {self.R!r}")
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)
        if self.H is not None and not 0 < self.z < self.H:
            raise DomainError(f"z = {self.z!r} outside (0, H)")

    @classmethod
    def from_cartesian(cls, x, y, z, cfg):
        dx, dy = x - cfg.source[0], y - cfg.source[1]
        return cls(math.hypot(dx, dy), math.atan2(dy, dx), z, H=cfg.H)


def vertical_k(nu, H):
    return (nu + 0.5) * math.pi / H


def lambda_nu(nu, cfg):
    """Mode data: lambda_nu^2 = m^2 + k_nu^2 and rho_nu^2 = k0^2 + k_nu^2."""
    nu = int(nu)
    k2 = vertical_k(nu, cfg.H) ** 2
    lam = complex(np.sqrt(complex(cfg.m * cfg.m + k2)))
    rho = math.sqrt(cfg.k0 ** 2 + k2)
    return SlabModeData(nu=nu, lambda_nu=lam, rho_nu=rho)


def _unit_alpha(phi, ell):
    return np.cos(phi) + 1j * ell * np.sin(phi)


def _alpha(phi, s, cfg):
    a = _unit_alpha(phi, cfg.ell_dot_I)
    return a * s if cfg.alpha_convention == "scaled" else a


def _sector_ok(v):
    return abs(np.angle(v)) < math.pi - ANGLE_MARGIN


def slab_kernel_params(phi, s, nu, cfg):
    """(alpha, beta_nu, beta_0) exactly as tabulated for the slab kernel.

    beta_nu^2 = alpha^2 - (1 - ld) + rho_nu^2/s^2 and beta_0^2 = alpha^2 -
    (1 - ld); each root is the one with |arg(i (alpha +- beta))| < pi.
    """
    if not s > 0:
        raise DomainError(f"s must be positive, got {s!r}")
    alpha = complex(_alpha(phi, s, cfg))
    rho = lambda_nu(nu, cfg).rho_nu
    shift = 1.0 - cfg.ell_dot_I

    def pick(b2, name):
        b = complex(np.sqrt(b2))
        for cand in (b, -b):
            if _sector_ok(1j * (alpha + cand)) and _sector_ok(1j * (alpha - cand)):
                return cand
        raise BranchError(f"no root of {name}^2 = {b2!r} keeps |arg(i(alpha +- {name}))| < pi")

    beta_nu = pick(alpha * alpha - shift + rho * rho / (s * s), "beta_nu")
    beta_0 = pick(alpha * alpha - shift, "beta_0")
    return alpha, beta_nu, beta_0


def mode_data(nu, s, cfg, phi=0.0):
    """SlabModeData with the s-dependent roots filled in at angle phi."""
    md = lambda_nu(nu, cfg)
    _, b, b0 = slab_kernel_params(phi, s, nu, cfg)
    return replace(md, beta_nu=b, beta_0=b0)


# ---------------------------------------------------------------------------
# M_nu


def _roots(phi, s, lam2, ell):
    """Roots of r^2 - 2 a s r - lam2, the larger first (cancellation-free)."""
    sa = s * _unit_alpha(phi, ell)
    disc = np.sqrt(sa * sa + lam2)
    sgn = np.where((np.conj(sa) * disc).real >= 0, 1.0, -1.0)
    r1 = sa + sgn * disc
    with np.errstate(divide="ignore", invalid="ignore"):
        r2 = -lam2 / r1
    return r1, r2


def _j(r0, p_arg, p):
    """int_0^inf exp(-p r)/(r - r0) dr for Re p = 0, on the continued sheet."""
    w = -r0 * p
    return e1_scaled(w, np.angle(-r0) + p_arg)


def _m_nu_vec(phi, R, theta, s, lam2, ell, jacobian=False):
    phi = np.asarray(phi, dtype=float)
    c = np.cos(theta - phi)
    p = 1j * R * c
    p_arg = np.sign(c) * (math.pi / 2)
    r1, r2 = _roots(phi, s, lam2, ell)
    j1 = _j(r1, p_arg, p)
    j2 = _j(r2, p_arg, p)
    if jacobian:
        return (r1 * j1 - r2 * j2) / (r1 - r2)
    return (j1 - j2) / (r1 - r2)


def _lam2(nu, cfg):
    return complex(cfg.m * cfg.m + vertical_k(nu, cfg.H) ** 2)


def m_nu_closed(phi, p, s, nu, cfg, c_margin=C_MARGIN, pole_margin=POLE_MARGIN,
                root_floor=ROOT_FLOOR):
    """M_nu by partial fractions over the roots and two E1 evaluations.

    Raises SingularityError within ``c_margin`` of cos(theta - phi) = 0 or
    when a root lies within ``pole_margin`` (in angle) of the positive real
    axis, and DomainError when the roots nearly coincide.
    """
    if not s > 0:
        raise DomainError(f"s must be positive, got {s!r}")
    c = math.cos(p.theta - phi)
    if abs(c) < c_margin:
        raise SingularityError(f"|cos(theta - phi)| = {abs(c):.3g} < {c_margin}")
    lam2 = _lam2(nu, cfg)
    r1, r2 = _roots(np.array([phi]), s, lam2, cfg.ell_dot_I)
    if abs(r1[0] - r2[0]) < root_floor * max(1.0, abs(r1[0])):
        raise DomainError("roots r+ and r- coincide")
    for r in (r1[0], r2[0]):
        if r.real > 0 and abs(math.atan2(r.imag, r.real)) < pole_margin:
            raise SingularityError(f"root r = {r!r} lies on the integration path")
    val = _m_nu_vec(np.array([phi]), p.R, p.theta, s, lam2, cfg.ell_dot_I,
                    cfg.include_jacobian)
    return complex(val[0])


def m_nu_oracle(phi, p, s, nu, cfg, q=None):
    """M_nu by contour-rotated quadrature of its defining integral."""
    q = q or QuadratureSpec(abs_tol=1e-14, rel_tol=1e-11)
    lam2 = _lam2(nu, cfg)
    a = complex(_unit_alpha(phi, cfg.ell_dot_I))
    c = math.cos(p.theta - phi)
    r1, r2 = _roots(np.array([phi]), s, lam2, cfg.ell_dot_I)
    jac = cfg.include_jacobian

    def integrand(r):
        num = r if jac else 1.0
        return num * np.exp(-1j * p.R * c * r) / (r * r - 2 * a * s * r - lam2)

    poles = [complex(r1[0]), complex(r2[0])]
    residues = []
    for r0, other in (poles, poles[::-1]):
        num = r0 if jac else 1.0
        residues.append(num * np.exp(-1j * p.R * c * r0) / (r0 - other))
    val, err = integrate_semiinfinite_oscillatory(integrand, -p.R * c, q, poles=poles,
                                                  residues=residues)
    return complex(val), err


def m_nu_paper(phi, p, s, nu, cfg):
    """The exponential-integral expression for M_nu as printed.

    (alpha + beta_nu)/(2 beta_nu) exp(-i alpha R c s) (exp(i s beta_nu R c)
    Ei(i s (alpha - beta_nu) R c) - exp(-i s beta_nu R c) Ei(i s (alpha +
    beta_nu) R c)), with the undefined prefactor beta read as beta_nu and
    principal-branch Ei.  Not expected to agree with ``m_nu_closed``.
    """
    alpha, b, _ = slab_kernel_params(phi, s, nu, cfg)
    c = math.cos(p.theta - phi)
    R = p.R
    t1 = np.exp(1j * s * b * R * c) * ei(1j * s * (alpha - b) * R * c)
    t2 = np.exp(-1j * s * b * R * c) * ei(1j * s * (alpha + b) * R * c)
    return complex((alpha + b) / (2 * b) * np.exp(-1j * alpha * R * c * s) * (t1 - t2))


def m_nu_principal(phi, p, s, cfg, c_margin=C_MARGIN):
    """-(i/R) (alpha + sqrt(alpha^2 - (1 - ld))) / (1 - ld^2) / c / s, as printed."""
    c = math.cos(p.theta - phi)
    if abs(c) < c_margin:
        raise SingularityError(f"|cos(theta - phi)| = {abs(c):.3g} < {c_margin}")
    ell = cfg.ell_dot_I
    alpha = complex(_alpha(phi, s, cfg))
    root = complex(np.sqrt(alpha * alpha - (1 - ell)))
    return complex(-1j / p.R * (alpha + root) / (1 - ell * ell) / c / s)


# ---------------------------------------------------------------------------
# I_nu


def _phi_breaks(theta):
    return sorted({0.0, math.pi, (theta + math.pi / 2) % TWO_PI, (theta + 1.5 * math.pi) % TWO_PI})


def i_nu_quadrature(p, s, nu, cfg, q=None, excision=0.0):
    """I_nu = int_0^{2pi} M_nu dphi by adaptive quadrature.

    The integrand is finite at cos(theta - phi) = 0 and only
    logarithmically singular at phi = 0, pi, so the default integrates
    straight through with breakpoints there.  ``excision > 0`` instead
    removes arcs of that radius around the zeros of the cosine and
    Richardson-extrapolates from radii eps and eps/2.
    """
    q = q or QuadratureSpec(abs_tol=1e-13, rel_tol=1e-10, max_subdivisions=20000)
    lam2 = _lam2(nu, cfg)
    ell, jac = cfg.ell_dot_I, cfg.include_jacobian

    def f(phi):
        return _m_nu_vec(phi, p.R, p.theta, s, lam2, ell, jac)

    breaks = _phi_breaks(p.theta)
    if excision <= 0:
        val, err = _gk.adaptive(f, 0.0, TWO_PI, q.abs_tol, q.rel_tol, points=breaks,
                                max_panels=q.max_subdivisions)
        return Estimate(val, err)
    zeros = [(p.theta + math.pi / 2) % TWO_PI, (p.theta + 1.5 * math.pi) % TWO_PI]

    def excised(eps):
        # integrate the arcs between excised windows, starting after zeros[0]
        total, err = 0j, 0.0
        start = zeros[0]
        for z_next in (zeros[0] + math.pi, zeros[0] + TWO_PI):
            a, b = start + eps, z_next - eps
            pts = [t + k * TWO_PI for t in breaks for k in (0, 1) if a < t + k * TWO_PI < b]
            v, e = _gk.adaptive(lambda x: f(x % TWO_PI), a, b, q.abs_tol, q.rel_tol,
                                points=pts, max_panels=q.max_subdivisions)
            total += v
            err += e
            start = z_next
        return total, err

    p1, e1 = excised(excision)
    p2, e2 = excised(excision / 2)
    val = 2 * p2 - p1
    return Estimate(val, abs(val - p2) + 3 * (e1 + e2))


def leading_angular(theta, cfg, nu=0, q=None):
    """L(theta) with I_nu = L/s + o(1/s) for fixed m, re-derived.

    For fixed lambda_nu the small root r- ~ -lambda^2/(2 s a) dominates:
    M_nu ~ (gamma + log(-r- p)) / (2 s a).  Every phi-independent part of
    the logarithm integrates against 1/a to zero (the zeros of a lie on
    one side of the unit circle when 0 < |ld| < 1), leaving

        L = 1/2 int [log|c| - log|a| + i (arg(lambda^2/a) + sgn(c) pi/2)] / a dphi,

    which depends on theta alone (not on R or nu when lambda^2 > 0).
    """
    q = q or QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11)
    ell = cfg.ell_dot_I
    if ell == 0:
        raise SingularityError("ell_dot_I = 0: a = cos(phi) vanishes and 1/a is not integrable")
    lam2 = _lam2(nu, cfg)

    def f(phi):
        a = _unit_alpha(phi, ell)
        c = np.cos(theta - phi)
        ang = np.angle(lam2 / a) + np.sign(c) * (math.pi / 2)
        return (np.log(np.abs(c)) - np.log(np.abs(a)) + 1j * ang) / a

    val, err = _gk.adaptive(f, 0.0, TWO_PI, q.abs_tol, q.rel_tol, points=_phi_breaks(theta),
                            max_panels=q.max_subdivisions)
    return Estimate(0.5 * val, 0.5 * err)


def i_nu_leading(p, s, nu, cfg):
    """Re-derived leading term L(theta)/s of I_nu."""
    return leading_angular(p.theta, cfg, nu).value / s


def g_angular(R, theta, ell_dot_I, margin=ANGLE_MARGIN):
    """-i/(1 - ld^2) exp(i theta)/R (2 pi - theta - i (log|cos theta| - i pi chi)), as printed."""
    theta = float(theta) % TWO_PI
    for bad in (math.pi / 2, 1.5 * math.pi):
        if abs(theta - bad) < margin:
            raise SingularityError(f"theta = {theta!r} is a zero of cos(theta)")
    chi = 1.0 if math.pi / 2 < theta < 1.5 * math.pi else 0.0
    ell = ell_dot_I
    bracket = TWO_PI - theta - 1j * (math.log(abs(math.cos(theta))) - 1j * math.pi * chi)
    return complex(-1j / (1 - ell * ell) * np.exp(1j * theta) / R * bracket)


def i_nu_asymptotic(p, s, cfg):
    """Leading I_nu as printed: g_angular / s."""
    return g_angular(p.R, p.theta, cfg.ell_dot_I) / s


def pv_angular_combination(R, theta, ell_dot_I, q=None):
    """PV quadrature of the two angular integrals of the principal term.

    -i/(1 - ld^2)/R (PV int a/c dphi + PV int (a^2 - (1 - ld)^2)/c dphi),
    with a = cos phi + i ld sin phi and c = cos(theta - phi).
    """
    q = q or QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12, pv_epsilon=1e-2)
    ell = ell_dot_I
    sing = [theta + math.pi / 2, theta + 1.5 * math.pi]

    def first(phi):
        return _unit_alpha(phi, ell) / np.cos(theta - phi)

    def second(phi):
        a = _unit_alpha(phi, ell)
        return (a * a - (1 - ell) ** 2) / np.cos(theta - phi)

    v1, e1 = integrate_pv_circle(first, sing, q)
    v2, e2 = integrate_pv_circle(second, sing, q)
    pref = -1j / (1 - ell * ell) / R
    return Estimate(complex(pref * (v1 + v2)), abs(pref) * (e1 + e2))


def pv_angular_closed(R, theta, ell_dot_I):
    """Closed form of ``pv_angular_combination``.

    PV int cos(phi)/c = 2 pi cos(theta), PV int sin(phi)/c = 2 pi sin(theta)
    and every other term of the two integrands has zero principal value,
    so the combination is -2 pi i (cos theta + i ld sin theta) / ((1 - ld^2) R).
    """
    ell = ell_dot_I
    return complex(-2j * math.pi * (math.cos(theta) + 1j * ell * math.sin(theta))
                   / ((1 - ell * ell) * R))


# ---------------------------------------------------------------------------
# vertical factor and pairings


@dataclass(frozen=True)
class Bump:
    """Smooth test function A exp(-1/(1 - u^2)), u = (z - center)/width."""

    center: float
    width: float
    amplitude: float = math.e

    @property
    def support(self):
        return (self.center - self.width, self.center + self.width)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        u = (z - self.center) / self.width
        inside = np.abs(u) < 1
        out = np.zeros(z.shape)
        out[inside] = self.amplitude * np.exp(-1.0 / (1.0 - u[inside] ** 2))
        return out


def _check_support(testfn, H):
    lo, hi = getattr(testfn, "support", (0.0, H))
    if not 0 <= lo < hi <= H:
        raise DomainError(f"test function support {lo, hi} is not inside [0, H]")
    return lo, hi


def f_pairing(testfn, cfg, n_images=3):
    """<f(.; z0), psi> for the delta-comb vertical factor.

    f = cos(pi (z + z0)/2H) sum delta(z + z0 - 2 nu H)
        - cos(pi (z - z0)/2H) sum delta(z - z0 - 2 nu H);
    images outside the support of psi contribute nothing.
    """
    if n_images < 1:
        raise DomainError("n_images must be at least 1")
    H, z0 = cfg.H, cfg.z0
    lo, hi = _check_support(testfn, H)
    total = 0.0
    for nu in range(-n_images, n_images + 1):
        for z, sign, w in ((2 * nu * H - z0, 1.0, lambda z: math.cos(math.pi * (z + z0) / (2 * H))),
                           (z0 + 2 * nu * H, -1.0, lambda z: math.cos(math.pi * (z - z0) / (2 * H)))):
            if lo < z < hi:
                total += sign * w(z) * float(testfn(np.array([z]))[0])
    return total


def _gl_nodes(lo, hi, n_panels, order=20):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def sine_coefficients(testfn, H, n_modes):
    """<sin(k_nu z), psi> for nu = 0..n_modes by composite Gauss-Legendre."""
    lo, hi = _check_support(testfn, H)
    k = (np.arange(n_modes + 1) + 0.5) * math.pi / H
    periods = k[-1] * (hi - lo) / TWO_PI
    z, w = _gl_nodes(lo, hi, max(16, int(periods) + 1))
    psi = testfn(z)
    out = np.empty(k.size)
    for i in range(0, k.size, 256):
        out[i:i + 256] = np.sin(np.outer(k[i:i + 256], z)) @ (w * psi)
    return out


def eigen_sum_pairing(testfn, cfg, n_modes, abel=1.0):
    """<sum_{nu=-N-1}^{N} abel^|nu| sin(k_nu z0) sin(k_nu z), psi>.

    The pair nu, -nu-1 shares |k_nu|, so the sum runs over nu >= 0 with
    weight abel^nu + abel^(nu+1).
    """
    if n_modes < 1:
        raise DomainError("n_modes must be at least 1")
    if not 0 < abel <= 1:
        raise DomainError(f"abel must lie in (0, 1], got {abel!r}")
    coef = sine_coefficients(testfn, cfg.H, n_modes)
    nu = np.arange(n_modes + 1)
    k = (nu + 0.5) * math.pi / cfg.H
    weight = abel ** nu + abel ** (nu + 1)
    return float(np.sum(weight * np.sin(k * cfg.z0) * coef))


def eigen_sum_limit(testfn, cfg, n_modes=4000, abels=ABEL_DEFAULT, tol=1e-6):
    """Abel-summed eigen pairing extrapolated to abel = 1.

    A quadratic in (1 - abel) through the three damped sums is evaluated
    at 1; the spread against the linear extrapolation from the last two
    points is the error estimate.  Raises QuadratureError when the damped
    terms have not died out by ``n_modes`` or the extrapolation is unstable.
    """
    coef = sine_coefficients(testfn, cfg.H, n_modes)
    nu = np.arange(n_modes + 1)
    k = (nu + 0.5) * math.pi / cfg.H
    terms = np.sin(k * cfg.z0) * coef
    vals = []
    for a in abels:
        w = a ** nu + a ** (nu + 1)
        tail = np.abs(w * terms)[-max(1, n_modes // 20):].max()
        if tail > tol * max(1.0, np.abs(w * terms).max()):
            raise QuadratureError(f"eigen pairing tail {tail:.3g} not negligible at N = {n_modes}")
        vals.append(float(np.sum(w * terms)))
    h = 1.0 - np.asarray(abels)
    quad = np.polyfit(h, vals, len(abels) - 1)
    value = float(np.polyval(quad, 0.0))
    lin = vals[-1] - h[-1] * (vals[-1] - vals[-2]) / (h[-1] - h[-2])
    err = abs(value - lin)
    if err > 1e-2 * max(1.0, abs(value)):
        raise QuadratureError(f"Abel extrapolation unstable (spread {err:.3g})")
    return Estimate(value, err)


def vertical_terms(z, cfg, n_modes):
    """Terms sin(k z0) sin(k z), nu = -N-1..N, ordered 0, -1, 1, -2, ..."""
    nus = _mode_order(n_modes)
    k = (nus + 0.5) * math.pi / cfg.H
    return np.sin(k * cfg.z0) * np.sin(k * z)


def vertical_terms_dz(z, cfg, n_modes):
    """z-derivatives k sin(k z0) cos(k z) of ``vertical_terms``."""
    nus = _mode_order(n_modes)
    k = (nus + 0.5) * math.pi / cfg.H
    return k * np.sin(k * cfg.z0) * np.cos(k * z)


def _mode_order(n_modes):
    out = [0]
    for j in range(1, n_modes + 1):
        out += [-j, j]
    out.append(-n_modes - 1)
    return np.array(out, dtype=float)


def default_n_modes(cfg):
    """Smallest N with (N + 1/2) pi / H >= 20 max(|m|, k0)."""
    scale = 20 * max(abs(cfg.m), cfg.k0)
    return max(1, int(math.ceil(scale * cfg.H / math.pi - 0.5)))


def g_zeta_slab_truncated(p, s, cfg, n_modes=None, q=None):
    """-(1/(2 pi^2 H)) e^{i m z0} sum sin(k z0) sin(k z) I_nu over |nu + 1/2| <= N + 1/2.

    The error estimate is the size of the last mode pair added, the
    quadrature errors on top.
    """
    n_modes = default_n_modes(cfg) if n_modes is None else int(n_modes)
    if not 0 < p.z < cfg.H:
        raise DomainError(f"z = {p.z!r} outside (0, H)")
    pref = -np.exp(1j * cfg.m * cfg.z0) / (2 * math.pi ** 2 * cfg.H)
    total, qerr, last = 0j, 0.0, 0.0
    for nu in range(n_modes + 1):
        k = vertical_k(nu, cfg.H)
        inu = i_nu_quadrature(p, s, nu, cfg, q)
        term = 2 * pref * math.sin(k * cfg.z0) * math.sin(k * p.z) * inu.value
        total += term
        qerr += 2 * abs(pref) * inu.error
        last = abs(term)
    return Estimate(complex(total), float(last + qerr))


def g_zeta_slab_paired(R, theta, s, cfg, testfn, n_modes=None, q=None, coef_tol=1e-14):
    """<G_zeta(R, theta, .), psi>: the slab function paired in z with psi.

    Modes are added until the sine coefficients of psi fall below
    ``coef_tol`` relative, or up to ``n_modes`` if given.
    """
    p = SlabFieldPoint(R, theta, 0.5 * cfg.H)
    limit = n_modes if n_modes is not None else 200
    coef = sine_coefficients(testfn, cfg.H, limit)
    scale = np.abs(coef).max()
    pref = -np.exp(1j * cfg.m * cfg.z0) / (2 * math.pi ** 2 * cfg.H)
    total, qerr, last = 0j, 0.0, 0.0
    for nu in range(limit + 1):
        k = vertical_k(nu, cfg.H)
        if n_modes is None and abs(coef[nu]) < coef_tol * scale and nu > 2:
            break
        inu = i_nu_quadrature(p, s, nu, cfg, q)
        term = 2 * pref * math.sin(k * cfg.z0) * coef[nu] * inu.value
        total += term
        qerr += 2 * abs(pref * coef[nu]) * inu.error
        last = abs(term)
    return Estimate(complex(total), float(last + qerr))
