"""Brute-force reference integrators.

These are deliberately simple and slow: a vectorised Gauss-Kronrod (7, 15)
global-adaptive rule, contour rotation for oscillatory semi-infinite
integrals, and symmetric excision with Richardson extrapolation for
principal values on the circle.  Nothing here calls into the special
function code it is used to check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, QuadratureError

# Gauss-Kronrod 7-15 abscissae and weights on [-1, 1] (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (1, 3, 5 from each end, and 0)
GAUSS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:3], [_WG[3]], _WG[:3][::-1]])


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and geometric parameters shared by every quadrature."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 4000
    pv_epsilon: float = 1e-2
    contour_angle: float = math.pi / 4
    upper_cutoff: float = 10.0

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.pv_epsilon <= 0:
            raise ValueError("pv_epsilon must be positive")
        if not 0 < self.contour_angle < math.pi / 2:
            raise ValueError("contour_angle must lie in (0, pi/2)")
        if self.upper_cutoff <= 0:
            raise ValueError("upper_cutoff must be positive")

    def with_(self, **changes):
        return replace(self, **changes)


def _gk_panels(f, a, b):
    """Kronrod value and |K - G| on every panel [a_i, b_i] in one call."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=complex).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise QuadratureError(f"integrand not finite at x = {bad!r}")
    k = half * (fx @ KRONROD)
    g = half * (fx @ GAUSS)
    roundoff = 50 * np.finfo(float).eps * half * (np.abs(fx) @ KRONROD)
    return k, np.abs(k - g) + roundoff


def _adaptive_1d(f, a, b, q, points=()):
    edges = sorted({float(a), float(b), *(float(p) for p in points if a < p < b)})
    lo = np.array(edges[:-1])
    hi = np.array(edges[1:])
    val, err = _gk_panels(f, lo, hi)
    n_evals = lo.size
    while True:
        total = val.sum()
        total_err = err.sum()
        target = max(q.abs_tol, q.rel_tol * abs(total))
        if total_err <= target:
            return total, float(total_err)
        refine = err > target / (2 * lo.size)
        if not refine.any():
            refine = err >= err.max()
        n_evals += 2 * int(refine.sum())
        if lo.size + int(refine.sum()) > q.max_subdivisions:
            raise QuadratureError(
                f"adaptive quadrature on [{a}, {b}] exhausted {q.max_subdivisions} "
                f"subdivisions; error estimate {total_err:.3e} > target {target:.3e}"
            )
        rl, rh = lo[refine], hi[refine]
        mid = 0.5 * (rl + rh)
        new_lo = np.concatenate([rl, mid])
        new_hi = np.concatenate([mid, rh])
        nv, ne = _gk_panels(f, new_lo, new_hi)
        keep = ~refine
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        order = np.lexsort((hi, lo))
        lo, hi, val, err = lo[order], hi[order], val[order], err[order]


def _semi_infinite(f, a, q, points=()):
    """int_a^inf f: direct up to a + upper_cutoff, then t = c + u/(1-u)."""
    c = a + q.upper_cutoff
    head, e1 = _adaptive_1d(f, a, c, q, [p for p in points if a < p < c])

    def tail(u):
        return f(c + u / (1.0 - u)) / (1.0 - u) ** 2

    rest, e2 = _adaptive_1d(tail, 0.0, 1.0, q)
    return head + rest, e1 + e2


def integrate_adaptive(integrand, domain, q=None, points=()):
    """Global adaptive Gauss-Kronrod quadrature.

    Parameters
    ----------
    integrand : callable
        Vectorised: takes an ndarray of abscissae (or two arrays for a
        rectangle) and returns complex values of the same shape.
    domain : (a, b) or ((a, b), (c, d))
        An interval, possibly with ``b = inf``, or a rectangle integrated
        as an iterated integral (inner variable second).
    q : QuadratureSpec
    points : sequence of floats
        Interior breakpoints for the (outer) interval.

    Returns
    -------
    value, err_est
    """
    q = q or QuadratureSpec()
    first = domain[0]
    if np.ndim(first) == 0:
        a, b = float(domain[0]), float(domain[1])
        if math.isinf(b):
            return _semi_infinite(integrand, a, q, points)
        return _adaptive_1d(integrand, a, b, q, points)

    (a, b), (c, d) = domain
    inner_errs = []

    def outer(xs):
        out = np.empty(xs.shape, dtype=complex)
        for i, x in enumerate(xs):
            v, e = _adaptive_1d(lambda y: integrand(np.full_like(y, x), y), c, d, q)
            out[i] = v
            inner_errs.append(e)
        return out

    value, err = _adaptive_1d(outer, a, b, q, points)
    # inner errors accumulate with the outer weights; bound crudely by length
    return value, float(err + (b - a) * max(inner_errs, default=0.0))


def integrate_semiinfinite_oscillatory(integrand, osc_rate, q=None, poles=(), residues=None):
    """int_0^inf integrand(r) dr for an integrand oscillating like exp(i osc_rate r).

    The ray is rotated to r = t exp(i sgn(osc_rate) gamma), where the
    oscillation becomes exponential decay.  ``poles`` lists singularities
    of the integrand in the complex r-plane.  Without ``residues`` gamma is
    shrunk so that the rotation never sweeps across a pole, which keeps
    the deformation exact but can make the decay slow.  With ``residues``
    (the residue of the integrand at each pole) gamma is chosen in
    [pi/8, 3pi/8] as far as possible from every pole and the residues of
    the poles swept over are added back.
    """
    q = q or QuadratureSpec()
    if osc_rate == 0 or not math.isfinite(osc_rate):
        raise DomainError("oscillation rate must be finite and non-zero")
    sigma = 1.0 if osc_rate > 0 else -1.0
    angles = []
    for p in poles:
        p = complex(p)
        ang = math.atan2(p.imag, p.real)
        if p != 0 and abs(ang) < 1e-12:
            raise DomainError(f"pole {p!r} lies on the integration ray")
        angles.append(ang * sigma)
    gamma = q.contour_angle
    if residues is None:
        for ang in angles:
            if ang > 0:
                gamma = min(gamma, 0.5 * ang)
    else:
        cands = np.linspace(math.pi / 8, 3 * math.pi / 8, 41)
        gap = np.array([min([abs(c - a) for a in angles] + [math.pi]) for c in cands])
        gamma = float(cands[np.argmax(gap)])
    direction = complex(math.cos(gamma), sigma * math.sin(gamma))
    decay = abs(osc_rate) * math.sin(gamma)
    # put the cutoff many decay lengths out; the tail map handles the rest
    qq = q.with_(upper_cutoff=max(q.upper_cutoff, 40.0 / decay) if decay > 0 else q.upper_cutoff,
                 max_subdivisions=max(q.max_subdivisions, 20000))

    def rotated(t):
        return integrand(t * direction) * direction

    val, err = integrate_adaptive(rotated, (0.0, math.inf), qq)
    if residues is not None:
        for ang, res in zip(angles, residues):
            if 0 < ang < gamma:
                # real axis minus rotated ray encloses the pole
                val += sigma * 2j * math.pi * complex(res)
    return val, err


def integrate_pv_circle(integrand, singularities, q=None):
    """Principal value of int_0^{2 pi} integrand(phi) d phi.

    The integrand has simple poles at ``singularities``.  Arcs of radius
    eps, eps/2 and eps/4 around each pole are excised; the excised
    integrals behave like P + c1 eps + c3 eps^3 + ..., and two Richardson
    steps remove the first two error terms.  ``err_est`` is the change
    made by the last extrapolation step plus the quadrature error.
    """
    q = q or QuadratureSpec()
    eps = q.pv_epsilon
    sing = sorted({float(s) % (2 * math.pi) for s in singularities})
    if not sing:
        return integrate_adaptive(integrand, (0.0, 2 * math.pi), q)
    gaps = np.diff(sing + [sing[0] + 2 * math.pi])
    if gaps.min() <= 4 * eps:
        raise DomainError(
            f"singularities separated by {gaps.min():.3g} <= 4*pv_epsilon = {4 * eps:.3g}"
        )

    def excised(e):
        total, err = 0j, 0.0
        for s0, gap in zip(sing, gaps):
            v, er = _adaptive_1d(integrand, s0 + e, s0 + gap - e, q)
            total += v
            err += er
        return total, err

    p1, e1 = excised(eps)
    p2, e2 = excised(eps / 2)
    p3, e3 = excised(eps / 4)
    r1 = 2 * p2 - p1
    r2 = 2 * p3 - p2
    value = (8 * r2 - r1) / 7
    return value, float(abs(value - r2) + 3 * (e1 + e2 + e3))


def fullspace_cylindrical(x, zeta_dot, s):
    """G_zeta(x) for zeta . zeta = 0 by residues in the Im-zeta direction.

    Write zeta = kappa (a + i b) with a, b orthonormal and kappa = s/sqrt(2),
    and x = x1 a + x2 b + y.  Integrating the Fourier variable along b by
    residues leaves a radial Bessel integral,

        x2 >= 0:  G = 2 pi^2 exp(-i kappa x1) int_kappa^inf exp(-x2 (rho - kappa)) J0(rho |y|) d rho
        x2 <  0:  G = 2 pi^2 exp(-i kappa x1) (exp(-|x2| kappa)/R
                      - int_0^kappa exp(-|x2| (kappa - rho)) J0(rho |y|) d rho)

    in the convention G = int exp(i x . xi) / (xi^2 + 2 zeta . xi) d^3 xi.
    Uses scipy's J0 and QUADPACK; shares no code with the library paths.
    """
    from scipy import integrate, special

    x = np.asarray(x, dtype=float)
    zd = np.asarray(zeta_dot, dtype=complex)
    a = math.sqrt(2) * zd.real
    b = math.sqrt(2) * zd.imag
    if abs(a @ a - 1) > 1e-10 or abs(b @ b - 1) > 1e-10 or abs(a @ b) > 1e-10:
        raise DomainError("zeta_dot must be (a + i b)/sqrt(2) with a, b orthonormal")
    kappa = s / math.sqrt(2)
    x1, x2 = float(x @ a), float(x @ b)
    R = float(np.linalg.norm(x))
    rho_y = math.sqrt(max(R * R - x1 * x1 - x2 * x2, 0.0) + x1 * x1)
    opts = dict(limit=20000, epsabs=1e-14, epsrel=1e-12)

    def j0(r):
        return special.j0(r * rho_y)

    if x2 < 0:
        h = -x2
        disc = integrate.quad(lambda r: math.exp(-h * (kappa - r)) * j0(r), 0.0, kappa, **opts)[0]
        radial = math.exp(-h * kappa) / R - disc
    elif x2 == 0:
        if rho_y == 0:
            raise DomainError("x = 0")
        radial = (1.0 - integrate.quad(special.j0, 0.0, kappa * rho_y, **opts)[0]) / rho_y
    elif x2 * kappa < 5:
        near = integrate.quad(lambda r: math.exp(-x2 * r) * j0(r), 0.0, kappa, **opts)[0]
        radial = math.exp(x2 * kappa) * (1.0 / R - near)
    else:
        top = kappa + 40.0 / x2
        radial = integrate.quad(lambda r: math.exp(-x2 * (r - kappa)) * j0(r), kappa, top, **opts)[0]
    return complex(2 * math.pi ** 2 * np.exp(-1j * kappa * x1) * radial)


def e1_quadrature(z, q=None):
    """E1(z) = exp(-z) int_0^inf exp(-t)/(z + t) dt, valid for |arg z| < pi."""
    q = q or QuadratureSpec(abs_tol=1e-300, rel_tol=1e-13)
    z = complex(z)
    if z == 0 or (z.real < 0 and z.imag == 0):
        raise DomainError(f"E1 oracle needs |arg z| < pi, got {z!r}")
    # the integrand peaks near t = -Re z when z hugs the negative axis
    pts = [-z.real] if z.real < 0 else []
    val, err = integrate_adaptive(lambda t: np.exp(-t) / (z + t), (0.0, math.inf),
                                  q.with_(upper_cutoff=max(40.0, 2 - z.real)), points=pts)
    ez = np.exp(-z)
    return complex(ez * val), float(abs(ez) * err)
