"""Exponential integral E1 for complex argument.

E1(z) = int_z^inf exp(-u)/u du on the plane cut along the negative real
axis, and Ei(z) = -E1(-z).  Three evaluation regions are used:

* power series  E1 = -gamma - log z - sum_{k>=1} (-z)^k / (k k!)
  for |z| <= 4, and in the wedge hugging the cut where |z| + Re z <= 4
  (the terms do not cancel there) up to |z| <= 60;
* modified-Lentz continued fraction elsewhere;
* optimally truncated asymptotic series for |z| > 60 inside the wedge,
  where the continued fraction stalls and the series would overflow.
  The omitted Stokes term is below exp(-56) relative.

All evaluators are vectorised over numpy arrays.  ``e1_scaled`` returns
exp(z) E1(z) and accepts an unwrapped argument selecting the sheet of the
logarithm, which the radial kernels need when a pole crosses the
integration ray.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError, OrderError

EULER_GAMMA = 0.57721566490153286060651209008240243

SERIES_RADIUS = 4.0
WEDGE_WIDTH = 4.0
WEDGE_SERIES_MAX = 60.0
CF_MAX_ITER = 5000
MAX_ASYMPTOTIC_ORDER = 20
CUT_TOL = 1e-14

_EPS = np.finfo(float).eps


class Estimate(NamedTuple):
    """A value with an absolute error estimate."""

    value: complex
    error: float


def _series(z, log_z):
    """E1 by power series, with the logarithm supplied by the caller."""
    flat = z.ravel()
    total = np.zeros(flat.size, dtype=complex)
    scale = np.zeros(flat.size)
    nterms = np.zeros(flat.size)
    # iterate on the shrinking set of unconverged entries only
    idx = np.arange(flat.size)
    zz = flat
    term = np.ones(flat.size, dtype=complex)
    tot = np.zeros(flat.size, dtype=complex)
    sc = np.zeros(flat.size)
    k = 0
    while idx.size and k < 4000:
        k += 1
        term = term * (-zz) / k
        contrib = term / k
        tot = tot - contrib
        sc = np.maximum(sc, np.abs(contrib))
        done = np.abs(contrib) <= _EPS * 0.25 * np.abs(tot)
        if done.any():
            total[idx[done]], scale[idx[done]], nterms[idx[done]] = tot[done], sc[done], k
            keep = ~done
            idx, zz, term, tot, sc = idx[keep], zz[keep], term[keep], tot[keep], sc[keep]
    total[idx], scale[idx], nterms[idx] = tot, sc, k
    value = -EULER_GAMMA - log_z + total.reshape(z.shape)
    err = 8 * _EPS * (nterms * scale).reshape(z.shape) + 8 * _EPS * np.abs(value)
    return value, err


def _continued_fraction_scaled(z):
    """exp(z) E1(z) from the even contraction of the Stieltjes fraction.

    exp(z) E1(z) = 1/(z+1-) 1/(z+3-) 4/(z+5-) 9/(z+7-) ...
    evaluated with the modified Lentz algorithm.
    """
    tiny = 1e-300
    flat = z.ravel()
    h_out = np.empty(flat.size, dtype=complex)
    err_out = np.empty(flat.size)
    idx = np.arange(flat.size)
    b = flat + 1.0
    c = np.full(flat.size, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, CF_MAX_ITER):
        an = -float(i * i)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = b + an / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = c * d
        h = h * delta
        done = np.abs(delta - 1.0) <= _EPS
        if done.any() or i == CF_MAX_ITER - 1:
            fin = done if i < CF_MAX_ITER - 1 else np.ones_like(done)
            h_out[idx[fin]] = h[fin]
            err_out[idx[fin]] = (4 * _EPS * math.sqrt(i) + np.abs(delta[fin] - 1.0)) * np.abs(h[fin])
            keep = ~fin
            idx, b, c, d, h = idx[keep], b[keep], c[keep], d[keep], h[keep]
            if not idx.size:
                break
    return h_out.reshape(z.shape), err_out.reshape(z.shape)


@np.errstate(over="ignore", invalid="ignore")
def _asymptotic_scaled(z):
    """exp(z) E1(z) ~ sum (-1)^k k!/z^(k+1), optimally truncated."""
    total = np.zeros_like(z)
    term = 1.0 / z
    nmax = int(np.max(np.abs(z))) + 1
    prev = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    err = np.zeros(z.shape)
    for k in range(nmax + 1):
        mag = np.abs(term)
        grow = mag >= prev
        stop = active & grow
        err = np.where(stop, mag, err)
        active &= ~grow
        total = np.where(active, total + term, total)
        prev = mag
        term = term * (-(k + 1)) / z
        if not active.any():
            break
    err = np.where(active, np.abs(term), err) + _EPS * np.abs(total)
    return total, err


def _regions(z):
    az = np.abs(z)
    near_cut = (az + z.real) <= WEDGE_WIDTH
    series = (az <= SERIES_RADIUS) | (near_cut & (az <= WEDGE_SERIES_MAX))
    asym = near_cut & ~series
    cf = ~series & ~asym
    return series, cf, asym


def _scaled_with_error(z, theta):
    """exp(z) E1(z) on the sheet where arg z = theta (arrays)."""
    out = np.empty_like(z)
    err = np.empty(z.shape)
    series, cf, asym = _regions(z)
    if series.any():
        zs = z[series]
        log_z = np.log(np.abs(zs)) + 1j * theta[series]
        v, e = _series(zs, log_z)
        ez = np.exp(zs)
        out[series] = ez * v
        err[series] = np.abs(ez) * e
    for mask, fn in ((cf, _continued_fraction_scaled), (asym, _asymptotic_scaled)):
        if not mask.any():
            continue
        zs = z[mask]
        v, e = fn(zs)
        # sheet correction: E1 continues as E1 - i (theta - Arg z)
        shift = theta[mask] - np.angle(zs)
        if mask is asym:
            # on either side of the cut the Stokes term is negligible
            shift = np.zeros_like(shift)
        kk = np.round(shift / (2 * np.pi))
        jump = kk != 0
        if jump.any():
            v = v.copy()
            v[jump] -= 2j * np.pi * kk[jump] * np.exp(zs[jump])
        out[mask] = v
        err[mask] = e
    return out, err


def _as_array(z):
    return np.atleast_1d(np.asarray(z, dtype=complex))


def _check_principal(z):
    bad_zero = z == 0
    on_cut = (z.real < 0) & (np.abs(z.imag) <= CUT_TOL * np.abs(z))
    if bad_zero.any():
        raise DomainError("E1 is singular at z = 0")
    if on_cut.any():
        raise DomainError(f"E1 argument on the branch cut: {z[on_cut][0]!r}")



def e1_estimate(z):
    """E1(z) together with an absolute error estimate.

    Raises DomainError for z = 0 or z on the negative real axis.
    """
    scalar = np.ndim(z) == 0
    za = _as_array(z)
    _check_principal(za)
    scaled, err = _scaled_with_error(za, np.angle(za))
    emz = np.exp(-za)
    value = emz * scaled
    error = np.abs(emz) * err
    if scalar:
        return Estimate(complex(value[0]), float(error[0]))
    return Estimate(value, error)


def e1(z):
    """Principal-branch exponential integral E1(z)."""
    return e1_estimate(z).value


def e1_scaled(z, arg=None):
    """exp(z) E1(z), optionally continued to the sheet where arg z = ``arg``.

    ``arg`` is the unwrapped argument of ``z``; ``None`` selects the
    principal sheet.  Points exactly on the cut are accepted when ``arg``
    says which side they belong to.
    """
    scalar = np.ndim(z) == 0 and (arg is None or np.ndim(arg) == 0)
    za = _as_array(z)
    if arg is None:
        _check_principal(za)
        theta = np.angle(za)
    else:
        theta = np.broadcast_to(np.asarray(arg, dtype=float), za.shape).copy()
        za = np.broadcast_to(za, theta.shape).copy()
        if (za == 0).any():
            raise DomainError("E1 is singular at z = 0")
    value, _ = _scaled_with_error(za, theta)
    return complex(value[0]) if scalar else value


def ei(z):
    """Ei(z) = -E1(-z); on the positive real axis the principal value."""
    scalar = np.ndim(z) == 0
    za = _as_array(z)
    w = -za
    pos_real = (za.real > 0) & (np.abs(za.imag) <= CUT_TOL * np.abs(za))
    out = np.empty_like(za)
    if (~pos_real).any():
        out[~pos_real] = -e1(w[~pos_real])
    if pos_real.any():
        x = za[pos_real].real.astype(complex)
        # mean of the two sides of the cut: E1(-x -+ i0) = -Ei(x) +- i pi
        upper = e1_scaled(-x, np.full(x.shape, np.pi)) * np.exp(x)
        out[pos_real] = -upper.real
    return complex(out[0]) if scalar else out


def _check_order(n, max_order):
    if int(n) != n or n < 0:
        raise OrderError(f"truncation order must be a non-negative integer, got {n!r}")
    if n > max_order:
        raise OrderError(f"order {n} exceeds the configured maximum {max_order}")


def ei_asymptotic_partial_sum(z, n, delta=0.1, max_order=MAX_ASYMPTOTIC_ORDER):
    """sum_{k=0}^{n} k!/z^(k+1), the expansion of exp(-z) Ei(z).

    Requires |arg(-z)| <= pi - delta.  The positive real axis, where Ei is
    the classical principal value, is admitted as the two-sided limit.
    """
    _check_order(n, max_order)
    z = complex(z)
    if z == 0:
        raise DomainError("asymptotic expansion undefined at z = 0")
    on_pos_axis = z.real > 0 and abs(z.imag) <= CUT_TOL * abs(z)
    if not on_pos_axis and abs(np.angle(-z)) > np.pi - delta:
        raise DomainError(
            f"|arg(-z)| = {abs(np.angle(-z)):.6g} exceeds pi - delta = {np.pi - delta:.6g}"
        )
    total = 0j
    term = 1.0 / z
    for k in range(n + 1):
        total += term
        term *= (k + 1) / z
    return total


def asymptotic_remainder_bound(z, n, slack=2.0):
    """C (n+1)!/|z|^(n+2), the bound used for |z| >= 2(n+1)."""
    return slack * math.factorial(n + 1) / abs(z) ** (n + 2)


def optimal_truncation(z):
    """Truncation order n* = floor(|z|) - 1 (smallest term of the series)."""
    return max(int(math.floor(abs(z))) - 1, 0)
