"""Gauss-Kronrod (7, 15) panels and a batched global-adaptive driver."""

from __future__ import annotations

import numpy as np

from .errors import QuadratureError

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
GAUSS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:3], [_WG[3]], _WG[:3][::-1]])

_EPS = np.finfo(float).eps


def panels(f, lo, hi, owner):
    """Kronrod sums and |K - G| error estimates for every panel."""
    half = 0.5 * (hi - lo)
    x = (0.5 * (hi + lo))[:, None] + half[:, None] * NODES[None, :]
    own = np.repeat(owner, NODES.size)
    fx = np.asarray(f(x.ravel(), own), dtype=complex).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise QuadratureError(f"integrand not finite at x = {bad!r}")
    k = half * (fx @ KRONROD)
    g = half * (fx @ GAUSS)
    return k, np.abs(k - g) + 50 * _EPS * half * (np.abs(fx) @ KRONROD)


def adaptive_batch(f, lo, hi, owner, n_owner, abs_tol, rel_tol, max_panels=2000000,
                   max_per_owner=4000):
    """Integrate many independent integrals at once.

    Each initial panel ``[lo[i], hi[i]]`` belongs to integral ``owner[i]``.
    ``f(x, owner)`` is evaluated on flat arrays.  Every round, the panels
    of unconverged integrals whose error exceeds their share of the
    target are bisected.  Returns (values, errors) of length ``n_owner``.
    """
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)
    owner = np.asarray(owner, int)
    val, err = panels(f, lo, hi, owner)
    while True:
        tot = np.bincount(owner, weights=val.real, minlength=n_owner) + 1j * np.bincount(
            owner, weights=val.imag, minlength=n_owner)
        tot_err = np.bincount(owner, weights=err, minlength=n_owner)
        count = np.bincount(owner, minlength=n_owner)
        target = np.maximum(abs_tol, rel_tol * np.abs(tot))
        open_ = tot_err > target
        if not open_.any():
            return tot, tot_err
        share = target[owner] / (2 * count[owner])
        refine = open_[owner] & (err > share)
        # guarantee progress for every open integral
        worst = np.zeros(n_owner)
        np.maximum.at(worst, owner, err)
        refine |= open_[owner] & (err >= worst[owner])
        if lo.size + refine.sum() > max_panels or (count[open_] > max_per_owner).any():
            o = int(np.argmax(np.where(open_, tot_err / target, 0)))
            raise QuadratureError(
                f"batched quadrature did not converge (integral {o}: error "
                f"{tot_err[o]:.3e} > target {target[o]:.3e}, {count[o]} panels)"
            )
        rl, rh, ro = lo[refine], hi[refine], owner[refine]
        mid = 0.5 * (rl + rh)
        nlo = np.concatenate([rl, mid])
        nhi = np.concatenate([mid, rh])
        nown = np.concatenate([ro, ro])
        nv, ne = panels(f, nlo, nhi, nown)
        keep = ~refine
        lo = np.concatenate([lo[keep], nlo])
        hi = np.concatenate([hi[keep], nhi])
        owner = np.concatenate([owner[keep], nown])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        order = np.lexsort((lo, owner))
        lo, hi, owner, val, err = lo[order], hi[order], owner[order], val[order], err[order]


def adaptive(f, a, b, abs_tol, rel_tol, points=(), max_panels=4000):
    """Single integral over [a, b] with optional interior breakpoints."""
    edges = sorted({float(a), float(b), *(float(p) for p in points if a < p < b)})
    lo = np.array(edges[:-1])
    hi = np.array(edges[1:])
    v, e = adaptive_batch(lambda x, o: f(x), lo, hi, np.zeros(lo.size, int), 1,
                          abs_tol, rel_tol, max_panels=max_panels, max_per_owner=max_panels)
    return complex(v[0]), float(e[0])
