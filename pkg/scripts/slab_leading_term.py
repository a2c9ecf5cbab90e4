"""Leading large-s term of the slab angular integral I_nu.

Compares s I_nu(R, theta) from quadrature of the closed-form M_nu with the
re-derived limit L(theta) and with the printed angular factor, over an s
grid and several (R, nu).  The correction s I_nu - L is fitted on a
log-log scale.

    python3 scripts/slab_leading_term.py --theta 1.0
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

import numpy as np

from fgreen.harness import SweepRow, fit_loglog_slope, geometric_grid
from fgreen.slab import (SlabConfig, SlabFieldPoint, g_angular, i_nu_quadrature,
                         leading_angular)


@dataclass
class LeadingConfig:
    theta: float = 1.0
    radii: tuple = (0.7, 1.0, 1.5)
    nus: tuple = (0, 2)
    s_start: float = 25.0
    s_stop: float = 800.0
    count: int = 6
    slab: SlabConfig = field(default_factory=SlabConfig)


def run(cfg):
    L = leading_angular(cfg.theta, cfg.slab).value
    print(f"theta = {cfg.theta:g}: L = {L:.10f}")
    grid = geometric_grid(cfg.s_start, cfg.s_stop, cfg.count)
    for R in cfg.radii:
        printed = g_angular(R, cfg.theta, cfg.slab.ell_dot_I)
        for nu in cfg.nus:
            p = SlabFieldPoint(R, cfg.theta, 1.0)
            rows = [SweepRow.make(s, nu, s * i_nu_quadrature(p, s, nu, cfg.slab).value, L, 0.0)
                    for s in grid]
            slope, err = fit_loglog_slope(rows, "abs_err")
            last = rows[-1]
            print(f"R={R:g} nu={nu}: s I_nu(s={last.s:g}) = {last.value:.6f}, "
                  f"rel diff to L {last.rel_err:.2e}, correction slope {slope:+.2f} +- {err:.2f}; "
                  f"printed factor {printed:.4f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=LeadingConfig.theta)
    ap.add_argument("--ell-dot-i", type=float, default=0.3)
    args = ap.parse_args()
    run(LeadingConfig(theta=args.theta, slab=SlabConfig(ell_dot_I=args.ell_dot_i)))


if __name__ == "__main__":
    main()
