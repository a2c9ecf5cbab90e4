"""Parameter sweeps, log-log slope fits, CSV output and the command line.

A sweep evaluates one target (``ei``, ``radial``, ``fg3`` or ``slab``) on
a grid of s values and truncation orders and records, for every (s, n),
the value, a reference value and the error estimate.  Rows come back
sorted by (s, n) and are written as CSV with 17 significant digits, so a
rerun with the same configuration reproduces the file byte for byte.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import complex_ei, fullspace, slab
from .errors import DomainError, FGError, QuadratureError
from .geometry import FieldPoint, make_direction
from .oracle import fullspace_cylindrical

TARGETS = ("fg3", "slab", "radial", "ei")
FIELDS = ("abs_err", "rel_err", "magnitude")
CSV_HEADER = ("s", "n", "value_re", "value_im", "ref_re", "ref_im", "abs_err", "rel_err", "err_est")

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VALIDATION = 0, 1, 2, 3


class SweepError(FGError):
    """A sweep point failed; carries the point and the rows finished so far."""

    def __init__(self, message, s, n, rows):
        super().__init__(message)
        self.s = s
        self.n = n
        self.rows = rows


@dataclass(frozen=True)
class SweepConfig:
    target: str
    s_values: tuple
    orders: tuple = ()
    fixed_params: dict = field(default_factory=dict)
    output_path: str | None = None

    def __post_init__(self):
        if self.target not in TARGETS:
            raise DomainError(f"unknown target {self.target!r}; expected one of {TARGETS}")
        s = tuple(float(v) for v in self.s_values)
        if not s or any(not v > 0 for v in s):
            raise DomainError("s_values must be non-empty and positive")
        if any(b <= a for a, b in zip(s, s[1:])):
            raise DomainError("s_values must be strictly increasing")
        object.__setattr__(self, "s_values", s)
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))


@dataclass(frozen=True)
class SweepRow:
    s: float
    n: int
    value: complex
    reference: complex
    abs_err: float
    rel_err: float
    err_est: float

    @classmethod
    def make(cls, s, n, value, reference, err_est):
        value, reference = complex(value), complex(reference)
        abs_err = abs(value - reference)
        rel_err = abs_err / abs(reference) if reference != 0 else math.nan
        return cls(float(s), int(n), value, reference, abs_err, rel_err, float(err_est))

    @property
    def magnitude(self):
        return abs(self.value)


def geometric_grid(start, stop, count):
    if count < 1 or not 0 < start <= stop:
        raise DomainError(f"bad grid {start}:{stop}:{count}")
    if count == 1:
        return (float(start),)
    return tuple(float(v) for v in np.geomspace(start, stop, int(count)))


def parse_grid(text):
    """``start:stop:count`` (geometric) or a comma-separated list."""
    if ":" in text:
        start, stop, count = text.split(":")
        return geometric_grid(float(start), float(stop), int(count))
    return tuple(float(v) for v in text.split(",") if v.strip())


def parse_complex_list(text):
    return np.array([complex(v.strip().replace(" ", "")) for v in text.split(",")])


# ---------------------------------------------------------------------------
# evaluators per target


def _fp(params, key, default=None, cast=float):
    if key in params:
        return cast(params[key])
    if default is None:
        raise DomainError(f"missing sweep parameter {key!r}")
    return default


def _eval_radial(params, s, n):
    p = fullspace.RadialKernelParams(
        R=_fp(params, "R"), s=s, alpha=_fp(params, "alpha", cast=complex), beta=_fp(params, "beta"))
    closed = fullspace.radial_integral_closed(p)
    if n == 0:
        ref, _ = fullspace.radial_integral_oracle(p)
        return closed, ref, fullspace.radial_integral_error(p)
    series, _ = fullspace.radial_integral_series(p, n)
    return series, closed, fullspace.radial_integral_error(p)


def _eval_ei(params, s, n):
    z = s * complex(np.exp(1j * _fp(params, "arg", 0.0)))
    ref = complex(np.exp(-z) * complex_ei.ei(z))
    val = complex_ei.ei_asymptotic_partial_sum(z, n)
    bound = complex_ei.asymptotic_remainder_bound(z, n) if abs(z) >= 2 * (n + 1) else math.inf
    return val, ref, bound


def _direction(params, s):
    zd = parse_complex_list(params.get("zeta_dot", "0.7071067811865476, 0.7071067811865476j, 0"))
    zd = zd / np.sqrt(np.sum(np.abs(zd) ** 2))
    return make_direction(zd, s, _fp(params, "k0", 0.0))


def _eval_fg3(params, s, n):
    p = FieldPoint(_fp(params, "R"), _fp(params, "psi"), _fp(params, "omega"))
    d = _direction(params, s)
    norm = params.get("normalization", "paper")
    g = fullspace.g_zeta_fullspace(p, d, normalization=norm)
    if n == 0:
        if d.k0 == 0:
            ref = fullspace_cylindrical(p.xyz, d.zeta_dot, s)
            ref = fullspace._normalize(ref, norm)
        else:
            ref = math.nan
        return g.value, ref, g.error
    if n != 1:
        raise DomainError("fg3 sweeps support orders 0 (value) and 1 (first term)")
    coeff = params.get("_coeff")
    ft = fullspace.first_term(p, d, coeff, normalization=norm)
    return ft, g.value, g.error


def slab_config_from(params):
    return slab.SlabConfig(
        H=_fp(params, "H", math.pi),
        k0=_fp(params, "k0", 1.0),
        m=_fp(params, "m", 0j, complex),
        ell_dot_I=_fp(params, "ell_dot_I", 0.3),
        source=(0.0, 0.0, _fp(params, "z0", 1.0)),
        alpha_convention=params.get("alpha_convention", "unit"),
        include_jacobian=params.get("include_jacobian", "false").lower() in ("1", "true", "yes"),
    )


def _eval_slab(params, s, n):
    cfg = slab_config_from(params)
    R, theta = _fp(params, "R"), _fp(params, "theta")
    if "bump_center" in params:
        psi = slab.Bump(_fp(params, "bump_center"), _fp(params, "bump_width"))
        g = slab.g_zeta_slab_paired(R, theta, s, cfg, psi)
        # leading prediction: the same mode sum with I_nu -> L/s
        L = slab.leading_angular(theta % (2 * math.pi), cfg).value
        pairing = slab.eigen_sum_pairing(psi, cfg, 200)
        ref = -np.exp(1j * cfg.m * cfg.z0) / (2 * math.pi ** 2 * cfg.H) * pairing * L / s
        return g.value, ref, g.error
    p = slab.SlabFieldPoint(R, theta, _fp(params, "z"), H=cfg.H)
    g = slab.g_zeta_slab_truncated(p, s, cfg, _fp(params, "n_modes", 0, int) or None)
    return g.value, math.nan, g.error


_EVALUATORS = {"radial": _eval_radial, "ei": _eval_ei, "fg3": _eval_fg3, "slab": _eval_slab}


def run_sweep(cfg):
    """One SweepRow per (s, n), ordered by (s, n); written to CSV if requested.

    A failing point raises SweepError naming (s, n); the rows finished
    before it are still written.
    """
    orders = cfg.orders or (0,)
    params = dict(cfg.fixed_params)
    if cfg.target == "fg3" and 1 in orders:
        # the angular coefficient does not depend on s
        p = FieldPoint(_fp(params, "R"), _fp(params, "psi"), _fp(params, "omega"))
        params["_coeff"] = fullspace.expansion_coefficient(p, _direction(params, 1.0)).value
    rows = []
    evaluate = _EVALUATORS[cfg.target]
    for s in cfg.s_values:
        for n in sorted(orders):
            try:
                value, ref, est = evaluate(params, s, n)
            except (FGError, ValueError, ArithmeticError) as exc:
                if cfg.output_path:
                    emit_csv(rows, cfg.output_path)
                raise SweepError(f"{cfg.target} sweep failed at s={s!r}, n={n}: {exc}",
                                 s, n, rows) from exc
            rows.append(SweepRow.make(s, n, value, ref, est))
    if cfg.output_path:
        emit_csv(rows, cfg.output_path)
    return rows


def fit_loglog_slope(rows, field="abs_err"):
    """Least-squares slope of log(field) against log(s) and its standard error."""
    if field not in FIELDS:
        raise DomainError(f"field must be one of {FIELDS}")
    if len(rows) < 2:
        raise DomainError("need at least two rows for a slope")
    s = np.array([r.s for r in rows], dtype=float)
    y = np.array([getattr(r, field) for r in rows], dtype=float)
    if not np.all(np.isfinite(y)) or np.any(y <= 0) or np.any(s <= 0):
        raise DomainError(f"{field} must be finite and positive for a log-log fit")
    x, ly = np.log(s), np.log(y)
    xm = x - x.mean()
    sxx = float(xm @ xm)
    if sxx == 0:
        raise DomainError("all s values coincide")
    slope = float(xm @ (ly - ly.mean())) / sxx
    if len(rows) == 2:
        return slope, 0.0
    resid = ly - ly.mean() - slope * xm
    stderr = math.sqrt(float(resid @ resid) / (len(rows) - 2) / sxx)
    return slope, stderr


def _fmt(v):
    return repr(float(v)) if not math.isfinite(v) else f"{v:.17g}"


def rows_to_csv_text(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(r.s), str(r.n), _fmt(r.value.real), _fmt(r.value.imag),
                    _fmt(r.reference.real), _fmt(r.reference.imag), _fmt(r.abs_err),
                    _fmt(r.rel_err), _fmt(r.err_est)])
    return buf.getvalue()


def emit_csv(rows, path):
    text = rows_to_csv_text(rows)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path):
    """Parse a file written by ``emit_csv`` back into SweepRows."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise DomainError(f"unexpected CSV header {header}")
        out = []
        for rec in reader:
            f = [float(v) for v in rec]
            out.append(SweepRow(f[0], int(rec[1]), complex(f[2], f[3]), complex(f[4], f[5]),
                                f[6], f[7], f[8]))
    return out


# ---------------------------------------------------------------------------
# configuration


def load_config(path=None):
    """The packaged defaults, overlaid with ``path`` if given."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp.read_string(resources.files("fgreen").joinpath("default.ini").read_text())
    if path:
        with open(path) as fh:
            cp.read_file(fh)
    return cp


def preset_names(cp):
    return [sec.split(".", 1)[1] for sec in cp.sections() if sec.startswith("preset.")]


def preset(cp, name):
    sec = f"preset.{name}"
    if not cp.has_section(sec):
        raise KeyError(f"no preset {name!r}; known: {', '.join(preset_names(cp))}")
    return dict(cp[sec])


def sweep_from_preset(params, overrides=None):
    params = dict(params)
    params.update({k: v for k, v in (overrides or {}).items() if v is not None})
    target = params.pop("target")
    grid = parse_grid(params.pop("s_grid"))
    orders = tuple(int(v) for v in params.pop("orders", "").split(",") if v.strip())
    out = params.pop("out", None)
    params.pop("check", None)
    return SweepConfig(target, grid, orders, params, out)


# ---------------------------------------------------------------------------
# command line


def _print_rows(rows, stream):
    stream.write(rows_to_csv_text(rows))


def _cmd_ei(args):
    z = complex(args.z)
    print(f"E1({z}) = {complex_ei.e1(z)!r}")
    print(f"Ei({z}) = {complex_ei.ei(z)!r}")
    if args.n is not None:
        print(f"exp(-z) Ei(z) partial sum n={args.n}: "
              f"{complex_ei.ei_asymptotic_partial_sum(z, args.n)!r}")
    return EXIT_OK


def _overrides(args):
    out = {}
    if getattr(args, "target", None):
        out["target"] = args.target
    if getattr(args, "s_grid", None):
        out["s_grid"] = args.s_grid
    if getattr(args, "orders", None) is not None:
        out["orders"] = args.orders
    if getattr(args, "out", None):
        out["out"] = args.out
    if getattr(args, "normalization", None):
        out["normalization"] = args.normalization
    if getattr(args, "alpha_convention", None):
        out["alpha_convention"] = args.alpha_convention
    return out


def _cmd_sweep(args, default_target):
    cp = load_config(args.config)
    name = args.preset or cp["defaults"].get(f"{default_target}_preset", "radial_n1")
    params = preset(cp, name)
    cfg = sweep_from_preset(params, _overrides(args))
    if default_target and cfg.target != default_target and not args.target:
        raise DomainError(f"preset {name!r} has target {cfg.target!r}, not {default_target!r}")
    rows = run_sweep(cfg)
    if not cfg.output_path:
        _print_rows(rows, sys.stdout)
    if args.fit and len(rows) >= 2:
        slope, err = fit_loglog_slope(rows, args.fit)
        print(f"slope({args.fit}) = {slope:.6f} +- {err:.2e}", file=sys.stderr)
    return EXIT_OK


def _cmd_fg3_eval(args):
    zd = parse_complex_list(args.zeta_dot)
    zd = zd / np.sqrt(np.sum(np.abs(zd) ** 2))
    d = make_direction(zd, args.s, args.k0)
    p = FieldPoint(args.R, args.psi, args.omega)
    g = fullspace.g_zeta_fullspace(p, d, normalization=args.normalization or "paper")
    print(f"G = {g.value!r}  (error estimate {g.error:.3e})")
    return EXIT_OK


def _cmd_slab_eval(args):
    cp = load_config(args.config)
    params = dict(cp["slab"])
    if args.alpha_convention:
        params["alpha_convention"] = args.alpha_convention
    cfg = slab_config_from(params)
    p = slab.SlabFieldPoint(args.R, args.theta, args.z, H=cfg.H)
    g = slab.g_zeta_slab_truncated(p, args.s, cfg, args.n_modes)
    print(f"G = {g.value!r}  (truncation/quadrature estimate {g.error:.3e})")
    return EXIT_OK


def _cmd_validate(args):
    from .validation import run_checks

    cp = load_config(args.config)
    results = run_checks(cp, names=args.only, seed=args.seed, stream=sys.stdout)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


def _cmd_report(args):
    from .validation import discrepancy_report

    cp = load_config(args.config)
    text, rows = discrepancy_report(cp, alpha_convention=args.alpha_convention)
    print(text)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("item", "parameter", "as_written_re", "as_written_im",
                        "rederived_re", "rederived_im", "abs_diff", "rel_diff", "verdict"))
            for r in rows:
                w.writerow(r)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="config file overlaid on the packaged defaults")
    common.add_argument("--normalization", choices=fullspace.NORMALIZATIONS)
    common.add_argument("--alpha-convention", choices=slab.ALPHA_CONVENTIONS)
    common.add_argument("--seed", type=int, default=0)

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--preset", help="named preset section of the config")
    sweep.add_argument("--target", choices=TARGETS)
    sweep.add_argument("--s-grid", help="start:stop:count (geometric) or a list")
    sweep.add_argument("--orders", help="comma-separated truncation orders")
    sweep.add_argument("--out", help="CSV output path (stdout if omitted)")
    sweep.add_argument("--fit", choices=FIELDS, help="print the log-log slope of this field")

    ap = argparse.ArgumentParser(prog="fgreen", description="Faddeev-Green function toolkit")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("ei", parents=[common], help="evaluate E1 and Ei")
    p.add_argument("z", help="complex argument, e.g. 1+2j")
    p.add_argument("-n", type=int, help="also print the asymptotic partial sum of order n")
    p.set_defaults(func=_cmd_ei)

    fg3 = sub.add_parser("fg3", help="full-space function").add_subparsers(dest="sub", required=True)
    p = fg3.add_parser("eval", parents=[common])
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--psi", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--k0", type=float, default=0.0)
    p.add_argument("--zeta-dot", default="1, 1j, 0", help="direction, normalised internally")
    p.set_defaults(func=_cmd_fg3_eval)
    p = fg3.add_parser("sweep", parents=[common, sweep])
    p.set_defaults(func=lambda a: _cmd_sweep(a, "fg3"))

    sl = sub.add_parser("slab", help="slab function").add_subparsers(dest="sub", required=True)
    p = sl.add_parser("eval", parents=[common])
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--n-modes", type=int)
    p.set_defaults(func=_cmd_slab_eval)
    p = sl.add_parser("sweep", parents=[common, sweep])
    p.set_defaults(func=lambda a: _cmd_sweep(a, "slab"))

    p = sub.add_parser("sweep", parents=[common, sweep], help="run any preset sweep")
    p.set_defaults(func=lambda a: _cmd_sweep(a, None))

    p = sub.add_parser("validate", parents=[common], help="run the acceptance checks")
    p.add_argument("--only", nargs="*", help="check names to run")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("report", parents=[common], help="discrepancy report")
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=_cmd_report)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except SweepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        cause = exc.__cause__
        return EXIT_DOMAIN if isinstance(cause, (DomainError, QuadratureError, ArithmeticError)) \
            else EXIT_USAGE
    except (DomainError, QuadratureError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (FGError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
