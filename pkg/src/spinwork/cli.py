"""Command line sweeps, optimisation, figure presets and oracle checks.

Examples::

    spinwork work2 --sz0 -0.8 --out sweep.csv
    spinwork echo3 --omega0 8 --disorder-var 100 --ts 1000 --gamma 0.1
    spinwork preset fig1
    spinwork oracle-verify --modes 0.3:1,0.4:1.7 --no-trend

Parameters come from three layers, later ones winning: preset values, a
``key = value`` config file (``--config``), then command line flags.  Every
table is CSV with a header row, ``,`` separators, LF line endings and 17
significant digits, so identical inputs give identical bytes.

Exit status is 0 on success, 1 when a second-law check or an oracle check
fails, and 2 for invalid configuration.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, fields, replace

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import kernels as _k
from .disorder import DisorderModel, averaged_two_pulse_work, ensemble_moments
from .errors import (CutoffTooSmall, DegenerateTemperatures, DimensionTooLarge, InvalidInput,
                     NotUnitary, ParseError, QuadratureNotConverged, RestrictionViolated,
                     UnsupportedSpectrum)
from .kernels import KernelSet, Ohmic, discretize_ohmic
from .pulses import from_euler, parse_pulse
from .thermo import assert_restrictions, efficiency
from .work import EnsembleMoments, SystemConfig, work_echo, work_two_pulse

__all__ = ["RunConfig", "PRESETS", "load_config", "tau_grid", "main"]

CONFIG_ERRORS = (InvalidInput, ParseError, NotUnitary, UnsupportedSpectrum, CutoffTooSmall,
                 DimensionTooLarge, OSError)


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs.  Units: ``hbar = k_B = 1``."""

    T: float = 10.0
    T_S: float | None = None
    sz0: float | None = None
    eps: float = 0.01
    omega0: float | None = None
    gamma: float = 1.0
    cutoff: float = 1.0
    d: float = 0.0
    pulse1: str = "rot:90:y"
    pulse2: str = "rot:90:x"
    tau_start: float | None = None
    tau_stop: float = 20.0
    tau_count: int = 2000
    tau_scale: str = "linear"
    prep_time: float | None = None
    discrete: int = 0
    sequence: str = "two-pulse"
    max_iter: int = 4000
    xatol: float = 1e-8
    restarts: int = 4
    seed: int = 0
    modes: str | None = None
    cutoffs: str | None = None
    tol: float = 1e-8

    def __post_init__(self):
        if self.tau_count < 1:
            raise InvalidInput("tau_count must be >= 1")
        if not self.tau_stop > 0:
            raise InvalidInput("tau_stop must be > 0")
        if self.tau_scale not in ("linear", "log"):
            raise InvalidInput("tau_scale must be 'linear' or 'log'")
        if self.sequence not in ("two-pulse", "echo"):
            raise InvalidInput("sequence must be 'two-pulse' or 'echo'")
        for name in ("xatol", "tol"):
            if not getattr(self, name) > 0:
                raise InvalidInput(f"{name} must be > 0")
        if self.max_iter < 1 or self.restarts < 0 or self.discrete < 0:
            raise InvalidInput("max_iter must be >= 1; restarts and discrete >= 0")


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key, text):
    kind = _TYPES[key]
    if isinstance(text, str):
        text = text.strip()
        if "None" in kind and text.lower() in ("none", ""):
            return None
    try:
        if kind.startswith("float"):
            return float(text)
        if kind.startswith("int"):
            return int(text)
    except ValueError:
        raise InvalidInput(f"bad value {text!r} for {key}") from None
    return str(text)


def _key(raw):
    key = raw.strip().replace("-", "_")
    aliases = {"ts": "T_S", "t_s": "T_S", "t": "T", "disorder_var": "d"}
    key = aliases.get(key.lower(), key)
    if key not in _TYPES:
        raise InvalidInput(f"unknown configuration key {raw.strip()!r}")
    return key


def load_config(path) -> dict:
    """Read a ``key = value`` file.  ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidInput(f"{path}:{n}: expected 'key = value'")
            k, v = line.split("=", 1)
            k = _key(k)
            out[k] = _convert(k, v)
    return out


def tau_grid(cfg: RunConfig, include_zero=False):
    """The sweep grid.

    Without ``tau_start`` a linear grid is ``stop * k / count`` for
    ``k = 1..count`` (``k = 0..count-1`` scaled to ``[0, stop]`` when
    ``include_zero``), and a log grid starts at ``stop / count``.
    """
    n, stop, start = cfg.tau_count, cfg.tau_stop, cfg.tau_start
    if cfg.tau_scale == "log":
        start = stop / n if start is None else start
        if not start > 0:
            raise InvalidInput("log grids need tau_start > 0")
        return np.geomspace(start, stop, n)
    if start is None:
        if include_zero:
            return np.linspace(0.0, stop, n)
        return stop * np.arange(1, n + 1) / n
    if not start < stop and n > 1:
        raise InvalidInput("tau_start must be below tau_stop")
    return np.linspace(start, stop, n)


# --- physics setup ---------------------------------------------------------

def _kernels(cfg):
    spec = Ohmic(cfg.gamma, cfg.cutoff)
    if cfg.discrete:
        spec = discretize_ohmic(spec, cfg.discrete)
    return KernelSet(spec, cfg.T)


def _system(cfg, ks, gap):
    if cfg.T_S is not None and cfg.sz0 is not None:
        raise InvalidInput("give either T_S or sz0, not both")
    if cfg.T_S is not None:
        return SystemConfig.thermal(gap, ks, cfg.T_S)
    return SystemConfig(gap, ks, -0.8 if cfg.sz0 is None else cfg.sz0)


def _thermo(cfg, sys_, b):
    """Efficiency columns, asserting the second-law slacks when they apply.

    The slacks are theorems only for a correlated start at a positive spin
    temperature; other runs report them without the check.
    """
    T_S = sys_.spin_temperature
    if sys_.sz0 > 0:   # population inversion: no temperature ordering
        nan = np.full(np.shape(b.total), np.nan)
        return nan, math.nan, nan, nan
    if cfg.prep_time is None:
        assert_restrictions(b, cfg.T, T_S)
    e = efficiency(b, cfg.T, T_S)
    return e.eta, e.carnot, e.slack_spin, e.slack_bath


def _echo_setup(cfg, ks):
    gap = cfg.eps if cfg.omega0 is None else cfg.omega0
    if cfg.d > 0:
        if cfg.T_S is None:
            raise InvalidInput("a disordered ensemble needs the spin temperature T_S")
        dm = DisorderModel(gap, cfg.d, cfg.T_S)
        return SystemConfig.thermal(gap, ks, cfg.T_S), ensemble_moments(dm), dm
    sys_ = _system(cfg, ks, gap)
    return sys_, EnsembleMoments.single(sys_), None


# --- tables -----------------------------------------------------------------

TWO_PULSE_COLUMNS = ["tau", "w", "W", "W1", "W2", "dH_S", "dH_IB", "eta", "carnot",
                     "slack1", "slack2", "power"]
ECHO_COLUMNS = ["tau", "w", "W", "W1", "W_pi", "W2", "dH_S", "dH_IB", "eta", "carnot",
                "slack1", "slack2", "power", "w_two_pulse"]
KERNEL_COLUMNS = ["t", "K", "xi", "xi_dot", "G", "F"]
OPTIMIZE_COLUMNS = ["stage", "tau", "W", "w", "eta", "carnot", "pulse1", "pulse2", "extraction"]


def _columns(*cols):
    return [np.broadcast_to(np.asarray(c, dtype=float), np.shape(cols[0])) for c in cols]


def cmd_kernels(cfg: RunConfig):
    ks = _kernels(cfg)
    t = tau_grid(cfg, include_zero=True)
    cols = _columns(t, _k.noise_kernel(ks, t), _k.decoherence(ks, t),
                    _k.decoherence_rate(ks, t), _k.spin_bath_kernel(ks, t),
                    _k.phase_kernel(ks, t))
    return KERNEL_COLUMNS, list(zip(*cols))


def cmd_work2(cfg: RunConfig):
    ks = _kernels(cfg)
    sys_ = _system(cfg, ks, cfg.eps)
    tau = tau_grid(cfg)
    b = work_two_pulse(sys_, parse_pulse(cfg.pulse1), parse_pulse(cfg.pulse2), tau, cfg.prep_time)
    eta, bound, s1, s2 = _thermo(cfg, sys_, b)
    cols = _columns(tau, b.w, b.total, *b.per_pulse, b.spin, b.bath_int, eta, bound, s1, s2,
                    np.abs(b.total) / tau)
    return TWO_PULSE_COLUMNS, list(zip(*cols))


def cmd_echo3(cfg: RunConfig):
    """Echo sweep plus, for comparison, the plain two-pulse work at ``2 tau``.

    Power divides by the whole sequence length ``2 tau``.
    """
    ks = _kernels(cfg)
    sys_, moments, dm = _echo_setup(cfg, ks)
    p1, p2 = parse_pulse(cfg.pulse1), parse_pulse(cfg.pulse2)
    tau = tau_grid(cfg)
    b = work_echo(sys_, p1, p2, tau, cfg.prep_time, moments)
    if dm is None:
        plain = work_two_pulse(sys_, p1, p2, 2 * tau, cfg.prep_time)
    else:
        plain = averaged_two_pulse_work(dm, ks, p1, p2, 2 * tau, cfg.prep_time)
    eta, bound, s1, s2 = _thermo(cfg, sys_, b)
    cols = _columns(tau, b.w, b.total, *b.per_pulse, b.spin, b.bath_int, eta, bound, s1, s2,
                    np.abs(b.total) / (2 * tau), plain.w)
    return ECHO_COLUMNS, list(zip(*cols))


@dataclass(frozen=True)
class Optimum:
    stage: str
    tau: float
    work: float
    w: float
    eta: float
    carnot: float
    pulse1: str
    pulse2: str

    @property
    def extraction(self):
        return self.work < 0


def optimize(cfg: RunConfig):
    """Baseline grid minimum, golden-section refinement over ``tau``, then a
    Nelder-Mead search over both pulses' three angles together with ``log tau``.

    Each stage starts from the previous one and keeps it if it cannot do
    better, so ``full <= tau <= baseline`` always holds.  Restarts perturb
    the best point with noise drawn from ``cfg.seed``.
    """
    ks = _kernels(cfg)
    echo = cfg.sequence == "echo"
    if echo:
        sys_, moments, _ = _echo_setup(cfg, ks)
        run = lambda a, b, tau: work_echo(sys_, a, b, tau, cfg.prep_time, moments)
    else:
        sys_ = _system(cfg, ks, cfg.eps)
        run = lambda a, b, tau: work_two_pulse(sys_, a, b, tau, cfg.prep_time)
    p1, p2 = parse_pulse(cfg.pulse1), parse_pulse(cfg.pulse2)

    def report(stage, a, b, tau):
        br = run(a, b, tau)
        eta, bound, _, _ = _thermo(cfg, sys_, br)
        return Optimum(stage, float(tau), float(br.total), float(br.w), float(eta), bound,
                       a.label, b.label)

    grid = tau_grid(cfg)
    values = run(p1, p2, grid).total
    i = int(np.argmin(values))
    base = report("baseline", p1, p2, grid[i])

    f_tau = lambda x: float(run(p1, p2, x).total) if x > 0 else math.inf
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    try:
        if not 0 < i < grid.size - 1:
            raise ValueError("minimum on the grid edge")
        res = minimize_scalar(f_tau, bracket=(lo, grid[i], hi), method="golden",
                              options={"xtol": cfg.xatol})
    except ValueError:
        res = minimize_scalar(f_tau, bounds=(lo, hi), method="bounded",
                              options={"xatol": cfg.xatol})
    tau_best = res.x if res.fun < base.work and res.x > 0 else grid[i]
    best_tau = report("tau", p1, p2, tau_best)

    def f_full(x):
        return float(run(from_euler(*x[:3]), from_euler(*x[3:6]), math.exp(x[6])).total)

    x_best = np.array([*p1.euler_angles(), *p2.euler_angles(), math.log(tau_best)])
    f_best = f_full(x_best)
    rng = np.random.default_rng(cfg.seed)
    for k in range(cfg.restarts + 1):
        start = x_best if k == 0 else x_best + rng.normal(0.0, 0.3, x_best.size)
        res = minimize(f_full, start, method="Nelder-Mead",
                       options={"maxiter": cfg.max_iter, "xatol": cfg.xatol, "fatol": 1e-14,
                                "adaptive": True})
        if res.fun < f_best:
            x_best, f_best = res.x, res.fun
    if f_best < best_tau.work:
        full = report("full", from_euler(*x_best[:3]), from_euler(*x_best[3:6]),
                      math.exp(x_best[6]))
    else:
        full = replace(best_tau, stage="full")
    return [base, best_tau, full]


def cmd_optimize(cfg: RunConfig):
    rows = optimize(cfg)
    if not rows[-1].extraction:
        print("no extraction found: the minimum work is not negative", file=sys.stderr)
    table = [(o.stage, o.tau, o.work, o.w, o.eta, o.carnot, o.pulse1, o.pulse2,
              int(o.extraction)) for o in rows]
    return OPTIMIZE_COLUMNS, table


COMMANDS = {"kernels": cmd_kernels, "work2": cmd_work2, "echo3": cmd_echo3,
            "optimize": cmd_optimize}


# --- presets ----------------------------------------------------------------

_FIG1 = dict(T=10.0, gamma=1.0, cutoff=1.0, eps=0.01, pulse1="rot:90:y", pulse2="rot:90:x")
_LOW_T = dict(gamma=0.1, cutoff=1.0, sz0=-0.01, pulse1="rot:-90:x", pulse2="rot:-90:y")

PRESETS = {
    # name: (command, shared parameters, one dict per curve)
    "fig1": ("work2", _FIG1, [{"sz0": s} for s in (-0.8, -0.5, -0.4, -0.3)]),
    "fig2": ("work2", {**_FIG1, "sz0": -0.8}, [{"gamma": g} for g in (0.1, 0.5, 2.0, 4.0)]),
    "fig3": ("work2", _LOW_T, [{"T": 0.1, "eps": 3.0}, {"T": 0.1, "eps": 2.0},
                               {"T": 1.0, "eps": 3.0}]),
    "fig4": ("work2", _FIG1, [{"sz0": -0.8}]),
    "fig5": ("work2", _LOW_T, [{"T": 0.1, "eps": 3.0}]),
    "fig6": ("echo3", dict(T_S=1e3, d=100.0, gamma=0.1, cutoff=1.0, omega0=8.0,
                           pulse1="rot:90:x", pulse2="rot:-90:y"),
             [{"T": t} for t in (10.0, 5.0, 1.0, 0.5)]),
}


def run_preset(name, overrides=None):
    """Rows of every curve of a preset, each prefixed by a ``curve`` label."""
    try:
        command, shared, curves = PRESETS[name]
    except KeyError:
        raise InvalidInput(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    header, table = None, []
    for curve in curves:
        cfg = RunConfig(**{**shared, **(overrides or {}), **curve})
        label = ";".join(f"{k}={v:g}" for k, v in curve.items())
        header, rows = COMMANDS[command](cfg)
        table.extend((label, *r) for r in rows)
    return ["curve", *header], table


# --- output -----------------------------------------------------------------

def _cell(x):
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    return str(x)


def format_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(x) for x in r])
    return buf.getvalue()


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _verify(cfg, explicit, trend):
    from .oracle import VerifyConfig, verify

    kw = {"tol": cfg.tol}
    if cfg.modes:
        try:
            pairs = [tuple(float(v) for v in m.split(":")) for m in cfg.modes.split(",")]
            g, w = zip(*pairs)
        except ValueError:
            raise InvalidInput(f"--modes expects 'g:w,g:w,...', got {cfg.modes!r}") from None
        kw.update(couplings=tuple(g), frequencies=tuple(w))
    if cfg.cutoffs:
        try:
            kw["cutoffs"] = tuple(int(c) for c in cfg.cutoffs.split(","))
        except ValueError:
            raise InvalidInput(f"--cutoffs expects 'n,n,...', got {cfg.cutoffs!r}") from None
    for key, name in (("T", "bath_temperature"), ("T_S", "spin_temperature"),
                      ("eps", "spin_gap")):
        if key in explicit:
            kw[name] = getattr(cfg, key)
    modes = (1, 2, 3) if trend else ()
    report = verify(VerifyConfig(**kw), trend_modes=modes)
    return "\n".join(report.lines()) + "\n", report.passed


# --- argument parsing -------------------------------------------------------

_FLAGS = [
    ("--T", "T", "bath temperature"),
    ("--ts", "T_S", "spin temperature (alternative to --sz0)"),
    ("--sz0", "sz0", "initial <sigma_z>"),
    ("--eps", "eps", "spin gap"),
    ("--omega0", "omega0", "mean spin gap of the ensemble (echo3)"),
    ("--gamma", "gamma", "dimensionless ohmic coupling"),
    ("--cutoff", "cutoff", "bath cutoff frequency"),
    ("--disorder-var", "d", "variance of the spin gap"),
    ("--pulse1", "pulse1", "first pulse, e.g. rot:90:y or euler:0:0:45"),
    ("--pulse2", "pulse2", "last pulse"),
    ("--tau-start", "tau_start", "first grid point"),
    ("--tau-stop", "tau_stop", "last grid point"),
    ("--tau-count", "tau_count", "number of grid points"),
    ("--tau-scale", "tau_scale", "linear or log"),
    ("--prep-time", "prep_time", "waiting time after a factorized start (default: correlated)"),
    ("--discrete", "discrete", "replace the ohmic bath by N Gauss-Laguerre modes"),
    ("--sequence", "sequence", "two-pulse or echo (optimize)"),
    ("--max-iter", "max_iter", "simplex iterations per restart"),
    ("--xatol", "xatol", "optimizer tolerance on parameters"),
    ("--restarts", "restarts", "simplex restarts"),
    ("--seed", "seed", "seed for every random choice"),
    ("--modes", "modes", "oracle bath as g:w,g:w,..."),
    ("--cutoffs", "cutoffs", "oracle Fock cutoffs n,n,..."),
    ("--tol", "tol", "oracle tolerance"),
]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file")
    common.add_argument("--out", help="output path (default: stdout)")
    for flag, dest, text in _FLAGS:
        common.add_argument(flag, dest=dest, default=argparse.SUPPRESS, help=text)

    parser = argparse.ArgumentParser(prog="spinwork", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    ov = sub.add_parser("oracle-verify", parents=[common])
    ov.add_argument("--no-trend", action="store_true",
                    help="skip the slow factorized-vs-correlated trend")
    pre = sub.add_parser("preset", parents=[common])
    pre.add_argument("name", choices=sorted(PRESETS))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    given = {k: v for k, v in vars(args).items() if k in _TYPES}
    try:
        settings = load_config(args.config) if args.config else {}
        settings.update({k: _convert(k, v) for k, v in given.items()})
        if args.command == "preset":
            text = format_csv(*run_preset(args.name, settings))
            ok = True
        elif args.command == "oracle-verify":
            text, ok = _verify(RunConfig(**settings), settings, not args.no_trend)
        else:
            text = format_csv(*COMMANDS[args.command](RunConfig(**settings)))
            ok = True
    except CONFIG_ERRORS as exc:
        print(f"spinwork: configuration error: {exc}", file=sys.stderr)
        return 2
    except (RestrictionViolated, DegenerateTemperatures, QuadratureNotConverged) as exc:
        print(f"spinwork: {exc}", file=sys.stderr)
        return 1
    _emit(text, args.out)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
