"""Command-line entry point: verification suites and parameter sweeps.

Exit codes: 0 pass, 1 usage error, 2 tolerance breach, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import analytic
from .numeric import NumericFailure, position_spectrum, spectrum_1d, spectrum_radial
from .params import CONFIG_KEYS, DeformationParams, ParameterError, SpaceTimeSignature, parse_config
from .reports import SPECTRUM_COLUMNS, Report

EXIT_OK, EXIT_USAGE, EXIT_BREACH, EXIT_NUMERIC = 0, 1, 2, 3

PHYSICAL_KEYS = ("hbar", "mass", "omega", "c")
LIST_KEYS = ("epsilon", "kappa", "s", "grids")
SCALAR_KEYS = ("nmax", "seed", "tolerance", "max_degree", "delta", "delta_sq", "ng", "pairs", "pmax")

DEFAULTS = {
    "spectrum1d": dict(epsilon=[0.0, 0.01, 0.05, 0.1], kappa=[0.0, 1.0], s=[0], nmax=10,
                       grids=[512, 1024, 2048], tolerance=1e-6),
    "spectrum3d": dict(epsilon=[0.0, 0.1], kappa=[0.0], s=[0, 1, 2], nmax=4,
                       grids=[512, 1024, 2048], tolerance=1e-4),
    "position": dict(delta=0.5, ng=256, tolerance=1e-8),
    "verify-algebra": dict(max_degree=6),
    "verify-hermiticity": dict(delta_sq=0.5, kappa=[0.0, 0.5, 1.0, 2.0], pairs=20, seed=2024,
                               tolerance=1e-8),
    "convergence": dict(epsilon=[0.1], kappa=[0.0], nmax=4, grids=[128, 256, 512, 1024, 2048],
                        tolerance=0.3),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    physical: Dict[str, float] = field(default_factory=dict)
    epsilon: List[float] = field(default_factory=list)
    kappa: List[float] = field(default_factory=list)
    s: List[int] = field(default_factory=list)
    nmax: int = 10
    grids: List[int] = field(default_factory=list)
    out: Optional[str] = None
    fmt: str = "csv"
    seed: int = 2024
    tolerance: float = 1e-6
    extra: Dict[str, float] = field(default_factory=dict)
    stable: bool = False
    jobs: int = 1
    inject_fault: Optional[str] = None
    printed: bool = False

    def validate(self):
        for name in LIST_KEYS:
            if name in DEFAULTS[self.command] and not getattr(self, name):
                raise UsageError(f"{name} list must not be empty")
        if not 0 <= self.nmax <= 64:
            raise UsageError("nmax must lie in [0, 64]")
        for g in self.grids:
            if g < 64 or g > 4096 or g & (g - 1):
                raise UsageError(f"grid size {g} must be a power of two in [64, 4096]")
        if any(b != 2 * a for a, b in zip(sorted(self.grids), sorted(self.grids)[1:])):
            raise UsageError("grid sizes must double from one level to the next")
        if any(e < 0 for e in self.epsilon):
            raise UsageError("epsilon must be non-negative")
        if any(s < 0 for s in self.s):
            raise UsageError("s must be non-negative")
        if self.tolerance <= 0:
            raise UsageError("tolerance must be positive")
        if self.jobs < 1:
            raise UsageError("jobs must be at least 1")

    def params(self, eps: float, kappa_ratio: float = 0.0) -> DeformationParams:
        return DeformationParams.from_epsilon(eps, kappa_ratio=kappa_ratio, **self.physical)


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse integer list {text!r}") from None


def read_config_file(path: str) -> dict:
    """``key = value`` file; physical constants plus sweep settings."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    physical_lines, values = [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise UsageError(f"{path}:{lineno}: duplicate key {key!r}")
        if key in PHYSICAL_KEYS:
            physical_lines.append(f"{key} = {value}")
            values[key] = None
        elif key in ("s", "grids"):
            values[key] = _int_list(value)
        elif key in LIST_KEYS:
            values[key] = _float_list(value)
        elif key in ("nmax", "seed", "max_degree", "ng", "pairs"):
            try:
                values[key] = int(value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: {key} must be an integer") from None
        elif key in SCALAR_KEYS:  # remaining float-valued keys
            try:
                values[key] = float(value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: {key} must be a number") from None
        elif key in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: {key!r} is derived from the sweep, not configurable here")
        else:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
    try:
        physical = parse_config("\n".join(physical_lines))
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    values = {k: v for k, v in values.items() if k not in PHYSICAL_KEYS}
    values["physical"] = {k: float(v) for k, v in physical.items()}
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dynquant", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, tolerance=True):
        p.add_argument("--config", help="key=value file; flags override it")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        p.add_argument("--stable", action="store_true", help="omit the timestamp/version block in JSON")
        if tolerance:
            p.add_argument("--tolerance", type=float)
        p.add_argument("--jobs", type=int, default=1, help="parallel sweep tasks")
        return p

    p = common(sub.add_parser("spectrum1d", help="1D oscillator: numeric vs closed form"))
    p.add_argument("--epsilon", type=_float_list)
    p.add_argument("--kappa", type=_float_list, help="kappa in units of delta^2")
    p.add_argument("--nmax", type=int)
    p.add_argument("--grids", type=_int_list)
    p.add_argument("--pmax", type=float, help="half-width of the truncated momentum grid (epsilon = 0)")

    p = common(sub.add_parser("spectrum3d", help="3D radial oscillator: numeric vs closed form"))
    p.add_argument("--epsilon", type=_float_list)
    p.add_argument("--kappa", type=_float_list, help="kappa in units of delta^2")
    p.add_argument("--s", type=_int_list)
    p.add_argument("--nmax", type=int, help="largest radial index m'")
    p.add_argument("--grids", type=_int_list)
    p.add_argument("--pmax", type=float, help="radial cut-off of the linear grid (epsilon = 0)")

    p = common(sub.add_parser("position", help="position-operator lattice spacing"))
    p.add_argument("--delta", type=float)
    p.add_argument("--ng", type=int)

    p = common(sub.add_parser("verify-algebra", help="exact commutator identities"), tolerance=False)
    p.add_argument("--max-degree", dest="max_degree", type=int)
    p.add_argument("--printed", action="store_true",
                   help="check the alternative boost/time right-hand sides instead")
    p.add_argument("--inject-fault", dest="inject_fault", choices=("q0-sign",), help=argparse.SUPPRESS)

    p = common(sub.add_parser("verify-hermiticity", help="weighted inner-product symmetry of q"))
    p.add_argument("--delta-sq", dest="delta_sq", type=float)
    p.add_argument("--kappa", type=_float_list, help="kappa in units of delta^2")
    p.add_argument("--pairs", type=int)
    p.add_argument("--seed", type=int)

    p = common(sub.add_parser("convergence", help="error against grid size and fitted order"))
    p.add_argument("--epsilon", type=_float_list)
    p.add_argument("--kappa", type=_float_list, help="kappa in units of delta^2")
    p.add_argument("--nmax", type=int)
    p.add_argument("--grids", type=_int_list)
    p.add_argument("--pmax", type=float, help="half-width of the truncated momentum grid (epsilon = 0)")
    return parser


def make_config(ns: argparse.Namespace) -> RunConfig:
    values = dict(DEFAULTS[ns.command])
    if getattr(ns, "config", None):
        values.update(read_config_file(ns.config))
    for key in LIST_KEYS + SCALAR_KEYS:
        v = getattr(ns, key, None)
        if v is not None:
            values[key] = v
    cfg = RunConfig(command=ns.command, physical=values.pop("physical", {}), out=ns.out, fmt=ns.fmt,
                    stable=ns.stable, jobs=ns.jobs, inject_fault=getattr(ns, "inject_fault", None),
                    printed=getattr(ns, "printed", False))
    for key in ("epsilon", "kappa", "s", "nmax", "grids", "seed", "tolerance"):
        if key in values:
            setattr(cfg, key, values.pop(key))
    cfg.extra = values
    cfg.validate()
    return cfg


# --------------------------------------------------------------------------
# sweep tasks (module level so they can run in worker processes)

def _task_1d(args):
    cfg, eps, kr = args
    params = cfg.params(eps, kr)
    rep = spectrum_1d(params, cfg.grids, cfg.nmax + 1, p_max=cfg.extra.get("pmax"))
    rows = []
    for n in range(cfg.nmax + 1):
        exact = analytic.energy_1d(n, params)
        num = float(rep.extrapolated[n])
        rel = abs(num - exact) / abs(exact)
        rows.append(dict(epsilon=eps, kappa=kr, s=0, n=n, m_prime=None, E_numeric=num, E_analytic=exact,
                         rel_err=rel, error_estimate=float(rep.error_estimate[n]), grid_sizes=cfg.grids,
                         breach=rel > cfg.tolerance))
    return (eps, kr, 0), rows


def _task_3d(args):
    cfg, eps, kr, s = args
    params = cfg.params(eps, kr)
    rep = spectrum_radial(params, s, cfg.grids, cfg.nmax + 1, p_max=cfg.extra.get("pmax"))
    rows = []
    for m in range(cfg.nmax + 1):
        exact = analytic.energy_3d(s, m, params)
        num = float(rep.extrapolated[m])
        rel = abs(num - exact) / abs(exact)
        rows.append(dict(epsilon=eps, kappa=kr, s=s, n=s + 2 * m, m_prime=m, E_numeric=num,
                         E_analytic=exact, rel_err=rel, error_estimate=float(rep.error_estimate[m]),
                         grid_sizes=cfg.grids, breach=rel > cfg.tolerance))
    return (eps, kr, s), rows


def _run_tasks(fn, tasks, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(fn, tasks))
    else:
        results = [fn(t) for t in tasks]
    return [row for _, rows in sorted(results, key=lambda kv: kv[0]) for row in rows]


def cmd_spectrum1d(cfg: RunConfig) -> Report:
    report = Report("spectrum1d", SPECTRUM_COLUMNS, metadata=_meta(cfg))
    tasks = [(cfg, e, k) for e in cfg.epsilon for k in cfg.kappa]
    report.rows = _run_tasks(_task_1d, tasks, cfg.jobs)
    return report


def cmd_spectrum3d(cfg: RunConfig) -> Report:
    report = Report("spectrum3d", SPECTRUM_COLUMNS, metadata=_meta(cfg))
    tasks = [(cfg, e, k, s) for e in cfg.epsilon for k in cfg.kappa for s in cfg.s]
    report.rows = _run_tasks(_task_3d, tasks, cfg.jobs)
    return report


def cmd_position(cfg: RunConfig) -> Report:
    delta = float(cfg.extra.get("delta", 0.5))
    ng = int(cfg.extra.get("ng", 256))
    if ng < 16 or ng % 2:
        raise UsageError("ng must be even and at least 16")
    if delta <= 0:
        raise UsageError("delta must be positive")
    hbar = float(cfg.physical.get("hbar", 1.0))
    params = DeformationParams(hbar=hbar, delta_sq_override=delta * delta)
    spec = position_spectrum(params, ng)
    expected = 2 * hbar * delta
    cols = ("index", "eigenvalue", "multiplicity", "spacing", "expected_spacing", "deviation", "breach")
    report = Report("position", cols, metadata=dict(_meta(cfg), delta=delta, ng=ng, hbar=hbar))
    for i, (value, mult) in enumerate(zip(spec.distinct, spec.multiplicity)):
        spacing = float(spec.spacing[i]) if i < len(spec.spacing) else None
        dev = None if spacing is None else abs(spacing - expected)
        report.add(index=i, eigenvalue=float(value), multiplicity=int(mult), spacing=spacing,
                   expected_spacing=expected, deviation=dev, breach=dev is not None and dev > cfg.tolerance)
    return report


def cmd_verify_algebra(cfg: RunConfig) -> Report:
    from .polyalg import run_algebra_suite
    max_degree = int(cfg.extra.get("max_degree", 6))
    if max_degree < 0:
        raise UsageError("max_degree must be non-negative")
    hbar = cfg.physical.get("hbar", 1)
    reports = run_algebra_suite(max_degree, hbar=hbar, corrupt_q0_sign=cfg.inject_fault == "q0-sign",
                                printed=cfg.printed)
    cols = ("identity", "lhs", "rhs", "delta_sq", "kappa", "max_degree", "residual_count",
            "first_failing_monomial", "breach")
    report = Report("verify-algebra", cols, metadata=dict(_meta(cfg), max_degree=max_degree))
    for r in reports:
        report.add(identity=r.name, lhs=r.lhs, rhs=r.rhs, delta_sq=str(r.params["delta_sq"]),
                   kappa=str(r.params["kappa"]), max_degree=max_degree, residual_count=r.residual_count,
                   first_failing_monomial=r.first_failing_monomial, breach=not r.holds)
    return report


def cmd_verify_hermiticity(cfg: RunConfig) -> Report:
    d2 = float(cfg.extra.get("delta_sq", 0.5))
    pairs = int(cfg.extra.get("pairs", 20))
    if d2 <= 0 or pairs < 1:
        raise UsageError("delta_sq must be positive and pairs at least 1")
    threshold = 1e-3
    sig = SpaceTimeSignature(1)
    grid = analytic.hermiticity_grid()
    cols = ("kappa", "weight", "pair", "defect", "threshold", "breach")
    report = Report("verify-hermiticity", cols,
                    metadata=dict(_meta(cfg), delta_sq=d2, pairs=pairs, rng="numpy Philox(key=seed, counter=index)"))
    hbar = float(cfg.physical.get("hbar", 1.0))
    for kr in cfg.kappa:
        params = DeformationParams(hbar=hbar, delta_sq_override=d2, kappa=kr * d2)
        wrong = analytic.wrong_weight(params, sig, grid)
        for i in range(pairs):
            psi = analytic.gaussian_test_function(cfg.seed, 2 * i, grid)
            phi = analytic.gaussian_test_function(cfg.seed, 2 * i + 1, grid)
            good = analytic.hermiticity_defect(params, sig, psi, phi, grid)
            bad = analytic.hermiticity_defect(params, sig, psi, phi, grid, weight_values=wrong)
            report.add(kappa=kr, weight="correct", pair=i, defect=good, threshold=cfg.tolerance,
                       breach=good >= cfg.tolerance)
            # negative control: the wrong weight must be detected
            report.add(kappa=kr, weight="wrong", pair=i, defect=bad, threshold=threshold,
                       breach=bad <= threshold)
    return report


def cmd_convergence(cfg: RunConfig) -> Report:
    cols = ("epsilon", "kappa", "n", "grid_size", "E_numeric", "E_analytic", "abs_err", "fitted_order",
            "breach")
    report = Report("convergence", cols, metadata=_meta(cfg))
    nominal = 2.0
    for eps in cfg.epsilon:
        for kr in cfg.kappa:
            params = cfg.params(eps, kr)
            errs = []
            values = []
            for g in sorted(cfg.grids):
                rep = spectrum_1d(params, [g], cfg.nmax + 1, p_max=cfg.extra.get("pmax"))
                values.append(rep.eigenvalues[: cfg.nmax + 1])
            exact = np.array([analytic.energy_1d(n, params) for n in range(cfg.nmax + 1)])
            errs = np.abs(np.array(values) - exact)
            h = 1.0 / np.array(sorted(cfg.grids), dtype=float)
            for n in range(cfg.nmax + 1):
                usable = errs[:, n] > 1e3 * np.finfo(float).eps * exact[n]
                order = float(np.polyfit(np.log(h[usable]), np.log(errs[usable, n]), 1)[0]) \
                    if usable.sum() >= 2 else math.nan
                bad = math.isfinite(order) and abs(order - nominal) > cfg.tolerance * nominal
                for gi, g in enumerate(sorted(cfg.grids)):
                    report.add(epsilon=eps, kappa=kr, n=n, grid_size=g, E_numeric=float(values[gi][n]),
                               E_analytic=float(exact[n]), abs_err=float(errs[gi, n]), fitted_order=order,
                               breach=bad)
    return report


def _meta(cfg: RunConfig) -> dict:
    return dict(command=cfg.command, epsilon=cfg.epsilon, kappa_over_delta_sq=cfg.kappa, s=cfg.s,
                nmax=cfg.nmax, grids=cfg.grids, seed=cfg.seed, tolerance=cfg.tolerance,
                physical=cfg.physical)


COMMANDS = {
    "spectrum1d": cmd_spectrum1d,
    "spectrum3d": cmd_spectrum3d,
    "position": cmd_position,
    "verify-algebra": cmd_verify_algebra,
    "verify-hermiticity": cmd_verify_hermiticity,
    "convergence": cmd_convergence,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = make_config(ns)
        report = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"dynquant: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericFailure, FloatingPointError, ArithmeticError) as exc:
        print(f"dynquant: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ParameterError as exc:
        print(f"dynquant: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = report.render(cfg.fmt, cfg.stable)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    for row in report.rows:
        if row.get("breach") and cfg.command == "verify-algebra":
            print(f"FAIL {row['identity']} {row['lhs']} = {row['rhs']} "
                  f"(delta_sq={row['delta_sq']}, kappa={row['kappa']}): "
                  f"first failing monomial {row['first_failing_monomial']}", file=sys.stderr)
            break
    status = "PASS" if report.breaches == 0 else f"BREACH ({report.breaches} rows)"
    print(f"dynquant {cfg.command}: {status}", file=sys.stderr)
    return EXIT_OK if report.breaches == 0 else EXIT_BREACH


if __name__ == "__main__":
    sys.exit(main())
