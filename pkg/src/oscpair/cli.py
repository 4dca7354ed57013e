"""Command-line front end: ``oscpair sweep | validate | wavefunction | bounds``.

Runs are described by a TOML file with ``[params]``, ``[sweep]`` and
``[output]`` tables; command-line flags override file values.

Exit status: 0 on success, 1 when a validation or oracle check fails,
2 on a configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, replace

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .core import OBSERVABLE_COLUMNS, ObservablePoint, OscillatorPair, ParameterError
from .general import (
    GeneralState,
    general_observables,
    general_reduced_distribution,
    general_wavefunction,
    identity_residuals,
    matrix_observables,
    position_moments,
    xi,
    xi_bounds,
)
from .oracle import oracle_observables, quadrature_normalize
from .resonance import ResonanceState, resonance_bounds, resonance_observables
from .symmetric import SymmetricState, symmetric_bounds, symmetric_observables, symmetric_wavefunction

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2
MODES = ("auto", "symmetric", "general", "resonance")
FORMATS = ("csv", "json")
ORACLE_TOL = 1e-6


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"config error in {field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class RunConfig:
    params: OscillatorPair
    x0: float = 0.0
    t_start: float = 0.0
    t_end: float = 10.0
    steps: int = 101
    mode: str = "auto"
    output_format: str = "csv"
    oracle: bool = False
    oracle_dt: float = 1e-4

    def __post_init__(self):
        if not math.isfinite(self.x0):
            raise ConfigError("sweep.x0", "must be finite")
        if not (0 <= self.t_start < self.t_end) or not math.isfinite(self.t_end):
            raise ConfigError("sweep.t_end", f"need 0 <= t_start < t_end, got {self.t_start!r}, {self.t_end!r}")
        if isinstance(self.steps, bool) or not isinstance(self.steps, int) or self.steps < 2:
            raise ConfigError("sweep.steps", f"must be an integer >= 2, got {self.steps!r}")
        if self.mode not in MODES:
            raise ConfigError("sweep.mode", f"must be one of {MODES}, got {self.mode!r}")
        if self.output_format not in FORMATS:
            raise ConfigError("output.format", f"must be one of {FORMATS}, got {self.output_format!r}")
        if not self.oracle_dt > 0:
            raise ConfigError("output.oracle_dt", f"must be > 0, got {self.oracle_dt!r}")

    def resolved_mode(self) -> str:
        p = self.params
        if self.mode == "auto":
            if p.is_symmetric():
                return "symmetric"
            return "resonance" if p.is_resonant() else "general"
        if self.mode == "symmetric" and not p.is_symmetric():
            raise ConfigError("sweep.mode", "symmetric mode needs m1 == m2 and k1 == k2")
        if self.mode == "resonance" and not p.is_resonant():
            raise ConfigError("sweep.mode", "resonance mode needs omega1 == omega2")
        return self.mode

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.steps)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mode_resolved"] = self.resolved_mode()
        return d


_PARAM_KEYS = ("m1", "m2", "k1", "k2", "kappa", "hbar")
_SWEEP_KEYS = ("x0", "t_start", "t_end", "steps", "mode")
_OUTPUT_KEYS = {"format": "output_format", "oracle": "oracle", "oracle_dt": "oracle_dt"}


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    """Build a :class:`RunConfig` from an optional TOML file plus overrides (overrides win)."""
    raw: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError("--config", str(exc)) from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError("--config", f"invalid TOML: {exc}") from None
    for section in raw:
        if section not in ("params", "sweep", "output"):
            raise ConfigError(section, "unknown section")

    def take(section, keys):
        table = raw.get(section, {})
        unknown = set(table) - set(keys)
        if unknown:
            raise ConfigError(section, f"unknown keys {sorted(unknown)}")
        return dict(table)

    params = take("params", _PARAM_KEYS)
    sweep = take("sweep", _SWEEP_KEYS)
    output = {_OUTPUT_KEYS[k]: v for k, v in take("output", tuple(_OUTPUT_KEYS)).items()}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in _PARAM_KEYS:
            params[key] = value
        else:
            sweep[key] = value

    missing = [k for k in ("m1", "m2", "k1", "k2") if k not in params]
    if missing:
        raise ConfigError("params", f"missing {missing}")
    try:
        pair = OscillatorPair(**params)
    except ParameterError as exc:
        raise ConfigError(f"params.{exc.field}", str(exc)) from None
    try:
        return RunConfig(pair, **sweep, **output)
    except TypeError as exc:
        raise ConfigError("sweep", str(exc)) from None


def dispatch_observables(config: RunConfig, t) -> ObservablePoint:
    mode = config.resolved_mode()
    if mode == "symmetric":
        return symmetric_observables(SymmetricState(config.params, config.x0), t)
    if mode == "resonance":
        return resonance_observables(ResonanceState(config.params, config.x0), t)
    return general_observables(GeneralState(config.params, config.x0), t)


@dataclass
class SweepResult:
    config: RunConfig
    points: ObservablePoint
    oracle_max_dev: np.ndarray | None = None

    @property
    def oracle_ok(self) -> bool:
        return self.oracle_max_dev is None or bool(np.all(self.oracle_max_dev < ORACLE_TOL))


def run_sweep(config: RunConfig) -> SweepResult:
    t = config.times()
    points = dispatch_observables(config, t)
    dev = None
    if config.oracle:
        try:
            ref = oracle_observables(config.params, config.x0, t, config.oracle_dt)
        except ValueError as exc:
            raise ConfigError("output.oracle_dt", str(exc)) from None
        dev = np.max(np.abs(points.observables() - ref.observables()), axis=0)
    return SweepResult(config, points, dev)


def _fmt(x: float) -> str:
    return format(float(x) + 0.0, ".17g")  # + 0.0 folds -0 into 0


def write_csv(result: SweepResult, stream) -> None:
    cols = list(OBSERVABLE_COLUMNS)
    rows = result.points.as_array().T
    if result.oracle_max_dev is not None:
        cols.append("oracle_max_dev")
        rows = np.column_stack([rows, result.oracle_max_dev])
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def write_json(result: SweepResult, stream) -> None:
    cols = list(OBSERVABLE_COLUMNS)
    rows = result.points.as_array().T
    if result.oracle_max_dev is not None:
        cols.append("oracle_max_dev")
        rows = np.column_stack([rows, result.oracle_max_dev])
    records: list[dict] = [{"metadata": {"config": result.config.to_dict(), "columns": cols}}]
    records += [dict(zip(cols, map(float, row))) for row in rows]
    json.dump(records, stream, indent=1)
    stream.write("\n")


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""


def _max_rel(a: np.ndarray, b: np.ndarray) -> float:
    """Largest deviation per observable, relative to that observable's peak magnitude."""
    scale = np.maximum(np.max(np.abs(b), axis=-1, keepdims=True), 1e-300)
    return float(np.max(np.abs(a - b) / scale))


def _nonsingular_times(state: GeneralState, t: np.ndarray, margin: float = 1e-3) -> np.ndarray:
    wp, wm = state.modes.omega_plus, state.modes.omega_minus
    keep = (np.abs(np.sin(wp * t)) > margin) & (np.abs(np.sin(wm * t)) > margin)
    return t[keep]


def run_validate(config: RunConfig) -> list[Check]:
    """Run the invariant checks for one configuration over its sweep window."""
    checks: list[Check] = []

    def add(name, residual, tol, detail=""):
        residual = float(residual)
        checks.append(Check(name, residual, tol, bool(residual < tol), detail))

    p, x0 = config.params, config.x0
    state = GeneralState(p, x0)
    t_dense = np.linspace(config.t_start, config.t_end, 1000)
    gen = general_observables(state, t_dense).observables()

    if p.is_symmetric():
        sym = symmetric_observables(SymmetricState(p, x0), t_dense).observables()
        add("general_reduces_to_symmetric", _max_rel(gen, sym), 1e-12)
    if p.is_resonant():
        res = resonance_observables(ResonanceState(p, x0), t_dense).observables()
        add("general_reduces_to_resonance", _max_rel(gen, res), 1e-12)

    t_mat = t_dense[:: max(1, len(t_dense) // 50)]
    mat = np.array([matrix_observables(state, t).observables() for t in t_mat]).T
    add("matrix_route_matches_closed_form", _max_rel(mat, gen[:, :: max(1, len(t_dense) // 50)]), 1e-10)

    worst: dict[str, float] = {}
    for t in _nonsingular_times(state, t_mat):
        for name, value in identity_residuals(state, t).items():
            worst[name] = max(worst.get(name, 0.0), value)
    for name, value in worst.items():
        add(f"identity:{name}", value, 1e-10)

    b = xi_bounds(state)
    x2 = np.abs(xi(state, t_dense)) ** 2
    slack = 1e-12 * b.upper
    violations = int(np.sum((x2 < b.lower - slack) | (x2 > b.upper + slack)))
    add("xi_squared_within_bounds", violations, 1, f"lower={b.lower:.6g} upper={b.upper:.6g}")

    shortfall = max(0.0, 1.0 - float(np.min(gen[4])) / (p.hbar / 2))
    add("heisenberg", shortfall, 1e-12, "relative shortfall of the product below hbar/2")

    h = 1e-5
    tf = np.clip(t_dense, h, None)
    fd = (general_observables(state, tf + h).y1_mean - general_observables(state, tf - h).y1_mean) / (2 * h)
    pm = general_observables(state, tf).p1_mean / p.m1
    add("momentum_equals_mass_times_velocity", np.max(np.abs(fd - pm)) / max(1.0, np.max(np.abs(pm))), 1e-8)

    t_or = t_dense[:: max(1, len(t_dense) // 10)]
    try:
        ref = oracle_observables(p, x0, t_or, config.oracle_dt).observables()
        add("oracle_agreement", np.max(np.abs(ref - general_observables(state, t_or).observables())), ORACLE_TOL)
    except ValueError as exc:
        checks.append(Check("oracle_agreement", math.nan, ORACLE_TOL, False, str(exc)))

    worst_norm = 0.0
    for t in t_or:
        d = general_reduced_distribution(state, t)
        q = quadrature_normalize(d.pdf, d.mean, d.sigma, tol=1e-12)
        worst_norm = max(worst_norm, abs(q.value - 1.0))
    add("reduced_distribution_normalized", worst_norm, 1e-10)
    return checks


def wavefunction_grid(config: RunConfig, t: float, n: int, window: float):
    """``|Psi|^2`` on an ``n x n`` grid spanning ``window`` marginal sigmas about the mean."""
    state = GeneralState(config.params, config.x0)
    mean, cov = position_moments(state, t)
    sig = np.sqrt(np.diag(cov))
    y1 = np.linspace(mean[0] - window * sig[0], mean[0] + window * sig[0], n)
    y2 = np.linspace(mean[1] - window * sig[1], mean[1] + window * sig[1], n)
    Y1, Y2 = np.meshgrid(y1, y2, indexing="ij")
    if config.resolved_mode() == "symmetric":
        sym = SymmetricState(config.params, config.x0)
        psi = symmetric_wavefunction(sym, (Y1 + Y2) / math.sqrt(2), (Y2 - Y1) / math.sqrt(2), t)
    else:
        psi = general_wavefunction(state, Y1, Y2, t)
    return y1, y2, np.abs(psi) ** 2


def bounds_report(config: RunConfig) -> dict:
    state = GeneralState(config.params, config.x0)
    b = xi_bounds(state)
    out: dict = {"mode": config.resolved_mode(), "xi_squared": [b.lower, b.upper]}
    if config.params.is_symmetric():
        out["symmetric"] = {k: list(v) for k, v in symmetric_bounds(SymmetricState(config.params, config.x0)).items()}
    if config.params.is_resonant():
        rb = resonance_bounds(ResonanceState(config.params, config.x0))
        out["resonance"] = {k: list(v) for k, v in rb.as_dict().items()}
    return out


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oscpair", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="TOML run description")
        for key in _PARAM_KEYS:
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float)
        p.add_argument("--x0", type=float)
        p.add_argument("--t-start", dest="t_start", type=float)
        p.add_argument("--t-end", dest="t_end", type=float)
        p.add_argument("--steps", type=int)
        p.add_argument("--mode", choices=MODES)
        p.add_argument("--format", dest="output_format", choices=FORMATS)
        p.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=None)
        p.add_argument("--oracle-dt", dest="oracle_dt", type=float)
        p.add_argument("-o", "--output", help="write here instead of stdout")

    common(sub.add_parser("sweep", help="observables of oscillator #1 on a time grid"))
    common(sub.add_parser("validate", help="run invariant checks, print a JSON report"))
    wf = sub.add_parser("wavefunction", help="dump |Psi|^2 on a grid")
    common(wf)
    wf.add_argument("--t", dest="t", type=float, required=True)
    wf.add_argument("--grid", default="101x101", help="NxM grid size")
    wf.add_argument("--window", type=float, default=6.0, help="half-width in marginal sigmas")
    common(sub.add_parser("bounds", help="print the oscillation envelopes"))
    return ap


def _overrides(args) -> dict:
    keys = _PARAM_KEYS + ("x0", "t_start", "t_end", "steps", "mode", "output_format", "oracle", "oracle_dt")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise ConfigError("--grid", f"expected NxM, got {text!r}") from None
    if a < 2 or b < 2:
        raise ConfigError("--grid", "each dimension must be >= 2")
    return a, b


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    buf = io.StringIO()
    try:
        over = _overrides(args)
        file_keys = {"output_format", "oracle", "oracle_dt"}
        config = load_config(args.config, {k: v for k, v in over.items() if k not in file_keys})
        config = replace(config, **{k: v for k, v in over.items() if k in file_keys})
        config.resolved_mode()
        status = EXIT_OK

        if args.command == "sweep":
            result = run_sweep(config)
            (write_csv if config.output_format == "csv" else write_json)(result, buf)
            if not result.oracle_ok:
                print(f"oracle deviation {np.max(result.oracle_max_dev):.3e} exceeds {ORACLE_TOL:g}",
                      file=sys.stderr)
                status = EXIT_FAILED
        elif args.command == "validate":
            checks = run_validate(config)
            passed = all(c.passed for c in checks)
            json.dump({"passed": passed, "checks": [asdict(c) for c in checks]}, buf, indent=1)
            buf.write("\n")
            for c in checks:
                if not c.passed:
                    print(f"FAIL {c.name}: residual {c.residual:.3e} (tolerance {c.tolerance:g}) {c.detail}",
                          file=sys.stderr)
            status = EXIT_OK if passed else EXIT_FAILED
        elif args.command == "wavefunction":
            n1, n2 = _parse_grid(args.grid)
            if n1 != n2:
                raise ConfigError("--grid", "grid must be square")
            y1, y2, dens = wavefunction_grid(config, args.t, n1, args.window)
            if config.output_format == "csv":
                w = csv.writer(buf, lineterminator="\n")
                w.writerow(["y1", "y2", "density"])
                for i, a in enumerate(y1):
                    for j, b in enumerate(y2):
                        w.writerow([_fmt(a), _fmt(b), _fmt(dens[i, j])])
            else:
                json.dump({"t": args.t, "y1": y1.tolist(), "y2": y2.tolist(), "density": dens.tolist()}, buf)
                buf.write("\n")
        else:
            json.dump(bounds_report(config), buf, indent=1)
            buf.write("\n")
    except (ConfigError, ParameterError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        try:
            sys.stdout.write(buf.getvalue())
            sys.stdout.flush()
        except BrokenPipeError:
            # Reader went away (e.g. piped into head); silence the exit-time flush.
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return status


if __name__ == "__main__":
    sys.exit(main())
