"""Command-line front end: presets, config parsing, sweeps, CSV/JSON output.

Exit codes: 0 success, 1 invalid arguments or config, 2 solver failure,
3 physicality-check failure.  Errors go to stderr as single-line JSON.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import gaussian
from .compare import SWEEP_AXES, correlation_report, solve_all, sweep
from .exact import QuadratureError, QuadratureSpec
from .gme import (gme_coefficients, gme_dynamics, gme_heat_currents,
                  gme_heat_currents_from_state, gme_normal_mode_steady_state)
from .model import WireParams
from .results import METHODS

SPEC_VERSION = 1

#: frozen named parameter presets; k is the sweep variable and has no
#: preset value.  grid = (start, stop) of the default 60-point log grid.
PRESETS = {
    "fig1a": dict(omega_c=1.0, omega_h=2.0, t_c=2.0, t_h=3.0,
                  lambda_sq=1e-3, cutoff=1e3, grid=(1e-4, 1.0)),
    "fig1b": dict(omega_c=1.0, omega_h=math.sqrt(1.0 + 2e-6), t_c=2.0,
                  t_h=3.0, lambda_sq=1e-3, cutoff=1e3, grid=(1e-5, 1e-1)),
    "fig1c": dict(omega_c=1.0, omega_h=2.0, t_c=2.0, t_h=3.0,
                  lambda_sq=1e-3, cutoff=1e3, grid=(1e-4, 1.0)),
    "fig1d": dict(omega_c=1.0, omega_h=math.sqrt(1.0 + 2e-6), t_c=2.0,
                  t_h=3.0, lambda_sq=1e-3, cutoff=1e3, grid=(1e-5, 1e-1)),
    "fig2a": dict(omega_c=1.0, omega_h=math.sqrt(1.0 + 2e-6), t_c=2.0,
                  t_h=3.0, lambda_sq=1e-3, cutoff=1e3, grid=(1e-5, 1e-1)),
    "fig2b": dict(omega_c=1.0, omega_h=math.sqrt(1.0 + 2e-6), t_c=2.0,
                  t_h=3.0, lambda_sq=1e-3, cutoff=1e3, grid=(1e-5, 1e-1)),
    "fig2c": dict(omega_c=10.0, omega_h=10.0, t_c=1.0, t_h=2.0,
                  lambda_sq=1e-3, cutoff=1e3, grid=(10.0, 1e5)),
}

_PARAM_KEYS = ("omega_c", "omega_h", "k", "t_c", "t_h", "lambda_sq", "cutoff")
_CONFIG_KEYS = _PARAM_KEYS + ("scenario", "axis", "log_grid", "jobs")

_METRIC_KEYS = ("fidelity_to_exact", "qdot_h", "mutual_info", "discord",
                "classical", "log_neg")

CSV_COLUMNS = (["k", "secular_margin"]
               + [f"{m}_{key}" for m in METHODS for key in _METRIC_KEYS]
               + ["exact_quad_error"])


class CliError(Exception):
    """Bad arguments or config (exit 1)."""


@dataclass(frozen=True)
class Scenario:
    """Fully resolved run configuration."""

    name: str
    params: WireParams
    axis: str = "k"
    grid: tuple = ()

    def as_dict(self) -> dict:
        d = {"name": self.name, "axis": self.axis,
             "grid": [float(v) for v in self.grid]}
        d.update(dataclasses.asdict(self.params))
        return d


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _fail(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def parse_log_grid(text: str) -> list:
    """Parse 'start:stop:npoints' into a log-spaced grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError(f"log grid must be start:stop:npoints, got {text!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        npoints = int(parts[2])
    except ValueError as exc:
        raise CliError(f"bad log grid {text!r}: {exc}") from None
    if start <= 0 or stop <= 0:
        raise CliError("log grid endpoints must be positive")
    if npoints < 1:
        raise CliError("log grid needs at least one point")
    return [float(v) for v in
            np.logspace(math.log10(start), math.log10(stop), npoints)]


def load_config(path: str) -> dict:
    """Parse a flat `key = value` config file with `#` comments.

    Unknown keys are an error (no silent ignoring); parse errors name the
    offending line.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise CliError(f"cannot read config {path!r}: {exc}") from None
    out = {}
    for num, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{num}: expected 'key = value', "
                           f"got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise CliError(f"{path}:{num}: unknown key {key!r}")
        if not value:
            raise CliError(f"{path}:{num}: empty value for {key!r}")
        if key in _PARAM_KEYS:
            try:
                out[key] = float(value)
            except ValueError:
                raise CliError(f"{path}:{num}: {key} must be a number, "
                               f"got {value!r}") from None
        elif key == "jobs":
            try:
                out[key] = int(value)
            except ValueError:
                raise CliError(f"{path}:{num}: jobs must be an integer, "
                               f"got {value!r}") from None
        else:
            out[key] = value
    return out


def resolve_scenario(args: argparse.Namespace, need_grid: bool) -> Scenario:
    """Merge preset defaults, config file values and flags (flags win)."""
    config = load_config(args.config) if args.config else {}
    name = args.scenario or config.get("scenario") or "custom"
    if name != "custom" and name not in PRESETS:
        raise CliError(f"unknown scenario {name!r}; "
                       f"choose from {', '.join(sorted(PRESETS))} or custom")
    values: dict = {}
    grid_range = None
    if name in PRESETS:
        preset = dict(PRESETS[name])
        grid_range = preset.pop("grid")
        values.update(preset)
    values.update({k: v for k, v in config.items() if k in _PARAM_KEYS})
    for key in _PARAM_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag

    axis = getattr(args, "axis", None) or config.get("axis") or "k"
    if axis not in SWEEP_AXES:
        raise CliError(f"unknown sweep axis {axis!r}; "
                       f"choose from {', '.join(SWEEP_AXES)}")
    grid_text = getattr(args, "log_grid", None) or config.get("log_grid")
    if grid_text:
        grid = parse_log_grid(grid_text)
    elif need_grid and axis == "k" and grid_range is not None:
        grid = parse_log_grid(f"{grid_range[0]}:{grid_range[1]}:60")
    elif need_grid:
        raise CliError("no grid: give --log-grid start:stop:npoints")
    else:
        grid = []

    if need_grid and axis in _PARAM_KEYS and values.get(axis) is None:
        values[axis] = grid[0]  # placeholder, replaced at every grid point
    missing = [k for k in _PARAM_KEYS if values.get(k) is None]
    if missing:
        raise CliError(f"missing parameters: {', '.join(missing)} "
                       "(set them via flags, a config file or a scenario)")
    try:
        params = WireParams(**{k: float(values[k]) for k in _PARAM_KEYS})
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return Scenario(name=name, params=params, axis=axis, grid=tuple(grid))


def _resolve_jobs(args: argparse.Namespace, config_jobs=None) -> int:
    if getattr(args, "jobs", None) is not None:
        jobs = args.jobs
    elif config_jobs is not None:
        jobs = config_jobs
    elif os.environ.get("QWIRE_JOBS"):
        try:
            jobs = int(os.environ["QWIRE_JOBS"])
        except ValueError:
            raise CliError("QWIRE_JOBS must be an integer") from None
    else:
        jobs = os.cpu_count() or 1
    if jobs < 1:
        raise CliError("jobs must be at least 1")
    return jobs


def _echo_scenario(scenario: Scenario) -> None:
    print(json.dumps({"resolved_scenario": scenario.as_dict()}),
          file=sys.stderr)


def cmd_steady(args: argparse.Namespace) -> int:
    scenario = resolve_scenario(args, need_grid=False)
    _echo_scenario(scenario)
    results = solve_all(scenario.params)
    exact = results[-1]
    methods = {}
    for res in results:
        entry = {
            "qdot_c": res.qdot_c,
            "qdot_h": res.qdot_h,
            "covariance": res.covariance.tolist(),
            "diagnostics": res.diagnostics,
        }
        if "error" not in res.diagnostics:
            report = correlation_report(res.covariance, exact.covariance,
                                        args.measured_node)
            entry.update({
                "fidelity_to_exact": report.fidelity_to_exact,
                "mutual_info": report.mutual_information,
                "discord": report.discord_arrow,
                "classical": report.classical_arrow,
                "log_neg": report.log_negativity,
            })
        methods[res.method] = entry
    doc = {"spec_version": SPEC_VERSION,
           "scenario": scenario.as_dict(),
           "measured_node": args.measured_node,
           "methods": methods}
    print(json.dumps(doc))
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    config = load_config(args.config) if args.config else {}
    scenario = resolve_scenario(args, need_grid=True)
    _echo_scenario(scenario)
    jobs = _resolve_jobs(args, config.get("jobs"))
    rows = sweep(scenario.params, scenario.axis, scenario.grid,
                 measured_node=args.measured_node, jobs=jobs)
    header = list(CSV_COLUMNS)
    header[0] = scenario.axis
    lines = [",".join(header)]
    for row in rows:
        cells = [_fmt(row.axis_value), _fmt(row.secular_margin)]
        for method in METHODS:
            cells += [_fmt(row.metrics[method][key]) for key in _METRIC_KEYS]
        cells.append(_fmt(row.exact_quad_error))
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


def _validate_checks(scenario: Scenario, measured_node: str) -> list:
    """Invariant suite at one parameter point."""
    params = scenario.params
    results = solve_all(params)
    exact = results[-1]
    checks = []

    def add(name, passed, detail):
        checks.append({"name": name, "passed": bool(passed),
                       "detail": detail})

    for res in results:
        if "error" in res.diagnostics:
            raise RuntimeError(f"{res.method}: {res.diagnostics['error']}")
        nus = gaussian.symplectic_eigenvalues(res.covariance)
        margin = float(np.min(nus)) - 0.5
        add(f"{res.method}_physical",
            margin >= -gaussian.PHYSICALITY_TOL,
            f"min symplectic eigenvalue - 1/2 = {margin:.3e}")
        residual = res.diagnostics.get("residual")
        if residual is not None:
            add(f"{res.method}_stationary", residual <= 1e-11,
                f"relative residual {residual:.3e}")
        balance = abs(res.qdot_c + res.qdot_h)
        scale = max(abs(res.qdot_c), abs(res.qdot_h), 1e-300)
        add(f"{res.method}_current_balance", balance <= 1e-9 * scale,
            f"|qdot_c + qdot_h| = {balance:.3e}")

    coeffs = gme_coefficients(params)
    nm = gme_normal_mode_steady_state(coeffs)
    q_state = gme_heat_currents_from_state(nm, coeffs)[1]
    q_closed = gme_heat_currents(params, coeffs)[1]
    denom = max(abs(q_state), abs(q_closed), 1e-300)
    add("global_current_forms_agree",
        abs(q_state - q_closed) <= 1e-11 * denom,
        f"relative difference {abs(q_state - q_closed) / denom:.3e}")
    if params.t_h >= params.t_c:
        add("global_second_law", q_closed >= 0.0,
            f"qdot_h = {q_closed:.3e} with t_h >= t_c")
    deriv = np.max(np.abs(gme_dynamics(nm, coeffs).as_vector()))
    add("global_fixed_point",
        deriv <= 1e-11 * max(np.max(np.abs(nm.as_vector())), 1e-300),
        f"max derivative {deriv:.3e}")

    report = correlation_report(exact.covariance, exact.covariance,
                                measured_node)
    add("exact_self_fidelity", abs(report.fidelity_to_exact - 1.0) <= 1e-9,
        f"F(exact, exact) = {report.fidelity_to_exact:.12f}")
    add("exact_correlations_ordered",
        report.mutual_information >= report.discord_arrow >= -1e-12,
        f"I = {report.mutual_information:.3e}, "
        f"Q = {report.discord_arrow:.3e}")
    return checks


def cmd_validate(args: argparse.Namespace) -> int:
    scenario = resolve_scenario(args, need_grid=False)
    _echo_scenario(scenario)
    checks = _validate_checks(scenario, args.measured_node)
    passed = all(c["passed"] for c in checks)
    print(json.dumps({"spec_version": SPEC_VERSION,
                      "scenario": scenario.as_dict(),
                      "passed": passed,
                      "checks": checks}))
    if passed:
        return 0
    if any(c["name"].endswith("_physical") and not c["passed"]
           for c in checks):
        return 3
    return 2


def cmd_scenarios(args: argparse.Namespace) -> int:
    doc = {"spec_version": SPEC_VERSION, "scenarios": {}}
    for name, preset in PRESETS.items():
        entry = {k: v for k, v in preset.items() if k != "grid"}
        entry["default_grid"] = {"start": preset["grid"][0],
                                 "stop": preset["grid"][1], "npoints": 60}
        doc["scenarios"][name] = entry
    doc["scenarios"]["custom"] = {
        "note": "all parameters supplied by flags or a config file"}
    print(json.dumps(doc))
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise CliError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", help="preset name or 'custom'")
    parser.add_argument("--config", help="key = value config file")
    for key in _PARAM_KEYS:
        parser.add_argument("--" + key.replace("_", "-"), dest=key,
                            type=float, help=f"override {key}")
    parser.add_argument("--measured-node", choices=("c", "h"), default="h",
                        help="node measured for discord (default h)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qwire",
                     description="Steady states, heat currents and "
                                 "correlations of a two-node harmonic wire.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("steady", parents=[], help="one point, all methods, "
                       "JSON to stdout")
    _add_common(p)
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("sweep", help="parameter sweep, CSV output")
    _add_common(p)
    p.add_argument("--axis", choices=SWEEP_AXES, help="sweep axis "
                   "(default k)")
    p.add_argument("--log-grid", dest="log_grid",
                   help="start:stop:npoints log-spaced grid")
    p.add_argument("--output", "-o", default="-",
                   help="CSV path ('-' for stdout)")
    p.add_argument("--jobs", type=int,
                   help="worker count (default QWIRE_JOBS or CPU count)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="run the invariant suite at a point")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("scenarios", help="list frozen presets as JSON")
    p.set_defaults(func=cmd_scenarios)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        return _fail("invalid_arguments", str(exc), 1)
    except gaussian.NonPhysicalStateError as exc:
        return _fail("nonphysical_state", str(exc), 3)
    except (QuadratureError, RuntimeError, np.linalg.LinAlgError) as exc:
        return _fail("solver_failure", str(exc), 2)


if __name__ == "__main__":
    sys.exit(main())
