"""Run all four solvers on one parameter point or a sweep.

Rows are pure functions of their parameter point, so sweeps can run on a
process pool without changing the (order-preserving, deterministic)
output.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import gaussian
from .exact import exact_steady_state, QuadratureSpec
from .gme import gme_steady_state
from .lme import lme_steady_state
from .model import WireParams, secular_validity_margin
from .redfield import redfield_steady_state
from .results import SteadyStateResult, METHODS

SWEEP_AXES = ("k", "t_c", "t_h", "omega_h", "lambda_sq")

_SOLVERS = {
    "global": gme_steady_state,
    "local": lme_steady_state,
    "redfield": redfield_steady_state,
}


@dataclass(frozen=True)
class SweepRow:
    """Per-method summary at one point of a parameter sweep."""

    axis_value: float
    secular_margin: float
    metrics: dict                 # method -> dict of scalar metrics
    exact_quad_error: float
    errors: dict = field(default_factory=dict)   # method -> message


def solve_all(params: WireParams,
              spec: QuadratureSpec = QuadratureSpec()) -> list:
    """All four steady states, exact last.

    Approximate-method failures are captured as error placeholders; only
    an exact-solver failure aborts.
    """
    out = []
    for method in METHODS[:-1]:
        try:
            out.append(_SOLVERS[method](params))
        except Exception as exc:  # per-method capture, deliberate
            out.append(SteadyStateResult(
                method=method, covariance=np.full((4, 4), np.nan),
                heat_currents=(math.nan, math.nan),
                diagnostics={"error": f"{type(exc).__name__}: {exc}"}))
    out.append(exact_steady_state(params, spec))
    return out


def correlation_report(covariance: np.ndarray, exact_cov: np.ndarray,
                       measured_node: str = "h") -> gaussian.CorrelationReport:
    """Correlation measures of one state plus its fidelity to the exact one."""
    mi = gaussian.mutual_information(covariance)
    q = gaussian.gaussian_discord(covariance, measured_node)
    return gaussian.CorrelationReport(
        fidelity_to_exact=gaussian.fidelity(covariance, exact_cov),
        mutual_information=mi,
        discord_arrow=q,
        classical_arrow=max(mi - q, 0.0),
        log_negativity=gaussian.log_negativity(covariance),
        measured_node=measured_node,
    )


def _with_axis(params: WireParams, axis: str, value: float) -> WireParams:
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}")
    return dataclasses.replace(params, **{axis: value})


def sweep_row(params: WireParams, axis: str, value: float,
              spec: QuadratureSpec = QuadratureSpec(),
              measured_node: str = "h") -> SweepRow:
    """One fully-populated sweep row (pure function of its arguments)."""
    point = _with_axis(params, axis, value)
    results = solve_all(point, spec)
    exact = results[-1]
    metrics = {}
    errors = {}
    for res in results:
        if "error" in res.diagnostics:
            errors[res.method] = res.diagnostics["error"]
            metrics[res.method] = {key: math.nan for key in (
                "fidelity_to_exact", "qdot_h", "mutual_info", "discord",
                "classical", "log_neg")}
            continue
        try:
            report = correlation_report(res.covariance, exact.covariance,
                                        measured_node)
            metrics[res.method] = {
                "fidelity_to_exact": report.fidelity_to_exact,
                "qdot_h": res.qdot_h,
                "mutual_info": report.mutual_information,
                "discord": report.discord_arrow,
                "classical": report.classical_arrow,
                "log_neg": report.log_negativity,
            }
        except gaussian.NonPhysicalStateError as exc:
            errors[res.method] = f"NonPhysicalStateError: {exc}"
            metrics[res.method] = {key: math.nan for key in (
                "fidelity_to_exact", "qdot_h", "mutual_info", "discord",
                "classical", "log_neg")}
            metrics[res.method]["qdot_h"] = res.qdot_h
    return SweepRow(
        axis_value=value,
        secular_margin=secular_validity_margin(point),
        metrics=metrics,
        exact_quad_error=exact.diagnostics.get("quadrature_error", math.nan),
        errors=errors,
    )


def sweep(params: WireParams, axis: str, grid,
          spec: QuadratureSpec = QuadratureSpec(),
          measured_node: str = "h", jobs: int | None = None) -> list:
    """Sweep one parameter over a grid; order-preserving and deterministic."""
    grid = [float(v) for v in grid]
    for value in grid:
        _with_axis(params, axis, value)  # validate the whole grid up front
    if jobs is None or jobs <= 1:
        return [sweep_row(params, axis, v, spec, measured_node)
                for v in grid]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(sweep_row, params, axis, v, spec,
                               measured_node) for v in grid]
        return [f.result() for f in futures]


def correlation_deltas(params: WireParams,
                       spec: QuadratureSpec = QuadratureSpec(),
                       measured_node: str = "h") -> dict:
    """Approximate-minus-exact correlation differences per method.

    Returns, for each approximate method, the differences in mutual
    information, classical and quantum correlations and in the
    covariances Gamma_14 and Gamma_13.
    """
    results = solve_all(params, spec)
    exact = results[-1]
    exact_report = correlation_report(exact.covariance, exact.covariance,
                                      measured_node)
    out = {}
    for res in results[:-1]:
        if "error" in res.diagnostics:
            out[res.method] = {"error": res.diagnostics["error"]}
            continue
        report = correlation_report(res.covariance, exact.covariance,
                                    measured_node)
        d_i = report.mutual_information - exact_report.mutual_information
        d_c = report.classical_arrow - exact_report.classical_arrow
        out[res.method] = {
            "d_mutual_info": d_i,
            "d_classical": d_c,
            "d_discord": d_i - d_c,
            "d_gamma_14": res.covariance[0, 3] - exact.covariance[0, 3],
            "d_gamma_13": res.covariance[0, 2] - exact.covariance[0, 2],
        }
    return out
