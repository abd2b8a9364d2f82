"""Exact steady state from the frequency-domain quantum Langevin equations.

Every covariance is a single integral over the real frequency axis of a
rational-times-coth kernel.  The integrand has resonances of width of
order lambda^2 near the (shifted) normal-mode frequencies, so the
adaptive quadrature is seeded with mandatory breakpoints there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec

from .model import WireParams, secular_validity_margin
from .results import SteadyStateResult

#: (node index, momentum flag) for each quadrature (X_c, P_c, X_h, P_h)
_NODE = (0, 0, 1, 1)
_IS_MOMENTUM = (False, True, False, True)

#: upper-triangular element order used internally
_ELEMENTS = [(i, j) for i in range(4) for j in range(i, 4)]


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge to the requested tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and limits of the covariance integrals."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    max_omega_factor: float = 100.0   # upper limit in units of the cutoff
    limit: int = 2000                 # max number of subintervals

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_omega_factor <= 1:
            raise ValueError("max_omega must exceed the cutoff")


def shifted_frequency_sq(params: WireParams, node: str) -> float:
    """Bare frequency squared plus the bath-induced shift lambda^2 cutoff."""
    om = params.omega_c if node == "c" else params.omega_h
    return om**2 + params.lambda_sq * params.cutoff


def chi_hat(omega, params: WireParams):
    """Fourier-domain dissipation kernel lambda^2 cutoff^2 / (cutoff - i w).

    Its imaginary part equals the (odd) spectral density for all real w
    and its real part obeys the Kramers-Kronig relation.
    """
    return params.lambda_sq * params.cutoff**2 / (params.cutoff - 1j * np.asarray(omega))


def _response_inverse(omega, params: WireParams):
    """Inverse of the 2x2 response matrix, vectorized over omega.

    A(w) = [[wc~^2 - w^2 + k - chi, -k], [-k, wh~^2 - w^2 + k - chi]].
    Returns the three independent entries (inv11, inv22, inv12).
    """
    chi = chi_hat(omega, params)
    omega = np.asarray(omega, dtype=float)
    d_c = shifted_frequency_sq(params, "c") - omega**2 + params.k - chi
    d_h = shifted_frequency_sq(params, "h") - omega**2 + params.k - chi
    det = d_c * d_h - params.k**2
    return d_h / det, d_c / det, params.k / det


def _noise_weight(omega, params: WireParams, temperature: float):
    """J(w) coth(w / 2T) with the analytic w -> 0 limit substituted.

    The limit is 2 T lambda^2 cutoff^2 / (w^2 + cutoff^2).
    """
    omega = np.asarray(omega, dtype=float)
    lorentz = params.lambda_sq * params.cutoff**2 / (omega**2 + params.cutoff**2)
    guard = 1e-8 * params.cutoff
    small = np.abs(omega) < guard
    x = np.where(small, 1.0, omega / (2.0 * temperature))
    out = np.where(small, 2.0 * temperature * lorentz,
                   lorentz * omega / np.tanh(x))
    return out


def _integrand_matrix(omega, params: WireParams) -> np.ndarray:
    """All ten covariance integrands at one (or an array of) frequency.

    Gamma_ij = int_0^inf dw (1/pi) Re[f_i(w) f_j(-w) sum_a
               G_{m(i),a}(w) conj(G_{m(j),a}(w)) J(w) coth(w/2T_a)].
    """
    inv11, inv22, inv12 = _response_inverse(omega, params)
    g = np.array([[inv11, inv12], [inv12, inv22]])
    w_c = _noise_weight(omega, params, params.t_c)
    w_h = _noise_weight(omega, params, params.t_h)
    omega = np.asarray(omega, dtype=float)
    out = []
    for i, j in _ELEMENTS:
        mi, mj = _NODE[i], _NODE[j]
        corr = (g[mi, 0] * np.conj(g[mj, 0]) * w_c
                + g[mi, 1] * np.conj(g[mj, 1]) * w_h)
        # f_i(w) f_j(-w): positions contribute 1, momenta -i w and +i w
        if _IS_MOMENTUM[i] and _IS_MOMENTUM[j]:
            val = omega**2 * np.real(corr)
        elif _IS_MOMENTUM[i] != _IS_MOMENTUM[j]:
            sign = 1.0 if _IS_MOMENTUM[j] else -1.0
            val = sign * omega * (-np.imag(corr))
        else:
            val = np.real(corr)
        out.append(val / math.pi)
    return np.array(out)


def integrand_probe(omega: float, i: int, j: int,
                    params: WireParams) -> float:
    """Value of the half-line integrand of Gamma_ij at one frequency."""
    idx = _ELEMENTS.index((min(i, j), max(i, j)))
    return float(_integrand_matrix(float(omega), params)[idx])


def _breakpoints(params: WireParams, max_omega: float) -> list:
    """Mandatory subdivision points: resonances, shifted bare lines, cutoff."""
    from .model import normal_modes
    nm = normal_modes(params)
    shift = params.lambda_sq * params.cutoff
    pts = {nm.omega_plus, nm.omega_minus,
           math.sqrt(nm.omega_plus**2 + shift),
           math.sqrt(nm.omega_minus**2 + shift),
           math.sqrt(shifted_frequency_sq(params, "c") + params.k),
           math.sqrt(shifted_frequency_sq(params, "h") + params.k),
           params.cutoff}
    return sorted(p for p in pts if 0.0 < p < max_omega)


def exact_covariance(params: WireParams,
                     spec: QuadratureSpec = QuadratureSpec()) -> tuple:
    """Stationary covariance matrix and quadrature error estimate."""
    max_omega = spec.max_omega_factor * params.cutoff
    points = _breakpoints(params, max_omega)
    res = quad_vec(lambda w: _integrand_matrix(w, params),
                   0.0, max_omega,
                   epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                   limit=spec.limit, points=points, norm="max",
                   full_output=True)
    values, err, info = res
    if not info.success:
        raise QuadratureError(
            f"covariance quadrature did not converge; error estimate {err:.3g}")
    gamma = np.zeros((4, 4))
    for (i, j), v in zip(_ELEMENTS, values):
        gamma[i, j] = gamma[j, i] = v
    return gamma, float(err)


def exact_heat_current(gamma: np.ndarray, k: float) -> tuple:
    """Stationary currents from the cross covariances of the bond.

    The energy flow from the hot node into the coupling bond is
    -k <X_c P_h> and the flow out of the bond into the cold node is
    k <X_h P_c>; at stationarity both equal the hot-bath current, so
    Qdot_h = (k/2)(Gamma_23 - Gamma_14) and Qdot_c = -Qdot_h.
    """
    qdot_h = 0.5 * k * (gamma[1, 2] - gamma[0, 3])
    return (-qdot_h, qdot_h)


def exact_steady_state(params: WireParams,
                       spec: QuadratureSpec = QuadratureSpec()) -> SteadyStateResult:
    """Exact non-equilibrium steady state (ground truth for this model)."""
    gamma, err = exact_covariance(params, spec)
    return SteadyStateResult(
        method="exact",
        covariance=gamma,
        heat_currents=exact_heat_current(gamma, params.k),
        diagnostics={"secular_margin": secular_validity_margin(params),
                     "quadrature_error": err},
    )
