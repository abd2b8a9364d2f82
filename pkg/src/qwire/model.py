"""Physical parameterization of the two-node wire and bath statistics.

Units: node masses, hbar and k_B are all 1, so frequencies, temperatures
and energies share the same scale.  The coupling k has units of frequency
squared and the dissipation strength lambda_sq is dimensionless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class WireParams:
    """Full configuration of the wire + baths.

    omega_c, omega_h : bare node frequencies (> 0)
    k                : inter-node coupling strength (>= 0, frequency^2)
    t_c, t_h         : bath temperatures (> 0)
    lambda_sq        : dissipation strength lambda^2 (> 0)
    cutoff           : high-frequency cutoff of the Ohmic spectral density
    """

    omega_c: float
    omega_h: float
    k: float
    t_c: float
    t_h: float
    lambda_sq: float
    cutoff: float

    def __post_init__(self):
        if self.omega_c <= 0 or self.omega_h <= 0:
            raise ValueError("node frequencies must be positive")
        if self.k < 0:
            raise ValueError("coupling k must be non-negative")
        if self.t_c <= 0 or self.t_h <= 0:
            raise ValueError("bath temperatures must be positive")
        if self.lambda_sq <= 0:
            raise ValueError("dissipation strength lambda_sq must be positive")
        if self.cutoff <= max(self.omega_c, self.omega_h):
            raise ValueError("cutoff must exceed both node frequencies")

    def temperature(self, node: str) -> float:
        if node == "c":
            return self.t_c
        if node == "h":
            return self.t_h
        raise ValueError(f"unknown node {node!r}")

    def swapped(self) -> "WireParams":
        """Same wire with the c/h labels exchanged."""
        return WireParams(self.omega_h, self.omega_c, self.k,
                          self.t_h, self.t_c, self.lambda_sq, self.cutoff)


@dataclass(frozen=True)
class NormalModes:
    """Mixing angle and frequencies of the two normal modes.

    theta is the principal value in [0, pi/2]; omega_plus >= omega_minus.
    """

    theta: float
    omega_plus: float
    omega_minus: float


def normal_modes(params: WireParams) -> NormalModes:
    """Diagonalize the coupled two-node potential.

    cos^2(theta) = (-d + sqrt(4k^2 + d^2)) / (2 sqrt(4k^2 + d^2)) with
    d = omega_h^2 - omega_c^2, and
    Omega_pm^2 = (omega_c^2 + omega_h^2 + 2k -++ sqrt(4k^2 + d^2)) / 2.

    The doubly degenerate point k = 0, d = 0 returns theta = pi/4
    (continuous resonant limit).
    """
    d = params.omega_h**2 - params.omega_c**2
    root = math.hypot(2.0 * params.k, d)
    if root == 0.0:
        cos2 = 0.5
    else:
        cos2 = (-d + root) / (2.0 * root)
    cos2 = min(max(cos2, 0.0), 1.0)
    theta = math.acos(math.sqrt(cos2))
    tr = params.omega_c**2 + params.omega_h**2 + 2.0 * params.k
    om_p = math.sqrt(0.5 * (tr + root))
    om_m = math.sqrt(0.5 * (tr - root))
    return NormalModes(theta=theta, omega_plus=om_p, omega_minus=om_m)


def spectral_density(omega, params: WireParams):
    """Ohmic spectral density with Lorentz-Drude cutoff.

    J(w) = lambda^2 w cutoff^2 / (w^2 + cutoff^2); odd in w.
    """
    omega = np.asarray(omega, dtype=float)
    val = params.lambda_sq * omega * params.cutoff**2 / (omega**2 + params.cutoff**2)
    return val if val.ndim else float(val)


def occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation n = 1/(exp(w/T) - 1) for w > 0."""
    if omega <= 0:
        raise ValueError("occupation requires omega > 0")
    if temperature <= 0:
        raise ValueError("occupation requires T > 0")
    x = omega / temperature
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def decay_rate(omega: float, temperature: float, params: WireParams) -> float:
    """GKLS decay rate gamma(w).

    For w > 0: gamma = 2 J(w) (1 + n(w)).  For w < 0 it is evaluated as
    2 J(|w|) n(|w|), which enforces detailed balance
    gamma(-w) = exp(-w/T) gamma(w) exactly.
    """
    if abs(omega) < 1e-12 * params.cutoff:
        raise ValueError("decay rate is not evaluated at omega = 0")
    a = abs(omega)
    n = occupation(a, temperature)
    j = params.lambda_sq * a * params.cutoff**2 / (a**2 + params.cutoff**2)
    if omega > 0:
        return 2.0 * j * (1.0 + n)
    return 2.0 * j * n


def secular_validity_margin(params: WireParams) -> float:
    """Ratio of dissipation strength to the +/- normal-mode gap.

    r = lambda^2 / sqrt((4k^2 + d^2) / (2 (omega_h^2 + omega_c^2))).
    r << 1 means the secular approximation (and hence the global GKLS
    solution) is trustworthy; r >~ 1 flags its breakdown.
    """
    d = params.omega_h**2 - params.omega_c**2
    gap = math.sqrt((4.0 * params.k**2 + d**2)
                    / (2.0 * (params.omega_h**2 + params.omega_c**2)))
    if gap == 0.0:
        return math.inf
    return params.lambda_sq / gap


def rotation_matrix(theta: float) -> np.ndarray:
    """Orthogonal map from normal-mode quadratures to local ones.

    Maps (eta_+, Pi_+, eta_-, Pi_-) to (X_c, P_c, X_h, P_h):
    X_c = cos(t) eta_+ + sin(t) eta_-,  X_h = -sin(t) eta_+ + cos(t) eta_-,
    and identically for the momenta.
    """
    c, s = math.cos(theta), math.sin(theta)
    return np.array([
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, s],
        [-s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ])
