"""Exact Langevin solver: kernel identities, tails, cross-method checks
and an independent time-domain oracle with explicitly discretized baths."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from qwire import (WireParams, exact_covariance, exact_heat_current,
                   exact_steady_state, redfield_steady_state,
                   spectral_density)
from qwire.exact import (QuadratureSpec, chi_hat, integrand_probe,
                         shifted_frequency_sq)
from qwire import gaussian
from conftest import NEAR_DEGENERATE, WIDE_GAP, with_k


class TestDissipationKernel:
    def test_imaginary_part_is_spectral_density(self):
        p = WIDE_GAP
        w = np.linspace(-3e3, 3e3, 13)
        assert np.allclose(chi_hat(w, p).imag, spectral_density(w, p),
                           rtol=1e-12)

    def test_real_part_at_cutoff(self):
        p = WIDE_GAP
        assert chi_hat(p.cutoff, p).real == pytest.approx(
            p.lambda_sq * p.cutoff / 2.0, rel=1e-12)

    def test_kramers_kronig(self):
        """Re chi(w0) must equal the principal-value transform of Im chi.

        The pole is removed by subtraction (the subtracted term has zero
        principal value on the half line) and the half line is compactified
        with w = cutoff tan(u) so the slow 1/w^2 tail is integrated fully.
        """
        p = WIDE_GAP
        w0 = p.cutoff
        j0 = spectral_density(w0, p)

        def integrand(u):
            w = p.cutoff * math.tan(u)
            jacobian = p.cutoff / math.cos(u)**2
            return jacobian * (spectral_density(w, p) * w - j0 * w0) \
                / (w**2 - w0**2)

        val, _ = quad(integrand, 0.0, math.pi / 2,
                      points=[math.atan2(w0, p.cutoff)], limit=400,
                      epsabs=1e-13, epsrel=1e-11)
        re_chi = (2.0 / math.pi) * val
        assert re_chi == pytest.approx(chi_hat(w0, p).real, rel=1e-6)

    def test_frequency_shift(self):
        p = WIDE_GAP
        assert shifted_frequency_sq(p, "c") == pytest.approx(
            p.omega_c**2 + p.lambda_sq * p.cutoff)


class TestIntegrandTails:
    def test_position_tail_slope(self):
        """Position-position integrands fall off like w^-5 beyond the
        cutoff (one w^-4 from the response, w^-2 from the noise, times the
        linear coth growth)."""
        p = with_k(WIDE_GAP, 0.1)
        w = np.logspace(math.log10(50 * p.cutoff), math.log10(500 * p.cutoff),
                        9)
        vals = np.array([integrand_probe(x, 0, 0, p) for x in w])
        slope = np.polyfit(np.log(w), np.log(np.abs(vals)), 1)[0]
        assert slope == pytest.approx(-5.0, abs=0.05)

    def test_momentum_tail_slope(self):
        p = with_k(WIDE_GAP, 0.1)
        w = np.logspace(math.log10(50 * p.cutoff), math.log10(500 * p.cutoff),
                        9)
        vals = np.array([integrand_probe(x, 1, 1, p) for x in w])
        slope = np.polyfit(np.log(w), np.log(np.abs(vals)), 1)[0]
        assert slope == pytest.approx(-3.0, abs=0.05)


class TestSteadyState:
    def test_quadrature_error_is_small(self):
        res = exact_steady_state(with_k(WIDE_GAP, 0.1))
        scale = np.max(np.abs(res.covariance))
        assert res.diagnostics["quadrature_error"] < 1e-8 * scale
        assert gaussian.is_physical(res.covariance)

    def test_same_node_cross_covariances_vanish(self):
        gamma = exact_steady_state(with_k(WIDE_GAP, 0.1)).covariance
        assert gamma[0, 1] == 0.0
        assert gamma[2, 3] == 0.0

    def test_label_swap_symmetry(self):
        p = with_k(WIDE_GAP, 0.2)
        res = exact_steady_state(p)
        res_swapped = exact_steady_state(p.swapped())
        perm = np.zeros((4, 4))
        perm[0, 2] = perm[1, 3] = perm[2, 0] = perm[3, 1] = 1.0
        assert np.allclose(res_swapped.covariance,
                           perm @ res.covariance @ perm.T,
                           rtol=1e-9, atol=1e-12)
        assert res_swapped.qdot_h == pytest.approx(res.qdot_c, rel=1e-8)

    def test_equilibrium_current_vanishes(self):
        p = WireParams(1.0, 1.4, 0.3, 2.0, 2.0, 1e-3, 1e3)
        res = exact_steady_state(p)
        scale = np.max(np.abs(res.covariance))
        assert abs(res.qdot_h) < 1e-10 * scale

    def test_current_matches_redfield_in_born_markov_regime(self):
        params = with_k(NEAR_DEGENERATE, 1e-2)
        q_exact = exact_steady_state(params).qdot_h
        q_red = redfield_steady_state(params).qdot_h
        assert q_exact > 0.0
        assert q_exact == pytest.approx(q_red, rel=1e-3)

    def test_current_sign_flips_with_gradient(self):
        p = WireParams(1.0, 1.3, 0.4, 1.6, 0.8, 0.05, 50.0)
        assert exact_steady_state(p).qdot_h < 0.0

    def test_heat_current_from_covariance(self):
        gamma = np.zeros((4, 4))
        gamma[1, 2] = gamma[2, 1] = 0.3
        gamma[0, 3] = gamma[3, 0] = 0.1
        assert exact_heat_current(gamma, 2.0) == pytest.approx((-0.2, 0.2))

    def test_quadrature_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(rel_tol=0.0)
        with pytest.raises(ValueError):
            QuadratureSpec(max_omega_factor=0.5)


@pytest.mark.slow
class TestDiscretizedBathOracle:
    """Propagate the closed system + baths Hamiltonian with explicitly
    discretized baths and compare the late-time system covariance."""

    def test_time_domain_agrees(self):
        p = WireParams(1.0, 1.3, 0.4, 0.8, 1.6, 0.05, 4.0)
        n_modes = 1400
        omega_max = 25.0
        d_omega = omega_max / n_modes
        w_j = (np.arange(n_modes) + 0.5) * d_omega
        c_sq = (2.0 / math.pi) * spectral_density(w_j, p) * w_j * d_omega
        c_j = np.sqrt(c_sq)
        counterterm = np.sum(c_sq / w_j**2)

        m = 2 + 2 * n_modes
        stiffness = np.zeros((m, m))
        stiffness[0, 0] = p.omega_c**2 + p.k + counterterm
        stiffness[1, 1] = p.omega_h**2 + p.k + counterterm
        stiffness[0, 1] = stiffness[1, 0] = -p.k
        idx = np.arange(n_modes)
        stiffness[2 + idx, 2 + idx] = w_j**2
        stiffness[2 + n_modes + idx, 2 + n_modes + idx] = w_j**2
        stiffness[0, 2 + idx] = stiffness[2 + idx, 0] = -c_j
        stiffness[1, 2 + n_modes + idx] = -c_j
        stiffness[2 + n_modes + idx, 1] = -c_j

        evals, evecs = np.linalg.eigh(stiffness)
        assert evals.min() > 0.0
        sq = np.sqrt(evals)

        def nbar(w, t):
            return 1.0 / np.expm1(w / t)

        # product initial state: system ground state, baths thermal
        g_x = np.concatenate([
            [1 / (2 * p.omega_c), 1 / (2 * p.omega_h)],
            (nbar(w_j, p.t_c) + 0.5) / w_j, (nbar(w_j, p.t_h) + 0.5) / w_j])
        g_p = np.concatenate([
            [p.omega_c / 2, p.omega_h / 2],
            w_j * (nbar(w_j, p.t_c) + 0.5), w_j * (nbar(w_j, p.t_h) + 0.5)])

        v_sys = evecs[:2, :]

        def covariance_at(t):
            cos_t, sin_t = np.cos(sq * t), np.sin(sq * t)
            r_c = (v_sys * cos_t) @ evecs.T
            r_s = (v_sys * (sin_t / sq)) @ evecs.T
            r_d = -(v_sys * (sq * sin_t)) @ evecs.T
            g_xx = (r_c * g_x) @ r_c.T + (r_s * g_p) @ r_s.T
            g_pp = (r_d * g_x) @ r_d.T + (r_c * g_p) @ r_c.T
            g_xp = (r_c * g_x) @ r_d.T + (r_s * g_p) @ r_c.T
            gamma = np.empty((4, 4))
            gamma[0, 0], gamma[2, 2] = g_xx[0, 0], g_xx[1, 1]
            gamma[0, 2] = gamma[2, 0] = g_xx[0, 1]
            gamma[1, 1], gamma[3, 3] = g_pp[0, 0], g_pp[1, 1]
            gamma[1, 3] = gamma[3, 1] = g_pp[0, 1]
            gamma[0, 1] = gamma[1, 0] = g_xp[0, 0]
            gamma[2, 3] = gamma[3, 2] = g_xp[1, 1]
            gamma[0, 3] = gamma[3, 0] = g_xp[0, 1]
            gamma[1, 2] = gamma[2, 1] = g_xp[1, 0]
            return gamma

        # several relaxation times in, still far below the recurrence
        # time 2 pi / d_omega; average over a window to wash the residual
        # transient oscillation
        samples = np.linspace(130.0, 150.0, 17)
        time_domain = np.mean([covariance_at(t) for t in samples], axis=0)
        reference, _ = exact_covariance(p)
        scale = np.max(np.abs(reference))
        assert np.max(np.abs(time_domain - reference)) < 0.05 * scale
