"""Local GKLS solution against a Fock-space generator oracle."""

import numpy as np
import pytest

from qwire import WireParams, decay_rate, occupation
from qwire.lme import (LME_VARIABLES, covariance_from_lme_vector,
                       lme_generator, lme_heat_currents, lme_steady_state,
                       _dissipator_part)
from qwire import gaussian
from conftest import WIDE_GAP, with_k
from oracles import (destroy, dissipator_adjoint, embed,
                     extract_affine_dynamics, quadratures)

OFF_RESONANT = WireParams(1.0, 1.3, 0.4, 0.8, 1.6, 0.05, 50.0)


class TestGeneratorOracle:
    def test_matrix_and_source_match_lindblad_generator(self):
        """Build the local master equation in a truncated two-mode Fock
        space (coupled Hamiltonian, per-node dissipators at the bare
        frequencies) and recover all 110 coefficients of the covariance
        dynamics independently."""
        p = OFF_RESONANT
        dims = (12, 12)
        xc1, pc1 = quadratures(p.omega_c, dims[0])
        xh1, ph1 = quadratures(p.omega_h, dims[1])
        xc, pc = embed(xc1, 0, dims), embed(pc1, 0, dims)
        xh, ph = embed(xh1, 1, dims), embed(ph1, 1, dims)
        a_c = embed(destroy(dims[0]), 0, dims)
        a_h = embed(destroy(dims[1]), 1, dims)
        h = ((pc @ pc + ph @ ph) / 2
             + (p.omega_c**2 * xc @ xc + p.omega_h**2 * xh @ xh) / 2
             + p.k / 2 * ((xc - xh) @ (xc - xh)))
        rates = {}
        for alpha, om, a_op in (("c", p.omega_c, a_c), ("h", p.omega_h, a_h)):
            t = p.temperature(alpha)
            rates[alpha] = (decay_rate(om, t, p) / (2 * om),
                            decay_rate(-om, t, p) / (2 * om), a_op)
        ops = [xc @ xc, pc @ pc, xc @ pc + pc @ xc,
               xh @ xh, ph @ ph, xh @ ph + ph @ xh,
               xc @ xh, pc @ ph, xc @ ph, xh @ pc]
        assert len(ops) == len(LME_VARIABLES)

        def gen(o):
            out = 1j * (h @ o - o @ h)
            for alpha in ("c", "h"):
                down, up, a_op = rates[alpha]
                out = out + down * dissipator_adjoint(a_op, o) \
                    + up * dissipator_adjoint(a_op.T.conj(), o)
            return out

        m, c, residual = extract_affine_dynamics(gen, ops, dims)
        assert residual < 1e-10
        impl = lme_generator(p)
        assert np.max(np.abs(m - impl.m)) < 1e-12
        assert np.max(np.abs(c - impl.c)) < 1e-12


class TestSteadyState:
    def test_stability_spectral_abscissa(self):
        gen = lme_generator(with_k(WIDE_GAP, 0.01))
        assert np.max(np.linalg.eigvals(gen.m).real) < 0.0

    def test_solve_residual(self):
        res = lme_steady_state(OFF_RESONANT)
        assert res.diagnostics["residual"] < 1e-12
        assert gaussian.is_physical(res.covariance)

    def test_equilibrium_decoupled_limit(self):
        p = WireParams(1.0, 2.0, 0.0, 2.0, 2.0, 1e-3, 1e3)
        res = lme_steady_state(p)
        nc, nh = occupation(1.0, 2.0), occupation(2.0, 2.0)
        expected = np.diag([nc + .5, nc + .5, (nh + .5) / 2, 2 * (nh + .5)])
        assert np.allclose(res.covariance, expected, rtol=1e-12)
        assert res.qdot_c == pytest.approx(0.0, abs=1e-16)
        assert res.qdot_h == pytest.approx(0.0, abs=1e-16)

    def test_covariance_vector_mapping(self):
        y = np.arange(1.0, 11.0)
        gamma = covariance_from_lme_vector(y)
        assert gamma[0, 0] == 1.0 and gamma[1, 1] == 2.0
        assert gamma[0, 1] == 1.5  # anticommutator average halved
        assert np.allclose(gamma, gamma.T)


class TestHeatCurrents:
    def test_equal_generator_decomposition(self):
        """Currents must equal the energy flow produced by each bath's
        dissipator alone, h . (M_a y + c_a) with h the coefficients of
        <H_S> in the covariance vector."""
        for params in (OFF_RESONANT, with_k(WIDE_GAP, 0.1)):
            res = lme_steady_state(params)
            gen = lme_generator(params)
            y = np.linalg.solve(gen.m, -gen.c)
            h_vec = np.array([
                (params.omega_c**2 + params.k) / 2, 0.5, 0.0,
                (params.omega_h**2 + params.k) / 2, 0.5, 0.0,
                -params.k, 0.0, 0.0, 0.0])
            for alpha, expected in zip(("c", "h"), res.heat_currents):
                dm, dc = _dissipator_part(params, alpha)
                assert h_vec @ (dm @ y + dc) == pytest.approx(
                    expected, rel=1e-10, abs=1e-18)

    def test_reversed_current_in_breakdown_regime(self):
        # strong internal coupling: the local solution pumps heat from
        # cold to hot even though t_h > t_c
        res = lme_steady_state(with_k(WIDE_GAP, 0.5))
        assert res.qdot_h < 0.0

    def test_balance(self):
        res = lme_steady_state(OFF_RESONANT)
        assert res.qdot_c + res.qdot_h == pytest.approx(
            0.0, abs=1e-12 * abs(res.qdot_h))
