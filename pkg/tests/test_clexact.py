import numpy as np
import pytest

from mfgkit import bath, clexact
from mfgkit.opcore import dag

P_REF = dict(omega_0=1.0, gamma=0.5, omega_D=5.0, beta=2.0)


class TestCubicRoots:
    def test_roots_satisfy_cubic_and_order(self):
        p = clexact.CLParams(**P_REF)
        roots = clexact.cubic_roots(p)
        assert roots[0].imag == 0.0
        coeffs = [1.0, -p.omega_D, p.omega_0**2 + p.gamma * p.omega_D,
                  -p.omega_D * p.omega_0**2]
        for mu in roots:
            assert abs(np.polyval(coeffs, mu)) < 1e-9

    def test_conjugate_pair_when_underdamped(self):
        roots = clexact.cubic_roots(clexact.CLParams(**P_REF))
        assert roots[1] == pytest.approx(np.conj(roots[2]), abs=1e-10)

    def test_roots_continuity(self):
        base = clexact.cubic_roots(clexact.CLParams(**P_REF))
        bumped = clexact.cubic_roots(
            clexact.CLParams(1.0 + 1e-8, 0.5, 5.0, 2.0)
        )
        for a, b in zip(base, bumped):
            assert abs(a - b) < 1e-6

    def test_invalid_parameters_rejected(self):
        with pytest.raises(ValueError):
            clexact.CLParams(omega_0=-1.0, gamma=0.5, omega_D=5.0, beta=2.0)
        with pytest.raises(ValueError):
            clexact.CLParams(omega_0=1.0, gamma=0.5, omega_D=5.0, beta=np.inf)


class TestLogPartition:
    def test_frozen_value(self):
        p = clexact.CLParams(**P_REF)
        assert clexact.log_partition(p) == pytest.approx(-1.0505475651, abs=1e-8)

    def test_free_limit_matches_harmonic_oscillator(self):
        # gamma -> 0: Z -> 1/(2 sinh(beta w_0/2))
        p = clexact.CLParams(omega_0=1.0, gamma=1e-10, omega_D=5.0, beta=2.0)
        expected = -np.log(2 * np.sinh(1.0))
        assert clexact.log_partition(p) == pytest.approx(expected, abs=1e-8)


class TestMoments:
    def test_frozen_values(self):
        m = clexact.moments(clexact.CLParams(**P_REF))
        assert m.xx == pytest.approx(0.6478559339, abs=1e-7)
        assert m.pp == pytest.approx(0.8394413652, abs=1e-7)
        assert m.px == -0.5j

    def test_free_limit(self):
        # gamma -> 0: xx = pp = (1/2) coth(beta w_0 / 2)
        m = clexact.moments(
            clexact.CLParams(omega_0=1.0, gamma=1e-8, omega_D=5.0, beta=2.0)
        )
        expected = 0.5 / np.tanh(1.0)
        assert m.xx == pytest.approx(expected, rel=1e-5)
        assert m.pp == pytest.approx(expected, rel=1e-5)

    def test_moments_increase_with_temperature(self):
        betas = [4.0, 2.0, 1.0, 0.5]
        ms = [clexact.moments(clexact.CLParams(1.0, 0.5, 5.0, b)) for b in betas]
        assert all(a.xx < b.xx for a, b in zip(ms, ms[1:]))
        assert all(a.pp < b.pp for a, b in zip(ms, ms[1:]))

    def test_coupling_squeezes_position_below_momentum(self):
        m = clexact.moments(clexact.CLParams(**P_REF))
        assert m.xx < m.pp

    def test_heisenberg_guard(self):
        with pytest.raises(ValueError):
            clexact.OscillatorMoments(xx=0.3, pp=0.3)


class TestCrossRoute:
    def test_reference_point_agreement(self):
        p = clexact.CLParams(**P_REF)
        m = clexact.moments(p)
        J = bath.DrudeLorentz(gamma=p.gamma, omega_d=p.omega_D)
        x2 = clexact.position_correlation(J, p.beta, p.omega_0)
        # unit-free <x~^2> = omega_0 <x^2> at m = 1
        assert p.omega_0 * x2 == pytest.approx(m.xx, rel=1e-6)

    def test_free_spectral_density_branch(self):
        J = bath.DrudeLorentz(gamma=0.0, omega_d=5.0)
        x2 = clexact.position_correlation(J, 2.0, 1.0)
        assert x2 == pytest.approx(0.5 / np.tanh(1.0), rel=1e-10)

    def test_correlator_decays_with_time_lag(self):
        J = bath.DrudeLorentz(gamma=0.5, omega_d=5.0)
        c0 = clexact.position_correlation(J, 2.0, 1.0, 0.0)
        c5 = clexact.position_correlation(J, 2.0, 1.0, 5.0)
        assert abs(c5) < c0


class TestGaussianState:
    def test_vacuum(self):
        m = clexact.OscillatorMoments(xx=0.5, pp=0.5)
        cov, rho = clexact.gaussian_covariance_state(m, n_max=12)
        assert np.allclose(cov, 0.5 * np.eye(2))
        assert rho[0, 0].real == pytest.approx(1.0, abs=1e-12)

    def test_thermal_populations(self):
        beta_w = 1.3
        val = 0.5 / np.tanh(beta_w / 2)
        _, rho = clexact.gaussian_covariance_state(
            clexact.OscillatorMoments(xx=val, pp=val), n_max=80
        )
        pops = np.diag(rho).real
        ratios = pops[1:6] / pops[0:5]
        assert np.allclose(ratios, np.exp(-beta_w), atol=1e-10)

    def test_purity_formula(self):
        m = clexact.moments(clexact.CLParams(**P_REF))
        _, rho = clexact.gaussian_covariance_state(m)
        purity = np.trace(rho @ rho).real
        assert purity == pytest.approx(1 / (2 * np.sqrt(m.xx * m.pp)), abs=1e-6)

    def test_second_moments_reproduced(self):
        m = clexact.moments(clexact.CLParams(**P_REF))
        _, rho = clexact.gaussian_covariance_state(m)
        n = rho.shape[0]
        a = np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1).astype(complex)
        x = (a + dag(a)) / np.sqrt(2)
        p_op = 1j * (dag(a) - a) / np.sqrt(2)
        assert np.trace(rho @ x @ x).real == pytest.approx(m.xx, rel=1e-6)
        assert np.trace(rho @ p_op @ p_op).real == pytest.approx(m.pp, rel=1e-6)
