"""
Fock-Basis Reference Tests

Checks the Gaussian subtraction formulas against a brute-force calculation
on a truncated Fock basis and against the analytic subtracted-TMSV statistics.
"""

import numpy as np
import pytest

from src.conditioning.controller import (
    fidelity,
    phonon_distribution,
    subtract_photon,
    tmsv_subtracted_distribution,
    wigner_eval,
)
from tests.conftest import fock_subtracted_tmsv, fock_wigner


SQUEEZINGS = [0.05, 0.1, 0.3]


pytestmark = pytest.mark.integration


class TestSubtractedTmsv:
    """Subtracted two-mode squeezed vacuum against the truncated Fock basis."""

    @pytest.mark.parametrize('s', SQUEEZINGS)
    def test_brute_force_is_normalized(self, s):
        """Test the Fock reference is a normalized state with no vacuum."""
        rho = fock_subtracted_tmsv(s)
        assert np.trace(rho) == pytest.approx(1.0, abs=1e-14)
        assert rho[0, 0] == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize('s', SQUEEZINGS)
    def test_distribution_matches_brute_force(self, s, tmsv_covariance):
        """Test P(n) for n ≤ 5 against the Fock reference."""
        dist = phonon_distribution(subtract_photon(tmsv_covariance(s)), 5)
        reference = np.real(np.diag(fock_subtracted_tmsv(s)))[:6]
        assert np.allclose(dist.probs, reference, rtol=0, atol=1e-6)

    @pytest.mark.parametrize('s', SQUEEZINGS)
    def test_distribution_matches_analytic(self, s, tmsv_covariance):
        """Test P(n) for n ≤ 5 against n·tanh^{2n}s/(cosh s·sinh s)²."""
        dist = phonon_distribution(subtract_photon(tmsv_covariance(s)), 5)
        analytic = [tmsv_subtracted_distribution(s, n) for n in range(6)]
        assert np.allclose(dist.probs, analytic, rtol=0, atol=1e-6)

    @pytest.mark.parametrize('s', SQUEEZINGS)
    def test_analytic_matches_brute_force(self, s):
        """Test the analytic statistics against the Fock reference."""
        reference = np.real(np.diag(fock_subtracted_tmsv(s)))
        for n in range(10):
            assert tmsv_subtracted_distribution(s, n) == pytest.approx(reference[n], abs=1e-12)

    @pytest.mark.parametrize('s', SQUEEZINGS)
    def test_wigner_matches_brute_force(self, s, tmsv_covariance):
        """Test W at 25 phase-space points against the Fock reference."""
        w = subtract_photon(tmsv_covariance(s))
        axis = np.linspace(-1.2, 1.2, 5)
        delta_r, delta_i = np.meshgrid(axis, axis, indexing='ij')
        expected = fock_wigner(fock_subtracted_tmsv(s), delta_r, delta_i)
        assert np.allclose(wigner_eval(w, delta_r, delta_i), expected, rtol=0, atol=1e-8)

    @pytest.mark.parametrize('s', SQUEEZINGS)
    def test_fidelity_is_single_phonon_weight(self, s, tmsv_covariance):
        """Test the fidelity equals ⟨1|ρ|1⟩ of the Fock reference."""
        expected = np.real(fock_subtracted_tmsv(s)[1, 1])
        assert fidelity(subtract_photon(tmsv_covariance(s))) == pytest.approx(expected, abs=1e-8)

    def test_weak_squeezing_approaches_single_phonon(self, tmsv_covariance):
        """Test fidelity rises toward one as squeezing falls."""
        values = [fidelity(subtract_photon(tmsv_covariance(s))) for s in sorted(SQUEEZINGS, reverse=True)]
        assert values == sorted(values)
        assert values[-1] > 0.99
