from dataclasses import replace

import numpy as np
import pytest

from src.config import SpectralPolicy
from src.errors import ComplexSpectrum
from src.phase import ExpPolyKernel, SpectralTerm, ph_density, ph_spectral, ph_tail, ph_validate
from src.phase.spectral import _residual


class TestSpectralForm:
    @pytest.mark.phase
    def test_exponential(self, exp_ph):
        form = ph_spectral(exp_ph)
        assert len(form.terms) == 1
        assert form.dominant_rate == pytest.approx(1.0)
        assert form.dominant_eta == 1
        assert form.gamma == pytest.approx(1.0)
        assert form.mu == pytest.approx(1.0)
        assert not form.degenerate

    @pytest.mark.phase
    def test_erlang_is_one_jordan_block(self, erlang2):
        form = ph_spectral(erlang2)
        (term,) = form.terms
        assert term.rate == pytest.approx(2.0)
        assert term.eta == 2
        np.testing.assert_allclose(term.coeffs, [1.0, 2.0], atol=1e-10)
        assert form.gamma == pytest.approx(2.0)
        assert form.mu == pytest.approx(4.0)

    @pytest.mark.phase
    def test_erlang5_block(self, erlang5):
        form = ph_spectral(erlang5)
        assert form.dominant_eta == 5
        assert form.gamma == pytest.approx(1.0 / 24.0, rel=1e-8)

    @pytest.mark.phase
    def test_hyperexponential_terms_sorted_by_rate(self, hyperexp):
        form = ph_spectral(hyperexp)
        assert [t.rate for t in form.terms] == pytest.approx([1.0, 3.0])
        assert form.terms[0].coeffs[0] == pytest.approx(0.3)
        assert form.terms[1].coeffs[0] == pytest.approx(0.7)

    @pytest.mark.phase
    def test_reconstructs_tail(self, erlang5, hyperexp, erlang2):
        x = np.linspace(0.0, 25.0, 101)
        for G in (erlang5, hyperexp, erlang2):
            form = ph_spectral(G)
            np.testing.assert_allclose(form.tail(x), ph_tail(G, x), atol=1e-10)
            assert form.max_residual <= SpectralPolicy().check_tol

    @pytest.mark.phase
    @pytest.mark.parametrize("fixture", ["exp_ph", "hyperexp", "erlang2", "erlang5"])
    def test_dominant_term_carries_the_tail(self, request, fixture):
        G = request.getfixturevalue(fixture)
        form = ph_spectral(G)
        lam, eta = form.dominant_rate, form.dominant_eta

        def ratio(x):
            return ph_tail(G, x) / (form.gamma * x ** (eta - 1) * np.exp(-lam * x))

        assert ratio(600.0 / lam) == pytest.approx(1.0, rel=0.01)
        if eta > 1:
            gaps = [abs(ratio(k / lam) - 1.0) for k in (50.0, 150.0, 600.0)]
            assert gaps[0] > gaps[1] > gaps[2]

    @pytest.mark.phase
    def test_residual_is_relative_in_the_tail(self, exp_ph):
        form = ph_spectral(exp_ph)
        assert _residual(exp_ph, form) <= SpectralPolicy().check_tol
        # a 1e-7 rate error is 2e-6 relative at x = 20 but only 4e-15 absolute
        skewed = replace(form, terms=(SpectralTerm(1.0 + 1e-7, 1, (1.0,)),), _cache={})
        assert _residual(exp_ph, skewed) > SpectralPolicy().check_tol

    @pytest.mark.phase
    def test_density_kernel_matches_density(self, erlang5, hyperexp):
        x = np.linspace(0.1, 20.0, 50)
        for G in (erlang5, hyperexp):
            kernel = ph_spectral(G).density_kernel()
            np.testing.assert_allclose(kernel(x), ph_density(G, x), atol=1e-10)

    @pytest.mark.phase
    def test_unvisited_phase_is_dropped(self):
        G = ph_validate([1.0, 0.0], [[-1.0, 0.0], [0.0, -3.0]])
        form = ph_spectral(G)
        assert [t.rate for t in form.terms] == pytest.approx([1.0])

    @pytest.mark.phase
    def test_mixed_blocks(self):
        # Erlang(2, 1) feeding into an Exp(4) phase
        G = ph_validate([1.0, 0.0, 0.0], [[-1.0, 1.0, 0.0], [0.0, -1.0, 0.5], [0.0, 0.0, -4.0]])
        form = ph_spectral(G)
        assert form.dominant_rate == pytest.approx(1.0)
        assert form.dominant_eta == 2
        x = np.linspace(0.0, 20.0, 41)
        np.testing.assert_allclose(form.tail(x), ph_tail(G, x), atol=1e-9)

    @pytest.mark.phase
    def test_complex_spectrum_rejected(self):
        G = ph_validate([1.0, 0.0, 0.0], [[-1.0, 1.0, 0.0], [0.0, -1.0, 1.0], [0.5, 0.0, -1.0]])
        with pytest.raises(ComplexSpectrum):
            ph_spectral(G)


class TestExpPolyKernel:
    @pytest.fixture
    def kernel(self):
        # (1 + 2y) e^{-2y} + 0.5 e^{-y}
        return ExpPolyKernel([2.0, 1.0], [[1.0, 2.0], [0.5, 0.0]])

    @pytest.mark.phase
    def test_evaluation(self, kernel):
        y = np.array([0.0, 0.5, 3.0])
        expected = (1 + 2 * y) * np.exp(-2 * y) + 0.5 * np.exp(-y)
        np.testing.assert_allclose(kernel(y), expected, rtol=1e-14)

    @pytest.mark.phase
    def test_derivative(self, kernel):
        y = np.array([0.3, 1.0, 4.0])
        expected = -4 * y * np.exp(-2 * y) - 0.5 * np.exp(-y)
        np.testing.assert_allclose(kernel.derivative()(y), expected, rtol=1e-12)

    @pytest.mark.phase
    def test_log_forms_survive_underflow(self, kernel):
        # e^{-1000} underflows; the logarithm does not
        assert kernel(1000.0) == 0.0
        assert kernel.log_value(1000.0) == pytest.approx(np.log(0.5) - 1000.0)
        assert kernel.log_envelope(1000.0) >= kernel.log_value(1000.0)

    @pytest.mark.phase
    def test_scaled_applies_weight(self, kernel):
        assert kernel.scaled(700.0, 700.0) == pytest.approx(0.5, rel=1e-12)

    @pytest.mark.phase
    def test_abs_bound(self, kernel):
        y = np.linspace(0.0, 20.0, 2001)
        assert np.max(np.abs(kernel(y))) <= kernel.abs_bound() + 1e-12
        assert kernel.dominant_rate == 1.0
