"""Closed-form time evolution of distributions and observables."""

import math

import numpy as np
import pytest

from phasebath import (
    BathParams,
    StateSpec,
    convolve_p_numeric,
    evaluate_p,
    evolve_p_closed_form,
    evolve_p_zero_temperature,
    evolved_moments,
    initial_moments,
    initial_p_function,
    mandel_q,
    scale_bath,
)
from phasebath.descriptors import DeltaP, GaussianPolyP


class TestZeroTemperatureLaw:
    def test_point_mass_spirals_inward(self):
        ev = evolve_p_zero_temperature(DeltaP(2.0 + 0j), gamma=1.0, t=math.log(2.0))
        assert isinstance(ev, DeltaP)
        assert ev.center == pytest.approx(1.0 + 0j)

    def test_gaussian_contracts_and_renormalizes(self):
        mbar = 1.0
        g = GaussianPolyP(center=0j, width=mbar, coeffs=np.array([[1.0 / (math.pi * mbar)]]))
        ev = evolve_p_zero_temperature(g, gamma=0.5, t=1.0)
        eta2 = math.exp(-1.0)
        assert ev.width == pytest.approx(mbar * eta2)
        # Peak value rises by 1/eta^2 so the mass stays unity.
        assert evaluate_p(ev, 0.0, 0.0) == pytest.approx(1.0 / (math.pi * mbar * eta2))


class TestEvolvedMoments:
    def test_amplitude_decays_exponentially(self):
        m0 = initial_moments(StateSpec("coherent", beta=2.0 + 1.0j))
        bath = BathParams(gamma=0.7, nbar=1.2)
        mt = evolved_moments(m0, bath, 0.9)
        assert mt.mean_a == pytest.approx((2.0 + 1.0j) * math.exp(-0.63))

    def test_occupation_interpolates_to_bath(self):
        m0 = initial_moments(StateSpec("thermal", mbar=3.0))
        bath = BathParams(gamma=1.0, nbar=0.5)
        eta2 = math.exp(-2.0 * 1.0 * 0.4)
        mt = evolved_moments(m0, bath, 0.4)
        assert mt.mean_n == pytest.approx(3.0 * eta2 + 0.5 * (1.0 - eta2))

    def test_long_time_fixed_point(self):
        bath = BathParams(gamma=1.0, nbar=1.7)
        for spec in (StateSpec("coherent", beta=1.0), StateSpec("photon-added-thermal", mbar=2.0)):
            mt = evolved_moments(initial_moments(spec), bath, 40.0)
            assert abs(mt.mean_a) < 1e-12
            assert mt.mean_n == pytest.approx(1.7, abs=1e-10)
            assert mt.var_x == pytest.approx((2.0 * 1.7 + 1.0) / 4.0, abs=1e-10)
            assert mt.mandel_q() == pytest.approx(1.7, abs=1e-9)

    def test_semigroup_property(self):
        m0 = initial_moments(StateSpec("squeezed-coherent", beta=0.7 + 0.2j, squeeze=2.5))
        bath = BathParams(gamma=0.8, nbar=0.9)
        direct = evolved_moments(m0, bath, 1.3)
        stepped = evolved_moments(evolved_moments(m0, bath, 0.5), bath, 0.8)
        assert abs(direct.mean_a - stepped.mean_a) < 1e-12
        assert direct.mean_n == pytest.approx(stepped.mean_n, rel=1e-12)
        assert direct.second_factorial == pytest.approx(stepped.second_factorial, rel=1e-12)
        assert direct.var_x == pytest.approx(stepped.var_x, rel=1e-12)

    def test_uncertainty_product_never_dips(self):
        m0 = initial_moments(StateSpec("squeezed-coherent", beta=0.5, squeeze=4.0))
        bath = BathParams(gamma=1.0, nbar=0.0)
        for t in np.linspace(0.0, 3.0, 40):
            mt = evolved_moments(m0, bath, float(t))
            assert mt.var_x * mt.var_y >= 1.0 / 16.0 - 1e-12


class TestMandelQ:
    def test_coherent_stays_poissonian_at_zero_temperature(self):
        m0 = initial_moments(StateSpec("coherent", beta=1.4))
        bath = BathParams(gamma=1.0, nbar=0.0)
        for t in (0.0, 0.5, 2.0):
            assert mandel_q(m0, bath, t) == pytest.approx(0.0, abs=1e-12)

    def test_added_photon_thermal_sweep(self):
        # Starts at 1/3 for mbar = 1 and relaxes to the bath value.
        m0 = initial_moments(StateSpec("photon-added-thermal", mbar=1.0))
        bath = BathParams(gamma=1.0, nbar=0.5)
        assert mandel_q(m0, bath, 0.0) == pytest.approx(1.0 / 3.0)
        assert mandel_q(m0, bath, 30.0) == pytest.approx(0.5, abs=1e-9)


class TestClosedFormDistributions:
    def test_added_photon_thermal_coefficients(self):
        # mbar = 1, e^{-gamma t} = 1/2, bath nbar = 2:
        # width w = mbar eta^2 + nbar_t = 0.25 + 1.5 = 1.75, and the quadratic
        # coefficient is (mbar + 1) eta^2 / (pi w^3) = 2 * 0.25 / (pi 1.75^3).
        spec = StateSpec("photon-added-thermal", mbar=1.0)
        bath = BathParams(gamma=1.0, nbar=2.0)
        ev = evolve_p_closed_form(spec, bath, math.log(2.0))
        form = ev.form
        assert isinstance(form, GaussianPolyP)
        w = 1.75
        quad = 2.0 * 0.25 / (math.pi * w**3)
        const = (1.5 - 0.25) / (math.pi * w**2)
        assert form.width == pytest.approx(w)
        np.testing.assert_allclose(form.coeffs[0, 0], const, rtol=1e-12)
        np.testing.assert_allclose(form.coeffs[2, 0], quad, rtol=1e-12)
        np.testing.assert_allclose(form.coeffs[0, 2], quad, rtol=1e-12)

    def test_thermal_state_is_stationary(self):
        nbar = 1.3
        spec = StateSpec("thermal", mbar=nbar)
        bath = BathParams(gamma=0.9, nbar=nbar)
        ev = evolve_p_closed_form(spec, bath, 0.8)
        x = np.linspace(-4, 4, 41)
        before = evaluate_p(initial_p_function(spec), x[:, None], x[None, :])
        after = evaluate_p(ev.form, x[:, None], x[None, :])
        np.testing.assert_allclose(after, before, atol=1e-14)

    def test_time_zero_returns_initial_form(self):
        spec = StateSpec("photon-added-coherent", beta=1.0)
        ev = evolve_p_closed_form(spec, BathParams(gamma=1.0, nbar=1.0), 0.0)
        assert ev.form.kind == initial_p_function(spec).kind


class TestNumericConvolution:
    GRID = np.linspace(-6.0, 6.0, 61)

    @classmethod
    def template(cls):
        from phasebath import PhaseSpaceGrid

        return PhaseSpaceGrid(
            cls.GRID, cls.GRID, np.zeros((cls.GRID.size, cls.GRID.size)), {}
        )

    # At short times a strong squeeze makes the derivative series formally
    # divergent; both routes truncate at the same order, so they still agree.
    @pytest.mark.filterwarnings("ignore:derivative series does not converge")
    @pytest.mark.parametrize(
        "spec",
        [
            StateSpec("thermal", mbar=1.5),
            StateSpec("photon-added-thermal", mbar=1.0),
            StateSpec("photon-added-coherent", beta=1.0 + 0.5j),
            StateSpec("squeezed-coherent", beta=0.8, squeeze=2.0),
        ],
        ids=lambda s: s.family,
    )
    def test_matches_closed_form(self, spec):
        bath = BathParams(gamma=0.5, nbar=2.0)
        for t in (0.2, 1.0):
            closed = evaluate_p(
                evolve_p_closed_form(spec, bath, t).form,
                self.GRID[:, None],
                self.GRID[None, :],
            )
            numeric = convolve_p_numeric(
                initial_p_function(spec), bath, t, self.template()
            )
            np.testing.assert_allclose(numeric.values, closed, atol=1e-10)

    def test_point_mass_kernel(self):
        # A coherent input turns the propagator into a displaced Gaussian.
        beta = 1.0 + 1.0j
        bath = BathParams(gamma=1.0, nbar=1.0)
        t = 0.6
        scaled = scale_bath(bath, t)
        numeric = convolve_p_numeric(DeltaP(beta), bath, t, self.template())
        c = beta * scaled.decay_factor
        X, Y = np.meshgrid(self.GRID, self.GRID, indexing="ij")
        expected = np.exp(-((X - c.real) ** 2 + (Y - c.imag) ** 2) / scaled.nbar_t) / (
            math.pi * scaled.nbar_t
        )
        np.testing.assert_allclose(numeric.values, expected, atol=1e-14)
