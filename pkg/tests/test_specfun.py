import numpy as np
import pytest

from hypfourier import oracle
from hypfourier.specfun import QuadratureError, plancherel_density, spherical_function

TANH_PI_OVER_2PI = 0.15856162559495787
# conical Legendre function at (lambda=0, r=1), frozen from the Laplace
# integral with a fine independent rule (matches mpmath.legenp to 1e-13)
PHI_0_AT_1 = 0.94086215924935


class TestSphericalFunction:
    def test_normalized_at_origin(self):
        for lam in (0.0, 0.5, 1.0, 5.0):
            assert spherical_function(lam, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_mehler_value_at_zero_frequency(self):
        assert spherical_function(0.0, 1.0) == pytest.approx(PHI_0_AT_1, abs=1e-8)

    def test_even_in_frequency(self):
        lam = np.array([0.3, 1.7, 6.0, 19.0])
        r = np.array([0.2, 1.1, 3.0, 5.5])
        a = spherical_function(lam[:, None], r[None, :])
        b = spherical_function(-lam[:, None], r[None, :])
        assert np.abs(a - b).max() <= 1e-10

    def test_matches_conical_function_on_grid(self):
        lam = np.linspace(0.0, 20.0, 20)
        r = np.linspace(0.0, 6.0, 20)
        a = spherical_function(lam[:, None], r[None, :])
        b = oracle.conical_function(lam[:, None], r[None, :])
        assert np.abs(a - b).max() <= 1e-8

    def test_contraction(self):
        lam = np.linspace(0.0, 20.0, 15)
        r = np.linspace(0.0, 6.0, 15)
        vals = spherical_function(lam[:, None], r[None, :])
        assert np.all(np.abs(vals) <= 1.0 + 1e-12)
        # strict contraction away from the origin
        away = spherical_function(lam[:, None], np.array([0.5, 2.0, 4.0])[None, :])
        assert np.all(np.abs(away) < 1.0)

    def test_broadcast_shapes(self):
        out = spherical_function(np.ones((3, 1)), np.ones((1, 4)))
        assert out.shape == (3, 4)
        assert isinstance(spherical_function(1.0, 1.0), float)

    def test_rejects_negative_radius(self):
        with pytest.raises(ValueError):
            spherical_function(1.0, -0.1)

    def test_nonconvergence_reported(self):
        # oscillation count far beyond the node cap
        with pytest.raises(QuadratureError):
            spherical_function(2.0e5, 6.0)


class TestPlancherelDensity:
    def test_vanishes_at_zero(self):
        assert plancherel_density(0.0) == 0.0

    def test_value_at_one(self):
        assert plancherel_density(1.0) == pytest.approx(TANH_PI_OVER_2PI, abs=1e-15)

    def test_tanh_saturation(self):
        lam = 20.0
        assert plancherel_density(lam) / lam == pytest.approx(
            1.0 / (2.0 * np.pi), abs=1e-8
        )

    def test_even_nonnegative(self):
        lam = np.linspace(-30, 30, 101)
        p = plancherel_density(lam)
        assert np.all(p >= 0.0)
        assert np.abs(p - p[::-1]).max() == 0.0
