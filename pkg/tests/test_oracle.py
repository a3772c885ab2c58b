import numpy as np
import pytest

from hypfourier import gabor, helgason, oracle
from hypfourier.grids import SampledFunction, make_bump, norm2


class TestConicalFunction:
    def test_normalized_at_origin(self):
        for lam in (0.0, 1.0, 7.0):
            assert oracle.conical_function(lam, 0.0) == pytest.approx(1.0, abs=1e-13)

    def test_against_mpmath(self):
        mpmath = pytest.importorskip("mpmath")
        for lam, r in [(0.0, 1.0), (0.5, 0.4), (2.0, 1.5), (5.0, 2.5), (12.0, 4.0)]:
            ref = mpmath.legenp(mpmath.mpc(-0.5, lam), 0, mpmath.cosh(r))
            assert abs(float(mpmath.im(ref))) < 1e-12
            assert oracle.conical_function(lam, r) == pytest.approx(
                float(mpmath.re(ref)), abs=1e-10
            )


class TestMehlerFockPair:
    def test_zero_maps_to_zero(self, desk):
        dg, sg, _ = desk
        F = oracle.mehler_fock_forward(np.zeros(dg.n_r), dg.r, dg.r_weights, sg.lam)
        assert np.abs(F).max() == 0.0

    def test_linearity(self, desk, rng):
        dg, sg, _ = desk
        a = rng.normal(size=dg.n_r)
        b = rng.normal(size=dg.n_r)
        fa = oracle.mehler_fock_forward(a, dg.r, dg.r_weights, sg.lam)
        fb = oracle.mehler_fock_forward(b, dg.r, dg.r_weights, sg.lam)
        fab = oracle.mehler_fock_forward(2.0 * a - 3.5 * b, dg.r, dg.r_weights, sg.lam)
        assert np.abs(fab - (2.0 * fa - 3.5 * fb)).max() <= 1e-13 * np.abs(fab).max()

    def test_round_trip(self, desk):
        dg, sg, _ = desk
        prof = np.exp(-dg.r**2 / (2 * 0.6**2))
        F = oracle.mehler_fock_forward(prof, dg.r, dg.r_weights, sg.lam)
        back = oracle.mehler_fock_inverse(F, sg.lam, sg.lam_quad_weights, dg.r)
        err = np.sqrt(np.sum(np.abs(back - prof) ** 2 * dg.r_weights)
                      / np.sum(prof**2 * dg.r_weights))
        assert err <= 1e-4

    def test_narrow_bump_low_frequency_limit(self, desk):
        # F(lam) -> bump mass as the bump narrows (kernel -> 1 near the origin)
        dg, sg, _ = desk
        lam_small = np.array([0.1, 0.3])
        for width in (0.2, 0.1):
            prof = np.exp(-dg.r**2 / (2 * width**2))
            mass = float(np.sum(prof * dg.r_weights)) * 2 * np.pi
            F = oracle.mehler_fock_forward(prof, dg.r, dg.r_weights, lam_small)
            ratio = 2 * np.pi * F.real / mass
            if width == 0.1:
                assert np.all(np.abs(ratio - 1.0) <= 1e-2)


class TestDenseMatrices:
    def test_zero_vector(self, probe):
        dg, sg, _ = probe
        M = oracle.dense_transform_matrix(dg, sg)
        assert np.abs(M @ np.zeros(dg.n_r * dg.n_theta)).max() == 0.0

    def test_matches_forward(self, probe):
        dg, sg, _ = probe
        f = make_bump(dg, 0.2 + 0.1j, 0.5)
        M = oracle.dense_transform_matrix(dg, sg)
        direct = (M @ f.values.reshape(-1)).reshape(sg.shape())
        fast = helgason.forward(f, sg).values
        assert np.abs(direct - fast).max() <= 1e-10 * np.abs(fast).max()

    def test_gabor_matrix_matches(self, probe):
        dg, sg, tg = probe
        f = make_bump(dg, 0.25 + 0.05j, 0.5)
        w = gabor.Window(make_bump(dg, 0j, 0.4))
        slices = gabor.translated_window_slices(w, tg)
        M = oracle.dense_gabor_matrix(dg, sg, tg, slices)
        direct = (M @ f.values.reshape(-1)).reshape(sg.shape() + tg.shape())
        fast = gabor.gabor_forward(f, w, sg, tg).values
        assert np.abs(direct - fast).max() <= 1e-10 * np.abs(fast).max()

    def test_adjoint_consistency(self, probe, rng):
        # <forward(f), F>_spectral == <f, adjoint(F)>_disk with the weighted
        # adjoint of the dense matrix
        dg, sg, _ = probe
        f = SampledFunction(dg, rng.normal(size=dg.shape()) + 1j * rng.normal(size=dg.shape()))
        Fv = rng.normal(size=sg.shape()) + 1j * rng.normal(size=sg.shape())
        M = oracle.dense_transform_matrix(dg, sg)
        w_spec = sg.cell_weights.reshape(-1)
        w_disk = dg.area_weights.reshape(-1)
        lhs = np.vdot(Fv.reshape(-1) * w_spec, M @ f.values.reshape(-1)).conjugate()
        adj = (M.conj().T @ (Fv.reshape(-1) * w_spec)) / w_disk
        rhs = np.sum(f.values.reshape(-1) * np.conj(adj) * w_disk)
        assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), 1.0)

    def test_size_cap_enforced(self):
        from hypfourier.grids import DiskGrid, SpectralGrid

        dg = DiskGrid(16, 64, 4.0)
        sg = SpectralGrid(256, 24.0, 64)
        with pytest.raises(ValueError):
            oracle.dense_transform_matrix(dg, sg)
