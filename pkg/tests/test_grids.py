import json
import math

import numpy as np
import pytest

from hypfourier import geometry, oracle
from hypfourier.grids import (
    DiskGrid,
    GaborField,
    GridMismatchError,
    SampledFunction,
    SpectralFunction,
    SpectralGrid,
    TranslationGrid,
    TruncationWarning,
    gabor_norm2,
    inner_product,
    load_json,
    make_bump,
    norm2,
    save_csv,
    save_json,
    spectral_norm2,
)
from hypfourier.helgason import plancherel_ratio

DISK_AREA_R1 = 2.0 * math.pi * (math.cosh(1.0) - 1.0)  # 3.412276265284902


class TestDiskGrid:
    def test_weights_positive_and_area(self, desk):
        dg, _, _ = desk
        assert np.all(dg.r_weights > 0)
        assert dg.area_error <= 1e-10

    def test_area_identity_small_grid(self):
        dg = DiskGrid(24, 16, 4.0)
        total = dg.area_weights.sum()
        assert total == pytest.approx(2 * math.pi * (math.cosh(4.0) - 1.0), rel=1e-10)


class TestTranslationGrid:
    def test_weights_sum_to_ball_measure(self):
        tg = TranslationGrid(32, 4.0)
        assert tg.t_weights.sum() == pytest.approx(
            2 * math.pi * (math.cosh(4.0) - 1.0), rel=1e-12
        )
        assert tg.t[0] == 0.0
        assert np.all(tg.t_weights >= 0)


class TestInnerProduct:
    def test_positive_and_real_on_diagonal(self, small, rng):
        dg = small[0]
        vals = rng.normal(size=dg.shape()) + 1j * rng.normal(size=dg.shape())
        f = SampledFunction(dg, vals)
        ip = inner_product(f, f)
        assert ip.real > 0
        assert abs(ip.imag) <= 1e-14 * ip.real

    def test_conjugate_symmetry(self, small, rng):
        dg = small[0]
        f = SampledFunction(dg, rng.normal(size=dg.shape()) + 1j * rng.normal(size=dg.shape()))
        g = SampledFunction(dg, rng.normal(size=dg.shape()) + 1j * rng.normal(size=dg.shape()))
        assert inner_product(f, g) == pytest.approx(np.conj(inner_product(g, f)), abs=1e-14)

    def test_indicator_disk_area(self, desk):
        # pointwise-sampled indicator: first-order edge error only
        dg = desk[0]
        ind = SampledFunction(dg, (dg.r[:, None] <= 1.0) * np.ones(dg.shape(), complex))
        area = inner_product(ind, ind).real
        assert area == pytest.approx(DISK_AREA_R1, rel=3e-2)
        # refinement shrinks the edge error
        dg2 = DiskGrid(4 * dg.n_r, dg.n_theta, dg.r_max)
        ind2 = SampledFunction(dg2, (dg2.r[:, None] <= 1.0) * np.ones(dg2.shape(), complex))
        err = abs(area - DISK_AREA_R1)
        err2 = abs(inner_product(ind2, ind2).real - DISK_AREA_R1)
        assert err2 < err

    def test_grid_mismatch_raises(self, small, probe):
        f = SampledFunction(small[0], np.zeros(small[0].shape(), complex))
        g = SampledFunction(probe[0], np.zeros(probe[0].shape(), complex))
        with pytest.raises(GridMismatchError):
            inner_product(f, g)


class TestNorms:
    def test_zero(self, small):
        dg = small[0]
        assert norm2(SampledFunction(dg, np.zeros(dg.shape(), complex))) == 0.0

    def test_quadratic_scaling(self, small, rng):
        dg, sg, tg = small
        f = SampledFunction(dg, rng.normal(size=dg.shape()) + 0j)
        c = 2.3 - 1.1j
        cf = SampledFunction(dg, c * f.values)
        assert norm2(cf) == pytest.approx(abs(c) ** 2 * norm2(f), rel=1e-13)
        F = SpectralFunction(sg, rng.normal(size=sg.shape()) + 0j)
        cF = SpectralFunction(sg, c * F.values)
        assert spectral_norm2(cF) == pytest.approx(abs(c) ** 2 * spectral_norm2(F), rel=1e-13)

    def test_single_cell_gabor_measure(self, small):
        _, sg, tg = small
        vals = np.zeros(sg.shape() + tg.shape(), complex)
        vals[3, 5, 2] = 1.0
        G = GaborField(sg, tg, vals)
        expected = sg.cell_weights[3, 5] * tg.t_weights[2]
        assert gabor_norm2(G) == pytest.approx(expected, rel=1e-14)


class TestSpectralGridFolding:
    def test_doubling_lambda_max_is_stable(self):
        dg = DiskGrid(64, 48, 4.5)
        f = make_bump(dg, 0.2 + 0.1j, 0.6)
        sg1 = SpectralGrid(96, 16.0, 48)
        sg2 = SpectralGrid(192, 32.0, 48)
        r1 = plancherel_ratio(f, sg1)
        r2 = plancherel_ratio(f, sg2)
        assert abs(r1 - r2) < 1e-6


class TestMakeBump:
    def test_radial_symmetry_and_center(self, small):
        dg = small[0]
        f = make_bump(dg, 0j, 0.5)
        spread = np.ptp(f.values.real, axis=1).max()
        assert spread <= 1e-14
        # peak approaches 1 at the innermost radius
        assert f.values.real.max() == pytest.approx(1.0, abs=1e-6)

    def test_norm_against_independent_radial_quadrature(self, desk):
        dg = desk[0]
        f = make_bump(dg, 0j, 0.5)
        r_fine, w_fine = oracle.gauss_legendre(600, 0.0, dg.r_max)
        ref = 2 * math.pi * float(np.sum(np.exp(-(r_fine**2) / 0.25) * np.sinh(r_fine) * w_fine))
        assert norm2(f) == pytest.approx(ref, rel=1e-6)

    def test_truncation_warning(self, small):
        dg = small[0]
        with pytest.warns(TruncationWarning):
            make_bump(dg, geometry.polar_to_disk(3.0, 0.0), 1.0)

    def test_quadrature_convergence(self):
        coarse = DiskGrid(48, 32, 6.0)
        fine = DiskGrid(96, 64, 6.0)
        n1 = norm2(make_bump(coarse, 0.2 + 0.3j, 0.6))
        n2 = norm2(make_bump(fine, 0.2 + 0.3j, 0.6))
        assert abs(n1 - n2) / n2 < 1e-6


class TestSerialization:
    def test_sampled_roundtrip(self, probe, tmp_path):
        dg = probe[0]
        f = make_bump(dg, 0.1 + 0.2j, 0.5)
        path = tmp_path / "f.json"
        save_json(f, str(path))
        back = load_json(str(path))
        assert isinstance(back, SampledFunction)
        assert back.grid.shape() == dg.shape()
        assert np.abs(back.values - f.values).max() == 0.0
        data = json.loads(path.read_text())
        assert data["model"] == "poincare-disk"
        assert data["N_r"] == dg.n_r and data["N_theta"] == dg.n_theta

    def test_spectral_and_gabor_roundtrip(self, probe, tmp_path, rng):
        _, sg, tg = probe
        F = SpectralFunction(sg, rng.normal(size=sg.shape()) + 1j * rng.normal(size=sg.shape()))
        save_json(F, str(tmp_path / "F.json"))
        backF = load_json(str(tmp_path / "F.json"))
        assert isinstance(backF, SpectralFunction)
        assert np.abs(backF.values - F.values).max() == 0.0

        G = GaborField(sg, tg, rng.normal(size=sg.shape() + tg.shape()) + 0j)
        save_json(G, str(tmp_path / "G.json"))
        backG = load_json(str(tmp_path / "G.json"))
        assert isinstance(backG, GaborField)
        assert np.abs(backG.values - G.values).max() == 0.0

    def test_csv_export(self, probe, tmp_path):
        dg, sg, tg = probe
        f = make_bump(dg, 0j, 0.5)
        path = tmp_path / "f.csv"
        save_csv(f, str(path))
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "r,theta,weight,re,im"
        assert len(lines) == 1 + dg.n_r * dg.n_theta
