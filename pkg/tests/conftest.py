import numpy as np
import pytest

from hypfourier.grids import DiskGrid, SpectralGrid, TranslationGrid


@pytest.fixture(scope="session")
def desk():
    """Default desk-scale grids; shared so kernel caches amortize."""
    return DiskGrid(96, 64, 6.0), SpectralGrid(128, 24.0, 64), TranslationGrid(32, 4.0)


@pytest.fixture(scope="session")
def small():
    """Cheap grids for operator-level tests."""
    return DiskGrid(32, 32, 5.0), SpectralGrid(32, 10.0, 32), TranslationGrid(8, 3.0)


@pytest.fixture(scope="session")
def probe():
    """Tiny grids where dense matrices are affordable."""
    return DiskGrid(8, 8, 3.0), SpectralGrid(8, 8.0, 8), TranslationGrid(4, 2.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(42)
