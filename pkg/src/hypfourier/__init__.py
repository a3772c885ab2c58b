"""Fourier analysis on the hyperbolic plane.

Implements the Helgason-Fourier transform on the Poincare disk, a windowed
(Gabor) variant built on the spherical-mean translation operator, and a
verification harness that asserts the provable identities and measures the
claimed ones.
"""

from .geometry import (
    BoundaryPoint,
    DiskPoint,
    Isometry,
    busemann,
    circle_points,
    distance,
    mobius_translate,
    polar_to_disk,
)
from .specfun import QuadratureError, plancherel_density, spherical_function
from .grids import (
    DiskGrid,
    GaborField,
    GridMismatchError,
    SampledFunction,
    SpectralFunction,
    SpectralGrid,
    TranslationGrid,
    TruncationWarning,
    default_grids,
    gabor_norm2,
    inner_product,
    load_json,
    make_bump,
    norm2,
    save_csv,
    save_json,
    spectral_norm2,
)
from .helgason import forward, inverse, multiplier_check, plancherel_ratio
from .gabor import (
    Window,
    gabor_energy_ratio,
    gabor_forward,
    gabor_parseval,
    gabor_reconstruct,
    translate,
)
from .uncertainty import (
    ClaimReport,
    Region,
    benedicks_probe,
    concentration_check,
    masked_energy,
    moment_bound_check,
    sup_bound_check,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryPoint", "DiskPoint", "Isometry", "busemann", "circle_points",
    "distance", "mobius_translate", "polar_to_disk",
    "QuadratureError", "plancherel_density", "spherical_function",
    "DiskGrid", "GaborField", "GridMismatchError", "SampledFunction",
    "SpectralFunction", "SpectralGrid", "TranslationGrid", "TruncationWarning",
    "default_grids", "gabor_norm2", "inner_product", "load_json", "make_bump",
    "norm2", "save_csv", "save_json", "spectral_norm2",
    "forward", "inverse", "multiplier_check", "plancherel_ratio",
    "Window", "gabor_energy_ratio", "gabor_forward", "gabor_parseval",
    "gabor_reconstruct", "translate",
    "ClaimReport", "Region", "benedicks_probe", "concentration_check",
    "masked_energy", "moment_bound_check", "sup_bound_check",
    "__version__",
]
