"""Quadrature grids and sampled-function containers.

Three product grids realize the integrals of the theory numerically:

* DiskGrid: geodesic polar nodes over the disk.  Radial nodes are
  Gauss-Legendre on [0, r_max] with the hyperbolic area density sinh(r)
  baked into the weights; the angular grid is uniform with weight
  2*pi / n_theta.
* SpectralGrid: frequency nodes lambda in (0, lambda_max] (Gauss-Legendre)
  carrying the Plancherel density, and uniformly spaced boundary directions
  with normalized weight 1/n_boundary.  Only the positive half-line is
  stored; the evenness of the spectral energy makes it equivalent to the
  symmetrized integral.
* TranslationGrid: radii t of the translation parameter with cell-integrated
  weights against the density 2*pi*sinh(t), realizing the group integral
  reduced to its radial coordinate.

Reductions (inner products, norms) use plain numpy summation and are
deterministic for a given configuration.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
import warnings

import numpy as np

from . import geometry
from .specfun import plancherel_density

__all__ = [
    "GridMismatchError",
    "TruncationWarning",
    "DiskGrid",
    "SpectralGrid",
    "TranslationGrid",
    "SampledFunction",
    "SpectralFunction",
    "GaborField",
    "inner_product",
    "norm2",
    "spectral_norm2",
    "gabor_norm2",
    "make_bump",
    "default_grids",
    "save_json",
    "load_json",
    "save_csv",
]


class GridMismatchError(ValueError):
    """Two containers do not share the grid an operation requires."""


class TruncationWarning(UserWarning):
    """A signal is not well contained inside the grid radius."""


def gauss_legendre(n: int, a: float, b: float):
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) * (b - a) / 2.0 + a, w * (b - a) / 2.0


class DiskGrid:
    """Geodesic-polar quadrature grid over the disk of hyperbolic radius r_max."""

    def __init__(self, n_r: int = 96, n_theta: int = 64, r_max: float = 6.0):
        if n_r < 2 or n_theta < 4:
            raise ValueError("grid too small")
        if r_max <= 0:
            raise ValueError("r_max must be positive")
        self.n_r = int(n_r)
        self.n_theta = int(n_theta)
        self.r_max = float(r_max)
        r, w = gauss_legendre(self.n_r, 0.0, self.r_max)
        self.r = r
        self.r_quad_weights = w                      # plain GL weights, no density
        self.r_weights = w * np.sinh(r)              # against sinh(r) dr
        self.theta = 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta
        self.theta_weight = 2.0 * np.pi / self.n_theta
        self.area_weights = self.r_weights[:, None] * np.full(self.n_theta, self.theta_weight)
        self.z = np.tanh(self.r / 2.0)[:, None] * np.exp(1j * self.theta)[None, :]
        area = float(self.area_weights.sum())
        self.total_area = 2.0 * np.pi * (math.cosh(self.r_max) - 1.0)
        self.area_error = abs(area - self.total_area) / self.total_area
        if self.area_error > 1e-6:
            raise ValueError(
                f"radial quadrature does not resolve the area element "
                f"(relative error {self.area_error:.2e}); increase n_r"
            )

    def shape(self):
        return (self.n_r, self.n_theta)

    def descriptor(self) -> str:
        return f"disk(n_r={self.n_r},n_theta={self.n_theta},r_max={self.r_max:g})"

    def __repr__(self):
        return f"DiskGrid({self.descriptor()})"


class SpectralGrid:
    """Frequency-boundary grid carrying the Plancherel measure.

    Frequency weights are Gauss-Legendre weights on (0, lambda_max] times the
    Plancherel density; boundary weights are the normalized circle measure.
    """

    def __init__(self, n_lambda: int = 128, lambda_max: float = 24.0, n_boundary: int = 64):
        if n_lambda < 2 or n_boundary < 4:
            raise ValueError("grid too small")
        if lambda_max <= 0:
            raise ValueError("lambda_max must be positive")
        self.n_lambda = int(n_lambda)
        self.lambda_max = float(lambda_max)
        self.n_boundary = int(n_boundary)
        lam, w = gauss_legendre(self.n_lambda, 0.0, self.lambda_max)
        self.lam = lam
        self.lam_quad_weights = w                    # plain GL weights, no density
        self.lam_weights = w * plancherel_density(lam)
        self.theta_b = 2.0 * np.pi * np.arange(self.n_boundary) / self.n_boundary
        self.b_weight = 1.0 / self.n_boundary
        self.cell_weights = self.lam_weights[:, None] * np.full(self.n_boundary, self.b_weight)

    def shape(self):
        return (self.n_lambda, self.n_boundary)

    def descriptor(self) -> str:
        return f"spectral(n_lambda={self.n_lambda},lambda_max={self.lambda_max:g},n_b={self.n_boundary})"

    def __repr__(self):
        return f"SpectralGrid({self.descriptor()})"


class TranslationGrid:
    """Radii of the translation parameter with weights against 2*pi*sinh(t) dt.

    Nodes are uniform on [0, t_max] including t = 0; each node carries the
    exact integral of the density over its cell, so the weights sum to
    2*pi*(cosh(t_max) - 1).
    """

    def __init__(self, n_t: int = 32, t_max: float = 4.0):
        if n_t < 2:
            raise ValueError("need at least two translation nodes")
        if t_max <= 0:
            raise ValueError("t_max must be positive")
        self.n_t = int(n_t)
        self.t_max = float(t_max)
        self.t = np.linspace(0.0, self.t_max, self.n_t)
        step = self.t[1] - self.t[0]
        lo = np.clip(self.t - step / 2.0, 0.0, self.t_max)
        hi = np.clip(self.t + step / 2.0, 0.0, self.t_max)
        self.t_weights = 2.0 * np.pi * (np.cosh(hi) - np.cosh(lo))

    def shape(self):
        return (self.n_t,)

    def descriptor(self) -> str:
        return f"translation(n_t={self.n_t},t_max={self.t_max:g})"

    def __repr__(self):
        return f"TranslationGrid({self.descriptor()})"


class SampledFunction:
    """Complex-valued function sampled on a DiskGrid."""

    def __init__(self, grid: DiskGrid, values, meta: dict | None = None):
        values = np.asarray(values, dtype=complex)
        if values.shape != grid.shape():
            raise GridMismatchError(
                f"values shape {values.shape} does not match grid {grid.shape()}"
            )
        if not (np.all(np.isfinite(values.real)) and np.all(np.isfinite(values.imag))):
            raise ValueError("sampled values must be finite")
        self.grid = grid
        self.values = values
        self.meta = dict(meta) if meta else {}

    def copy(self) -> "SampledFunction":
        return SampledFunction(self.grid, self.values.copy(), self.meta)

    @classmethod
    def zeros(cls, grid: DiskGrid) -> "SampledFunction":
        return cls(grid, np.zeros(grid.shape(), dtype=complex))


class SpectralFunction:
    """Complex-valued function on a SpectralGrid, housing a transform."""

    def __init__(self, grid: SpectralGrid, values, meta: dict | None = None):
        values = np.asarray(values, dtype=complex)
        if values.shape != grid.shape():
            raise GridMismatchError(
                f"values shape {values.shape} does not match grid {grid.shape()}"
            )
        if not (np.all(np.isfinite(values.real)) and np.all(np.isfinite(values.imag))):
            raise ValueError("spectral values must be finite")
        self.grid = grid
        self.values = values
        self.meta = dict(meta) if meta else {}

    def copy(self) -> "SpectralFunction":
        return SpectralFunction(self.grid, self.values.copy(), self.meta)


class GaborField:
    """Complex 3-D array over (lambda, boundary, translation radius)."""

    def __init__(self, sgrid: SpectralGrid, tgrid: TranslationGrid, values,
                 meta: dict | None = None):
        values = np.asarray(values, dtype=complex)
        expected = sgrid.shape() + tgrid.shape()
        if values.shape != expected:
            raise GridMismatchError(
                f"values shape {values.shape} does not match grids {expected}"
            )
        if not (np.all(np.isfinite(values.real)) and np.all(np.isfinite(values.imag))):
            raise ValueError("field values must be finite")
        self.sgrid = sgrid
        self.tgrid = tgrid
        self.values = values
        self.meta = dict(meta) if meta else {}

    def weights(self) -> np.ndarray:
        return self.sgrid.cell_weights[:, :, None] * self.tgrid.t_weights[None, None, :]

    def copy(self) -> "GaborField":
        return GaborField(self.sgrid, self.tgrid, self.values.copy(), self.meta)


def _require_same_grid(f: SampledFunction, g: SampledFunction):
    if f.grid is not g.grid:
        a, b = f.grid, g.grid
        same = (a.n_r == b.n_r and a.n_theta == b.n_theta and a.r_max == b.r_max)
        if not same:
            raise GridMismatchError("functions live on different grids")


def inner_product(f: SampledFunction, g: SampledFunction) -> complex:
    """Weighted pairing sum(f * conj(g) * area_weights); conjugate-symmetric."""
    _require_same_grid(f, g)
    return complex(np.sum(f.values * np.conj(g.values) * f.grid.area_weights))


def norm2(f: SampledFunction) -> float:
    """Squared L2 norm over the disk."""
    return float(np.sum(np.abs(f.values) ** 2 * f.grid.area_weights))


def spectral_norm2(F: SpectralFunction) -> float:
    """Squared L2 norm against the Plancherel measure."""
    return float(np.sum(np.abs(F.values) ** 2 * F.grid.cell_weights))


def gabor_norm2(G: GaborField) -> float:
    """Squared L2 norm against the product (Plancherel x translation) measure."""
    return float(np.sum(np.abs(G.values) ** 2 * G.weights()))


def spectral_inner_product(F: SpectralFunction, G: SpectralFunction) -> complex:
    return complex(np.sum(F.values * np.conj(G.values) * F.grid.cell_weights))


def gabor_inner_product(F: GaborField, G: GaborField) -> complex:
    return complex(np.sum(F.values * np.conj(G.values) * F.weights()))


def make_bump(grid: DiskGrid, center=0j, width: float = 0.5) -> SampledFunction:
    """Geodesic Gaussian bump exp(-d(center, x)^2 / (2 width^2)).

    Emits a TruncationWarning when the effective support
    d(0, center) + 4*width spills past the grid radius.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    zc = center.z if isinstance(center, geometry.DiskPoint) else complex(center)
    reach = geometry.distance(0j, zc) + 4.0 * width
    if reach > grid.r_max:
        warnings.warn(
            f"bump support extends to r={reach:.2f} beyond r_max={grid.r_max:g}; "
            "expect truncation effects",
            TruncationWarning,
            stacklevel=2,
        )
    d = geometry.distance(grid.z, zc)
    return SampledFunction(grid, np.exp(-(d**2) / (2.0 * width**2)).astype(complex))


def default_grids():
    """The desk-scale configuration used by the verification suites."""
    return DiskGrid(96, 64, 6.0), SpectralGrid(128, 24.0, 64), TranslationGrid(32, 4.0)


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------

def _values_to_pairs(values: np.ndarray):
    flat = values.reshape(-1)
    return [[float(v.real), float(v.imag)] for v in flat]


def _pairs_to_values(pairs, shape):
    arr = np.array([complex(p[0], p[1]) for p in pairs], dtype=complex)
    if arr.size != int(np.prod(shape)):
        raise ValueError("serialized value count does not match grid shape")
    return arr.reshape(shape)


def to_json_dict(obj) -> dict:
    if isinstance(obj, SampledFunction):
        g = obj.grid
        return {
            "model": "poincare-disk",
            "r_max": g.r_max,
            "N_r": g.n_r,
            "N_theta": g.n_theta,
            "values": _values_to_pairs(obj.values),
        }
    if isinstance(obj, SpectralFunction):
        g = obj.grid
        return {
            "model": "helgason-spectral",
            "lambda_max": g.lambda_max,
            "N_lambda": g.n_lambda,
            "N_boundary": g.n_boundary,
            "values": _values_to_pairs(obj.values),
        }
    if isinstance(obj, GaborField):
        s, t = obj.sgrid, obj.tgrid
        return {
            "model": "helgason-gabor",
            "lambda_max": s.lambda_max,
            "N_lambda": s.n_lambda,
            "N_boundary": s.n_boundary,
            "t_max": t.t_max,
            "N_t": t.n_t,
            "values": _values_to_pairs(obj.values),
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_json_dict(data: dict):
    model = data.get("model")
    if model == "poincare-disk":
        grid = DiskGrid(int(data["N_r"]), int(data["N_theta"]), float(data["r_max"]))
        return SampledFunction(grid, _pairs_to_values(data["values"], grid.shape()))
    if model == "helgason-spectral":
        grid = SpectralGrid(int(data["N_lambda"]), float(data["lambda_max"]),
                            int(data["N_boundary"]))
        return SpectralFunction(grid, _pairs_to_values(data["values"], grid.shape()))
    if model == "helgason-gabor":
        s = SpectralGrid(int(data["N_lambda"]), float(data["lambda_max"]),
                         int(data["N_boundary"]))
        t = TranslationGrid(int(data["N_t"]), float(data["t_max"]))
        return GaborField(s, t, _pairs_to_values(data["values"], s.shape() + t.shape()))
    raise ValueError(f"unknown serialized model {model!r}")


def atomic_write_text(path: str, text: str):
    """Write text to path via a temporary file and atomic rename."""
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_json(obj, path: str):
    atomic_write_text(path, json.dumps(to_json_dict(obj)))


def load_json(path: str):
    with open(path) as fh:
        return from_json_dict(json.load(fh))


def save_csv(obj, path: str):
    """One row per node: coordinates, weight, re, im."""
    rows = []
    if isinstance(obj, SampledFunction):
        header = ["r", "theta", "weight", "re", "im"]
        g = obj.grid
        for i, r in enumerate(g.r):
            for j, th in enumerate(g.theta):
                v = obj.values[i, j]
                rows.append([r, th, g.area_weights[i, j], v.real, v.imag])
    elif isinstance(obj, SpectralFunction):
        header = ["lambda", "b_theta", "weight", "re", "im"]
        g = obj.grid
        for k, lam in enumerate(g.lam):
            for j, th in enumerate(g.theta_b):
                v = obj.values[k, j]
                rows.append([lam, th, g.cell_weights[k, j], v.real, v.imag])
    elif isinstance(obj, GaborField):
        header = ["lambda", "b_theta", "t", "weight", "re", "im"]
        w = obj.weights()
        for k, lam in enumerate(obj.sgrid.lam):
            for j, th in enumerate(obj.sgrid.theta_b):
                for m, t in enumerate(obj.tgrid.t):
                    v = obj.values[k, j, m]
                    rows.append([lam, th, t, w[k, j, m], v.real, v.imag])
    else:
        raise TypeError(f"cannot export {type(obj).__name__}")
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
