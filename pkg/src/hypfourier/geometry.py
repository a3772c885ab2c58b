"""Geometry of the hyperbolic plane in the Poincare disk model.

Points live in the open unit disk with the curvature -1 metric
ds = 2|dz| / (1 - |z|^2), so the distance from the origin to z is
2 * artanh|z|.  Boundary directions are points of the unit circle.

Most functions accept either the typed wrappers (DiskPoint,
BoundaryPoint) or plain complex numbers / numpy arrays, so the heavy
numerical modules can stay vectorized while the typed API keeps the
domain invariants checkable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DiskPoint",
    "BoundaryPoint",
    "Isometry",
    "distance",
    "busemann",
    "mobius_translate",
    "circle_points",
    "polar_to_disk",
]


@dataclass(frozen=True)
class DiskPoint:
    """A point of the hyperbolic plane, stored as Cartesian disk coordinates."""

    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError("disk point coordinates must be finite")
        if self.re * self.re + self.im * self.im >= 1.0:
            raise ValueError(
                f"point {self.re}+{self.im}j lies outside the open unit disk"
            )

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def from_complex(cls, z: complex) -> "DiskPoint":
        return cls(z.real, z.imag)

    def __complex__(self) -> complex:
        return self.z


@dataclass(frozen=True)
class BoundaryPoint:
    """A direction on the circle at infinity, normalized to [0, 2*pi)."""

    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError("boundary angle must be finite")
        object.__setattr__(self, "theta", self.theta % (2.0 * math.pi))

    @property
    def z(self) -> complex:
        return cmath.exp(1j * self.theta)


@dataclass(frozen=True)
class Isometry:
    """Orientation-preserving isometry: rotate by `rotation`, then move the
    origin to `center` with a Mobius translation."""

    center: DiskPoint
    rotation: float

    def apply(self, p: DiskPoint) -> DiskPoint:
        w = cmath.exp(1j * self.rotation) * p.z
        return DiskPoint.from_complex(_mobius(self.center.z, w))

    def __call__(self, p: DiskPoint) -> DiskPoint:
        return self.apply(p)


def _as_z(p):
    """Accept DiskPoint / BoundaryPoint / complex / ndarray, return complex."""
    if isinstance(p, (DiskPoint, BoundaryPoint)):
        return p.z
    return p


def _mobius(a, w):
    return (w + a) / (1.0 + np.conj(a) * w)


def distance(x, y):
    """Hyperbolic distance 2*artanh |(x - y) / (1 - conj(y) x)|.

    Works elementwise on complex arrays.
    """
    zx, zy = _as_z(x), _as_z(y)
    return 2.0 * np.arctanh(np.abs((zx - zy) / (1.0 - np.conj(zy) * zx)))


def busemann(x, b):
    """Signed horocycle distance A(x, b) = log((1 - |x|^2) / |x - b|^2).

    Normalized so A(origin, b) = 0; along the radius toward b it equals
    the distance from the origin.  Works elementwise on arrays.
    """
    zx, zb = _as_z(x), _as_z(b)
    return np.log((1.0 - np.abs(zx) ** 2) / np.abs(zx - zb) ** 2)


def busemann_polar(r, dtheta):
    """A(x, b) for x at hyperbolic radius r and relative angle dtheta to b.

    Vectorized form used by the transform kernels; equals
    busemann(polar_to_disk(r, dtheta), BoundaryPoint(0)).
    """
    z = np.tanh(np.asarray(r) / 2.0)
    return np.log((1.0 - z**2) / (z**2 - 2.0 * z * np.cos(dtheta) + 1.0))


def mobius_translate(a, w):
    """The isometry moving the origin to a, evaluated at w: (w + a)/(1 + conj(a) w).

    Returns a DiskPoint when given typed points, otherwise raw complex values.
    """
    za, zw = _as_z(a), _as_z(w)
    out = _mobius(za, zw)
    if isinstance(a, DiskPoint) and isinstance(w, DiskPoint):
        return DiskPoint.from_complex(out)
    return out


def circle_points(x, t: float, n: int):
    """n points equally spaced (in the rotation group) on the hyperbolic
    circle of radius t centered at x."""
    if t < 0:
        raise ValueError("circle radius must be nonnegative")
    if n < 1:
        raise ValueError("need at least one point")
    zx = _as_z(x)
    rho = math.tanh(t / 2.0)
    angles = 2.0 * np.pi * np.arange(n) / n
    pts = _mobius(zx, rho * np.exp(1j * angles))
    if isinstance(x, DiskPoint):
        return [DiskPoint.from_complex(p) for p in pts]
    return pts


def polar_to_disk(r, theta):
    """Map geodesic polar coordinates (r, theta) to the disk: tanh(r/2) e^{i theta}."""
    r = np.asarray(r, dtype=float) if not np.isscalar(r) else r
    out = np.tanh(np.asarray(r) / 2.0) * np.exp(1j * np.asarray(theta))
    if np.isscalar(r) and np.isscalar(theta):
        return DiskPoint.from_complex(complex(out))
    return out
