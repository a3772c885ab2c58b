"""Special functions of the model: spherical functions and the Plancherel density.

The spherical function phi_lambda is the rotation-invariant eigenfunction of
the hyperbolic Laplacian normalized to 1 at the origin.  It is computed here
from its boundary-integral representation

    phi_lambda(r) = (1/2pi) int_0^{2pi} exp((i*lambda + 1/2) A(x_r, theta)) dtheta

with x_r at hyperbolic radius r.  The integrand is smooth and periodic, so the
trapezoid rule converges spectrally; the node count is doubled adaptively.
An independent evaluation through the conical Legendre function lives in
`hypfourier.oracle` and is used to cross-validate this one.

The spectral parameter lambda is a plain real number (the tempered spectrum);
`plancherel_density` is the weight lambda*tanh(pi*lambda)/(2*pi) that makes
the inverse transform an isometry.  Its correctness is not assumed: the
Mehler-Fock round trip in the test suite calibrates it.
"""

from __future__ import annotations

import numpy as np

from .geometry import busemann_polar

__all__ = ["QuadratureError", "spherical_function", "plancherel_density"]

#: the spectral parameter is a real frequency; kept as a plain float
SpectralParameter = float

_START_NODES = 64
_MAX_NODES = 1 << 16
_TARGET_TOL = 1e-10
_FAIL_TOL = 1e-8
_IMAG_TOL = 1e-10


class QuadratureError(ArithmeticError):
    """Raised when an adaptive quadrature fails to converge."""


def _boundary_integral(lam, r, n):
    """Trapezoid value of the boundary integral with n uniform nodes.

    lam and r must be broadcast-compatible arrays; returns their common shape
    plus nothing (the theta axis is reduced).
    """
    theta = 2.0 * np.pi * np.arange(n) / n
    a = busemann_polar(r[..., None], theta)
    vals = np.exp((1j * lam[..., None] + 0.5) * a)
    return vals.mean(axis=-1)


def spherical_function(lam, r, tol: float = _TARGET_TOL):
    """Evaluate phi_lambda(r) for real lambda and r >= 0 (broadcasting).

    Returns a float for scalar inputs, otherwise an ndarray.  The adaptive
    trapezoid doubles its node count until successive estimates differ by
    less than `tol`; if the cap of 2**16 nodes still leaves a disagreement
    above 1e-8 a QuadratureError is raised.
    """
    lam_a = np.asarray(lam, dtype=float)
    r_a = np.asarray(r, dtype=float)
    if np.any(r_a < 0):
        raise ValueError("radius must be nonnegative")
    out_shape = np.broadcast_shapes(lam_a.shape, r_a.shape)
    lam_b, r_b = np.broadcast_arrays(lam_a, r_a)
    lam_b = np.atleast_1d(lam_b).reshape(-1)
    r_b = np.atleast_1d(r_b).reshape(-1)

    n = _START_NODES
    est = _boundary_integral(lam_b, r_b, n)
    while True:
        # refine with the half-shifted node set: I(2n) = (I(n) + I_shift(n)) / 2
        theta = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        a = busemann_polar(r_b[..., None], theta)
        shifted = np.exp((1j * lam_b[..., None] + 0.5) * a).mean(axis=-1)
        new = 0.5 * (est + shifted)
        diff = np.max(np.abs(new - est))
        est = new
        n *= 2
        if diff < tol * max(1.0, float(np.max(np.abs(est)))):
            break
        if n >= _MAX_NODES:
            if diff > _FAIL_TOL:
                raise QuadratureError(
                    f"boundary integral did not converge: diff={diff:.3e} at {n} nodes"
                )
            break

    im = np.max(np.abs(est.imag))
    if im > _IMAG_TOL * max(1.0, float(np.max(np.abs(est)))):
        raise QuadratureError(f"spherical function has spurious imaginary part {im:.3e}")
    out = est.real
    if out_shape == ():
        return float(out[0])
    return out.reshape(out_shape)


def plancherel_density(lam):
    """Spectral weight lambda * tanh(pi*lambda) / (2*pi); even and >= 0."""
    lam_a = np.asarray(lam, dtype=float)
    out = lam_a * np.tanh(np.pi * lam_a) / (2.0 * np.pi)
    return float(out) if np.isscalar(lam) else out
