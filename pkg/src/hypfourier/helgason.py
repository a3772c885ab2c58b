"""Forward and inverse Helgason-Fourier transform on the disk.

The forward transform pairs a sampled function with the plane-wave kernel
exp((-i*lambda + 1/2) A(x, b)); the inverse uses the conjugate kernel and the
Plancherel weights baked into the spectral grid.

Discretization.  The kernel, viewed as a function of the angle between x and
b, has angular bandwidth up to lambda * sinh(r), which at the outer radii far
exceeds any reasonable theta grid.  Sampling it pointwise would alias that
content across the whole spectrum (the effect is easy to provoke: spectral
tails stop decaying and round trips diverge near the rim).  The operator used
here therefore pairs the data with the kernel's angular Fourier truncation to
the grid's resolvable band: coefficients c_q(lambda, r) of
exp((1/2 - i*lambda) A(r, .)) are computed once per grid pair on an
oversampled circle and the transform becomes, for each radius, a circular
correlation over the angle, evaluated by FFT.  Equivalently, this is the
exact transform of the trigonometric interpolant of the data, and it agrees
with the naive node-by-node summation wherever the latter is resolved.

A dense per-node summation path ("direct") built from the same truncated
kernel is kept as the reference implementation; the FFT path must match it
to near machine precision, and an independently assembled matrix oracle
(`hypfourier.oracle.dense_transform_matrix`) checks both on tiny grids.
"""

from __future__ import annotations

import threading

import numpy as np

from .geometry import busemann_polar
from .grids import (
    DiskGrid,
    GridMismatchError,
    SampledFunction,
    SpectralFunction,
    SpectralGrid,
    norm2,
    spectral_norm2,
)
from .specfun import spherical_function

__all__ = [
    "TransformKernel",
    "forward",
    "inverse",
    "plancherel_ratio",
    "multiplier_check",
    "kernel_for",
]

_OVERSAMPLE = 2.5  # circle samples per unit of kernel bandwidth lambda*sinh(r)


def _next_pow2(x: float) -> int:
    n = 1
    while n < x:
        n *= 2
    return n


def _band_coefficients(lam: np.ndarray, r: np.ndarray, n_theta: int) -> np.ndarray:
    """Angular Fourier coefficients of the forward kernel, folded to n_theta bins.

    Returns chat with chat[k, i, q] = N * c_q'(lambda_k, r_i) in FFT bin
    layout (q' the signed harmonic of bin q), where c_q are the Fourier
    series coefficients of theta -> exp((1/2 - i*lambda) A(r, theta)).
    Content beyond the grid band is truncated, except the Nyquist bin which
    receives both +-N/2 harmonics (they are indistinguishable on the grid).
    """
    n_lam, n_r = len(lam), len(r)
    half = n_theta // 2
    out = np.empty((n_lam, n_r, n_theta), dtype=complex)
    lam_max = float(np.max(lam))
    # group radii by the oversampled circle size they need
    novers = np.array(
        [_next_pow2(max(8 * n_theta, _OVERSAMPLE * lam_max * np.sinh(ri) + 8 * n_theta))
         for ri in r]
    )
    for nov in np.unique(novers):
        idx = np.nonzero(novers == nov)[0]
        theta = 2.0 * np.pi * np.arange(nov) / nov
        a = busemann_polar(r[idx][:, None], theta[None, :])          # (n_sel, nov)
        for k in range(n_lam):
            kern = np.exp((0.5 - 1j * lam[k]) * a)
            chat = np.fft.fft(kern, axis=1) / nov                    # series coeffs
            sel = np.empty((len(idx), n_theta), dtype=complex)
            sel[:, : half + 1] = chat[:, : half + 1]
            sel[:, half + 1 :] = chat[:, nov - half + 1 :]
            sel[:, half] += chat[:, nov - half]                      # fold Nyquist
            out[k, idx, :] = sel * n_theta
    return out


class TransformKernel:
    """Precomputed transform data for one (DiskGrid, SpectralGrid) pair.

    Holds the folded kernel coefficients plus the weighted FFT-domain tensors
    used by the forward and inverse fast paths.  Immutable once built.
    """

    def __init__(self, dgrid: DiskGrid, sgrid: SpectralGrid):
        if sgrid.n_boundary != dgrid.n_theta:
            raise GridMismatchError(
                "fast transform path needs matching angular and boundary counts"
            )
        self.dgrid = dgrid
        self.sgrid = sgrid
        self.chat = _band_coefficients(sgrid.lam, dgrid.r, dgrid.n_theta)
        w_area = (dgrid.r_weights[:, None] * dgrid.theta_weight)[None, :, :]
        fwd = self.chat * w_area
        # correlation over the angle: F[., jb] = sum_m g[., jb+m] K[., m]
        #                         ->  IDFT(DFT(g) * rev(DFT(K)))
        self.forward_hat = np.concatenate([fwd[:, :, :1], fwd[:, :, :0:-1]], axis=2)
        # inverse kernel conj(K) carries the spectral weights; its DFT is the
        # index-reversed conjugate of the forward coefficients
        w_spec = (sgrid.lam_weights * 1.0)[:, None, None] * sgrid.b_weight
        self.inverse_hat = (
            np.conj(np.concatenate([self.chat[:, :, :1], self.chat[:, :, :0:-1]], axis=2))
            * w_spec
        )

    def sampled_kernel(self) -> np.ndarray:
        """Band-limited kernel sampled at the grid's relative angles,
        shape (n_lambda, n_r, n_theta); defines the dense operator entries."""
        return np.fft.ifft(self.chat, axis=2)


_kernel_cache: dict[tuple[int, int], TransformKernel] = {}
_cache_lock = threading.Lock()
_CACHE_CAP = 8


def kernel_for(dgrid: DiskGrid, sgrid: SpectralGrid) -> TransformKernel:
    key = (id(dgrid), id(sgrid))
    with _cache_lock:
        hit = _kernel_cache.get(key)
    if hit is not None:
        return hit
    kern = TransformKernel(dgrid, sgrid)
    with _cache_lock:
        if len(_kernel_cache) >= _CACHE_CAP:
            _kernel_cache.pop(next(iter(_kernel_cache)))
        _kernel_cache[key] = kern
    return kern


def forward(f: SampledFunction, sgrid: SpectralGrid, method: str = "fft") -> SpectralFunction:
    """Helgason-Fourier transform of f onto the spectral grid.

    method "fft" uses the circular-correlation fast path; "direct" performs
    the dense reference summation (identical operator, O(N_x * N_lambda * N_b)).
    """
    kern = kernel_for(f.grid, sgrid)
    if method == "fft":
        ghat = np.fft.fft(f.values, axis=1)
        vals = np.fft.ifft(ghat[None, :, :] * kern.forward_hat, axis=2).sum(axis=1)
    elif method == "direct":
        K = kern.sampled_kernel()                      # (n_lam, n_r, n_theta)
        w = f.grid.r_weights[:, None] * f.grid.theta_weight
        g = f.values * w
        n = f.grid.n_theta
        vals = np.empty((sgrid.n_lambda, sgrid.n_boundary), dtype=complex)
        for jb in range(sgrid.n_boundary):
            idx = (np.arange(n) - jb) % n              # K at relative angle j' - jb
            vals[:, jb] = np.einsum("ij,kij->k", g, K[:, :, idx])
    else:
        raise ValueError(f"unknown method {method!r}")
    return SpectralFunction(sgrid, vals)


def inverse(F: SpectralFunction, dgrid: DiskGrid, method: str = "fft") -> SampledFunction:
    """Inverse transform of F back onto the disk grid."""
    kern = kernel_for(dgrid, F.grid)
    if method == "fft":
        Fhat = np.fft.fft(F.values, axis=1)
        vals = np.fft.ifft(Fhat[:, None, :] * kern.inverse_hat, axis=2).sum(axis=0)
    elif method == "direct":
        C = np.conj(kern.sampled_kernel())             # (n_lam, n_r, n_theta)
        wk = F.grid.lam_weights[:, None] * F.grid.b_weight
        g = F.values * wk
        n = dgrid.n_theta
        vals = np.empty(dgrid.shape(), dtype=complex)
        for j in range(n):
            idx = (j - np.arange(n)) % n               # C at relative angle j - jb
            vals[:, j] = np.einsum("kb,kib->i", g, C[:, :, idx])
    else:
        raise ValueError(f"unknown method {method!r}")
    return SampledFunction(dgrid, vals)


def plancherel_ratio(f: SampledFunction, sgrid: SpectralGrid) -> float:
    """spectral_norm2(forward(f)) / norm2(f); 1 for well-resolved signals."""
    denom = norm2(f)
    if denom == 0.0:
        raise ZeroDivisionError("plancherel ratio of the zero function")
    return spectral_norm2(forward(f, sgrid)) / denom


def multiplier_check(f: SampledFunction, t: float, sgrid: SpectralGrid,
                     scheme: str | None = None) -> float:
    """Relative spectral error of the translation multiplier identity.

    Compares the transform of the translated function with the spherical
    multiplier phi_lambda(t) applied to the transform of f.
    """
    from .gabor import translate  # local import: gabor builds on this module

    F = forward(f, sgrid)
    base = spectral_norm2(F)
    if base == 0.0:
        raise ZeroDivisionError("multiplier check of the zero function")
    kwargs = {} if scheme is None else {"scheme": scheme}
    Ft = forward(translate(f, t, **kwargs), sgrid)
    mult = spherical_function(sgrid.lam, t)
    resid = Ft.values - mult[:, None] * F.values
    err2 = float(np.sum(np.abs(resid) ** 2 * sgrid.cell_weights))
    return float(np.sqrt(err2 / base))
