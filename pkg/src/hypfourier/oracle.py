"""Independent brute-force references for the transform modules.

Everything here recomputes results through a different route than the
production code so that agreement is meaningful:

* `conical_function` evaluates the conical Legendre function
  P_{-1/2 + i*lambda}(cosh r) through its Laplace integral over [0, pi],
  with its own Gauss-Legendre rule.  The production spherical function uses
  the boundary integral over the full circle instead; the two must agree.
* The Mehler-Fock pair is the classical radial transform whose kernel is the
  conical function and whose inverse density is lambda * tanh(pi * lambda).
  Its round trip closing is what pins down the Plancherel density used by
  the 2-D transform; nothing here imports the transform modules.
* `dense_transform_matrix` / `dense_gabor_matrix` assemble the discrete
  transform operators entry by entry from their definition (band-limited
  kernel coefficients obtained by plain trapezoid quadrature of the Fourier
  integrals, no FFT), capped to tiny grids.

Only the geometry layer is shared with the production code.
"""

from __future__ import annotations

import numpy as np

from .geometry import busemann_polar
from .grids import DiskGrid, SampledFunction, SpectralGrid, TranslationGrid

__all__ = [
    "conical_function",
    "mehler_fock_forward",
    "mehler_fock_inverse",
    "dense_transform_matrix",
    "dense_gabor_matrix",
]

_DENSE_CELL_CAP = 8192


def gauss_legendre(n: int, a: float, b: float):
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) * (b - a) / 2.0 + a, w * (b - a) / 2.0


def conical_function(lam, r, n_nodes: int = 2048):
    """P_{-1/2 + i*lam}(cosh r) by the Laplace integral
    (1/pi) int_0^pi (cosh r + sinh r cos u)^(-1/2 + i*lam) du.

    Broadcasts over lam and r; the result is real for real arguments.
    """
    lam_a = np.asarray(lam, dtype=float)
    r_a = np.asarray(r, dtype=float)
    out_shape = np.broadcast_shapes(lam_a.shape, r_a.shape)
    lam_b, r_b = np.broadcast_arrays(lam_a, r_a)
    lam_b = np.atleast_1d(lam_b).reshape(-1)
    r_b = np.atleast_1d(r_b).reshape(-1)
    u, w = gauss_legendre(n_nodes, 0.0, np.pi)
    base = np.cosh(r_b)[:, None] + np.sinh(r_b)[:, None] * np.cos(u)[None, :]
    logb = np.log(base)
    vals = (base ** -0.5) * np.cos(lam_b[:, None] * logb)
    out = (vals @ w) / np.pi
    if out_shape == ():
        return float(out[0])
    return out.reshape(out_shape)


_conical_memo: dict[tuple, np.ndarray] = {}


def _conical_matrix(lam_nodes: np.ndarray, r_nodes: np.ndarray, n_kernel_nodes: int):
    """Kernel matrix P[k, i] = P_{-1/2 + i lam_k}(cosh r_i), memoized by content."""
    key = (lam_nodes.tobytes(), r_nodes.tobytes(), n_kernel_nodes)
    hit = _conical_memo.get(key)
    if hit is None:
        hit = conical_function(lam_nodes[:, None], r_nodes[None, :], n_kernel_nodes)
        if len(_conical_memo) > 8:
            _conical_memo.clear()
        _conical_memo[key] = hit
    return hit


def mehler_fock_forward(profile, r_nodes, r_weights, lam_values,
                        n_kernel_nodes: int = 2048) -> np.ndarray:
    """Radial transform F(lam) = int f(r) P_{-1/2+i lam}(cosh r) sinh r dr.

    `r_weights` must already carry the sinh(r) density (a DiskGrid's
    r_weights qualify); the kernel is evaluated through `conical_function`.
    """
    profile = np.asarray(profile, dtype=complex)
    P = _conical_matrix(np.asarray(lam_values, dtype=float),
                        np.asarray(r_nodes, dtype=float), n_kernel_nodes)
    return P @ (profile * np.asarray(r_weights))


def mehler_fock_inverse(F, lam_nodes, lam_quad_weights, r_nodes,
                        n_kernel_nodes: int = 2048) -> np.ndarray:
    """Inverse radial transform
    f(r) = int F(lam) P_{-1/2+i lam}(cosh r) lam tanh(pi lam) dlam.

    `lam_quad_weights` are plain quadrature weights (no density); the
    inversion density lam*tanh(pi*lam) is applied here, by construction,
    so this routine is the normalization reference for the 2-D transform.
    """
    F = np.asarray(F, dtype=complex)
    lam_nodes = np.asarray(lam_nodes, dtype=float)
    P = _conical_matrix(lam_nodes, np.asarray(r_nodes, dtype=float), n_kernel_nodes)
    dens = lam_nodes * np.tanh(np.pi * lam_nodes) * np.asarray(lam_quad_weights)
    return P.T @ (F * dens)


def _band_coefficients_slow(lam: np.ndarray, r: np.ndarray, n_theta: int) -> np.ndarray:
    """Angular Fourier coefficients of the transform kernel by direct
    trapezoid quadrature of the coefficient integrals (no FFT), folded into
    n_theta bins the same way the production kernel is."""
    half = n_theta // 2
    out = np.empty((len(lam), len(r), n_theta), dtype=complex)
    for i, ri in enumerate(r):
        bw = float(np.max(lam)) * np.sinh(ri)
        nov = int(max(8 * n_theta, 4 * bw + 8 * n_theta))
        theta = 2.0 * np.pi * np.arange(nov) / nov
        a = busemann_polar(ri, theta)
        harmonics = list(range(0, half + 1)) + list(range(-half + 1, 0))
        basis = np.exp(-1j * np.outer(np.array(harmonics), theta))  # (n_theta, nov)
        extra = np.exp(-1j * (-half) * theta)                       # -Nyquist harmonic
        for k, lk in enumerate(lam):
            kern = np.exp((0.5 - 1j * lk) * a)
            coeffs = basis @ kern / nov
            coeffs[half] += (extra * kern).sum() / nov              # fold Nyquist
            out[k, i, :] = coeffs * n_theta
    return out


def _check_cell_cap(n_cells: int):
    if n_cells > _DENSE_CELL_CAP:
        raise ValueError(
            f"dense oracle restricted to {_DENSE_CELL_CAP} output cells, got {n_cells}"
        )


def dense_transform_matrix(dgrid: DiskGrid, sgrid: SpectralGrid) -> np.ndarray:
    """Explicit matrix of the forward transform on a tiny grid.

    Shape (n_lambda * n_boundary, n_r * n_theta); applying it to the
    flattened samples reproduces `helgason.forward` elementwise.
    """
    _check_cell_cap(sgrid.n_lambda * sgrid.n_boundary)
    if sgrid.n_boundary != dgrid.n_theta:
        raise ValueError("dense oracle assumes matching angular and boundary counts")
    n_th = dgrid.n_theta
    chat = _band_coefficients_slow(sgrid.lam, dgrid.r, n_th)
    # band-limited kernel at the grid's relative angles
    m = np.arange(n_th)
    harmonics = np.where(m <= n_th // 2, m, m - n_th)
    phases = np.exp(1j * np.outer(harmonics, 2.0 * np.pi * m / n_th))  # (q, dtheta)
    K = np.einsum("kiq,qm->kim", chat, phases) / n_th
    w = dgrid.r_weights[:, None] * dgrid.theta_weight
    M = np.empty((sgrid.n_lambda * n_th, dgrid.n_r * n_th), dtype=complex)
    for k in range(sgrid.n_lambda):
        for jb in range(n_th):
            row = K[k][:, (np.arange(n_th) - jb) % n_th] * w
            M[k * n_th + jb, :] = row.reshape(-1)
    return M


def dense_gabor_matrix(dgrid: DiskGrid, sgrid: SpectralGrid, tgrid: TranslationGrid,
                       window_slices: list[SampledFunction]) -> np.ndarray:
    """Explicit matrix of the windowed transform on a tiny grid.

    `window_slices` are the translated windows T_{t_m} w (the translation
    operator is shared input, not part of what this oracle re-derives).
    Rows are ordered (lambda, boundary, translation) to match the field
    layout; shape (n_lambda * n_b * n_t, n_r * n_theta).
    """
    _check_cell_cap(sgrid.n_lambda * sgrid.n_boundary * tgrid.n_t)
    if len(window_slices) != tgrid.n_t:
        raise ValueError("need one window slice per translation node")
    base = dense_transform_matrix(dgrid, sgrid)
    n_rows = sgrid.n_lambda * sgrid.n_boundary
    M = np.empty((n_rows * tgrid.n_t, base.shape[1]), dtype=complex)
    for m, ws in enumerate(window_slices):
        masked = base * np.conj(ws.values.reshape(-1))[None, :]
        # interleave so the row index is (k*n_b + jb)*n_t + m
        M[m::tgrid.n_t, :] = masked
    return M
