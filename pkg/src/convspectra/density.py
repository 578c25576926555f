"""Spectral density matrix of a convolutional layer and its grid samples.

The density is the matrix-valued trigonometric polynomial

    F(w1, w2) = sum_{k=-h1}^{h2} sum_{l=-w1}^{w2} T_{k,l} exp(j (k w1 + l w2))

whose Fourier coefficients are the tap matrices of the block Toeplitz
operator. Sampling it on the ``n x n`` frequency grid gives exactly the
diagonal blocks of the block circulant operator after a 2-D DFT.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ConvLayer, DimensionMismatch, ValidationError, _frozen
from .operators import tap_stack


@dataclass(frozen=True)
class SpectralDensity:
    """Coefficients ``taps[k + h1, l + w1] = T_{k,l}``, each ``r x s``."""

    taps: np.ndarray
    h1: int
    w1: int

    def __post_init__(self):
        t = np.asarray(self.taps)
        if t.ndim != 4:
            raise DimensionMismatch(f"taps must have shape (h, w, r, s), got {t.shape}")
        if not np.all(np.isfinite(t)):
            raise ValidationError("density coefficients must be finite")
        if not (0 <= self.h1 < t.shape[0] and 0 <= self.w1 < t.shape[1]):
            raise ValidationError("center offsets out of range")
        object.__setattr__(self, "taps", _frozen(t))

    @property
    def h(self) -> int:
        return self.taps.shape[0]

    @property
    def w(self) -> int:
        return self.taps.shape[1]

    @property
    def h2(self) -> int:
        return self.h - 1 - self.h1

    @property
    def w2(self) -> int:
        return self.w - 1 - self.w1

    @property
    def r(self) -> int:
        return self.taps.shape[2]

    @property
    def s(self) -> int:
        return self.taps.shape[3]

    def row_offsets(self) -> np.ndarray:
        return np.arange(-self.h1, self.h2 + 1)

    def col_offsets(self) -> np.ndarray:
        return np.arange(-self.w1, self.w2 + 1)

    def coefficient(self, k: int, l: int) -> np.ndarray:
        if -self.h1 <= k <= self.h2 and -self.w1 <= l <= self.w2:
            return self.taps[k + self.h1, l + self.w1]
        return np.zeros((self.r, self.s), dtype=self.taps.dtype)

    def __call__(self, w1, w2) -> np.ndarray:
        return eval_F(self, w1, w2)


def make_density(layer: ConvLayer) -> SpectralDensity:
    return SpectralDensity(tap_stack(layer), layer.pad.h1, layer.pad.w1)


def _phases(offsets: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    # reduce the phase mod 2pi first so periodicity holds to rounding
    return np.exp(1j * np.mod(np.outer(omegas, offsets), 2 * np.pi))


def eval_F(density: SpectralDensity, w1, w2) -> np.ndarray:
    """Evaluate the density at one frequency pair (scalars) or on an outer grid (1-D arrays).

    Scalars give an ``r x s`` matrix; arrays of lengths ``a`` and ``b`` give
    an ``(a, b, r, s)`` array indexed ``[i, j] -> F(w1[i], w2[j])``.
    """
    scalar = np.ndim(w1) == 0 and np.ndim(w2) == 0
    o1 = np.atleast_1d(np.asarray(w1, dtype=np.float64))
    o2 = np.atleast_1d(np.asarray(w2, dtype=np.float64))
    e1 = _phases(density.row_offsets(), o1)
    e2 = _phases(density.col_offsets(), o2)
    out = np.einsum("ak,bl,klrs->abrs", e1, e2, density.taps, optimize=True)
    return out[0, 0] if scalar else out


def grid_frequencies(n: int) -> np.ndarray:
    """``2*pi*(j - n//2)/n`` for ``j = 0..n-1``.

    For even ``n`` this is ``-pi + 2*pi*j/n``; for odd ``n`` that formula would
    miss the DFT frequencies, so the grid is shifted onto them.
    """
    return 2.0 * np.pi * (np.arange(n) - n // 2) / n


@dataclass(frozen=True)
class GridSamples:
    """Density samples ``B[j1, j2] = F(omegas[j1], omegas[j2])`` and their singular values.

    ``values[j1, j2]`` lists ``min(r, s)`` singular values, nonincreasing.
    """

    n: int
    omegas: np.ndarray
    B: np.ndarray
    values: np.ndarray

    @property
    def n_clusters(self) -> int:
        return self.values.shape[-1]

    def all_values(self) -> np.ndarray:
        """Every sampled singular value, sorted nonincreasing."""
        return np.sort(self.values.ravel())[::-1]

    def cluster(self, j: int) -> np.ndarray:
        """The ``j``-th singular value at every grid point, sorted nonincreasing."""
        return np.sort(self.values[..., j].ravel())[::-1]


def grid_from_blocks(n: int, omegas: np.ndarray, B: np.ndarray) -> GridSamples:
    vals = np.linalg.svd(B, compute_uv=False)
    return GridSamples(n, _frozen(omegas), _frozen(B), _frozen(vals))


def sample_grid(density: SpectralDensity, n: int) -> GridSamples:
    """Sample the density on the ``n x n`` uniform grid and take the per-point SVDs."""
    if n < max(density.h, density.w):
        raise ValidationError(f"grid size n={n} smaller than filter support ({density.h}x{density.w})")
    om = grid_frequencies(n)
    return grid_from_blocks(n, om, eval_F(density, om, om))


def circulant_taps(density: SpectralDensity, n: int) -> np.ndarray:
    """Blocks ``C_{p,q}``, ``p, q = 0..n-1``, of the first block row of the circulant operator.

    ``C_{p,q} = T_{-p,-q}`` with indices read mod ``n``, laid out as
    ``(n, n, r, s)``.
    """
    if n < max(density.h, density.w):
        raise ValidationError(f"n={n} smaller than filter support ({density.h}x{density.w})")
    out = np.zeros((n, n, density.r, density.s), dtype=density.taps.dtype)
    for k in density.row_offsets():
        for l in density.col_offsets():
            out[(-k) % n, (-l) % n] = density.coefficient(k, l)
    return out


def dft_blocks(density: SpectralDensity, n: int) -> np.ndarray:
    """``B_{i,k} = sum_{p,q} C_{p,q} exp(-j 2 pi (p i + q k) / n)`` via a 2-D FFT, zero-based ``i, k``.

    Entry ``[i, k]`` equals ``F(2 pi i / n, 2 pi k / n)``.
    """
    return np.fft.fft2(circulant_taps(density, n), axes=(0, 1))


def compose_symbols(densities: Sequence[SpectralDensity]) -> SpectralDensity:
    """Symbol of a stack of layers applied in order: ``F_M(w) ... F_2(w) F_1(w)``.

    ``densities[0]`` is the first layer applied. The product of trigonometric
    polynomials is again one, so the result is an ordinary
    :class:`SpectralDensity` with support ``sum(h_i) - M + 1`` by
    ``sum(w_i) - M + 1``.
    """
    if not densities:
        raise ValidationError("need at least one density to compose")
    acc = densities[0]
    for nxt in densities[1:]:
        if nxt.s != acc.r:
            raise DimensionMismatch(
                f"cannot compose: next layer expects {nxt.s} input channels, previous produces {acc.r}"
            )
        taps = np.zeros(
            (acc.h + nxt.h - 1, acc.w + nxt.w - 1, nxt.r, acc.s),
            dtype=np.result_type(acc.taps, nxt.taps),
        )
        for a in range(nxt.h):
            for b in range(nxt.w):
                # (F2 F1)_{k,l} = sum over k2 + k1 = k of T2_{k2,l2} T1_{k1,l1}
                taps[a:a + acc.h, b:b + acc.w] += np.einsum("rt,klts->klrs", nxt.taps[a, b], acc.taps)
        acc = SpectralDensity(taps, acc.h1 + nxt.h1, acc.w1 + nxt.w1)
    return acc


def identity_density(channels: int) -> SpectralDensity:
    return SpectralDensity(np.eye(channels)[None, None], 0, 0)
