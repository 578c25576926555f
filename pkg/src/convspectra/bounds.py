"""Upper bounds on the spectral norm of a convolutional layer.

All three bound the sup over frequencies of ``||F(w)||_2``, which in turn
dominates the spectral norm of both the Toeplitz and the circulant operator:

* ``reshape``:   ``sqrt(h w) * min(||R||_2, ||L||_2)``
* ``one_inf``:   ``max_w sqrt(||F(w)||_1 ||F(w)||_inf)`` over a uniform grid
* ``sum_blocks``: ``sum_{k,l} ||T_{k,l}||_2``
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .approximation import DEFAULT_SIZE_CAP, check_size_cap
from .core import ConvLayer, ValidationError
from .density import eval_F, grid_frequencies, make_density, sample_grid
from .operators import build_T, tap_stack
from .svd import spectral_norm


def reshape_R(weights: np.ndarray) -> np.ndarray:
    """``(c_out h) x (c_in w)`` block matrix with block ``(c, d) = K[c, d]``."""
    r, s, h, w = weights.shape
    return weights.transpose(0, 2, 1, 3).reshape(r * h, s * w)


def reshape_L(weights: np.ndarray) -> np.ndarray:
    """``(c_out w) x (c_in h)`` block matrix with block ``(c, d) = K[c, d]^T``."""
    r, s, h, w = weights.shape
    return weights.transpose(0, 3, 1, 2).reshape(r * w, s * h)


def bound_reshape(layer: ConvLayer) -> float:
    K = layer.weights
    scale = np.sqrt(layer.h * layer.w)
    return float(scale * min(spectral_norm(reshape_R(K)), spectral_norm(reshape_L(K))))


def bound_one_inf(layer: ConvLayer, n_grid: Optional[int] = None) -> float:
    """Grid maximum of ``sqrt(max column abs-sum * max row abs-sum)`` of ``F``.

    Only the grid points are inspected, so this can sit slightly below the
    continuous supremum; refine ``n_grid`` to tighten.
    """
    n_grid = layer.n if n_grid is None else n_grid
    if n_grid < max(layer.h, layer.w):
        raise ValidationError(f"n_grid={n_grid} smaller than filter support ({layer.h}x{layer.w})")
    om = grid_frequencies(n_grid)
    mag = np.abs(eval_F(make_density(layer), om, om))
    col = mag.sum(axis=-2).max(axis=-1)
    row = mag.sum(axis=-1).max(axis=-1)
    return float(np.sqrt(col * row).max())


def bound_sum_blocks(layer: ConvLayer) -> float:
    taps = tap_stack(layer)
    h, w, r, s = taps.shape
    if min(r, s) <= 2048:
        norms = np.linalg.svd(taps.reshape(h * w, r, s), compute_uv=False)[:, 0]
    else:
        norms = np.array([spectral_norm(taps[a, b]) for a in range(h) for b in range(w)])
    return float(norms.sum())


BOUNDS: dict[str, Callable[..., float]] = {
    "bound13": bound_reshape,
    "bound14": bound_one_inf,
    "bound15": bound_sum_blocks,
}


def circular_sigma_max(layer: ConvLayer) -> float:
    """Spectral norm of the circulant operator, read off the density grid samples."""
    return float(sample_grid(make_density(layer), layer.n).values.max())


def toeplitz_sigma_max(layer: ConvLayer, size_cap: Optional[int] = DEFAULT_SIZE_CAP) -> float:
    check_size_cap(layer, size_cap)
    return spectral_norm(build_T(layer).entries)


def _timed(fn: Callable[[], float], repeats: int) -> tuple[float, float]:
    times = []
    value = 0.0
    for _ in range(max(1, repeats)):
        t0 = time.perf_counter()
        value = fn()
        times.append(time.perf_counter() - t0)
    return value, statistics.median(times)


@dataclass
class BoundReport:
    bound13: float
    bound14: float
    bound15: float
    sigma_max_C: float
    sigma_max_T: Optional[float] = None
    n_grid: int = 0
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def bounds(self) -> dict[str, float]:
        return {"bound13": self.bound13, "bound14": self.bound14, "bound15": self.bound15}

    @property
    def ratios(self) -> dict[str, float]:
        ref = self.sigma_max_C
        return {k: (v / ref if ref > 0 else float("nan") if v == 0 else float("inf"))
                for k, v in self.bounds.items()}

    def as_dict(self) -> dict:
        return {
            "bounds": self.bounds,
            "sigma_max_C": self.sigma_max_C,
            "sigma_max_T": self.sigma_max_T,
            "ratios": self.ratios,
            "n_grid": self.n_grid,
            "timings": self.timings,
        }


def bound_report(layer: ConvLayer, with_exact: bool = False, n_grid: Optional[int] = None,
                 repeats: int = 5, size_cap: Optional[int] = DEFAULT_SIZE_CAP) -> BoundReport:
    """All three bounds, the circulant reference and optionally the exact Toeplitz norm.

    Timings are medians over ``repeats`` runs.
    """
    n_grid = layer.n if n_grid is None else n_grid
    b13, t13 = _timed(lambda: bound_reshape(layer), repeats)
    b14, t14 = _timed(lambda: bound_one_inf(layer, n_grid), repeats)
    b15, t15 = _timed(lambda: bound_sum_blocks(layer), repeats)
    ref_c, t_c = _timed(lambda: circular_sigma_max(layer), 1)
    timings = {"bound13": t13, "bound14": t14, "bound15": t15, "sigma_max_C": t_c}
    ref_t = None
    if with_exact:
        ref_t, timings["sigma_max_T"] = _timed(lambda: toeplitz_sigma_max(layer, size_cap), 1)
    return BoundReport(b13, b14, b15, ref_c, ref_t, n_grid, timings)
