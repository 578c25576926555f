"""Singular value approximation methods and their error metrics.

Four methods produce a spectrum for a layer:

* ``exact``: dense SVD of the block Toeplitz operator.
* ``circular``: dense SVD of its block circulant counterpart.
* ``sample``: SVDs of the spectral density on the uniform frequency grid.
  Same multiset as ``circular``, at a fraction of the cost.
* ``quantile``: per cluster, an empirical quantile function built from the
  grid samples and re-sampled at shifted levels ``(k - gamma) / n^2``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence

import numpy as np
from scipy.special import ndtr

from .core import ConvLayer, SingularSpectrum, SizeCapExceeded, ValidationError
from .density import GridSamples, make_density, sample_grid
from .operators import build_C, build_T
from .svd import exact_spectrum

DEFAULT_SIZE_CAP = 40_000_000

Interp = Literal["linear", "kernel"]
Anchor = Literal["min", "zero"]


@dataclass(frozen=True)
class QuantileConfig:
    """Settings for quantile re-sampling.

    gamma
        Offset in ``(0, 1)``: cluster ``j`` is evaluated at ``u = (k - gamma_j) / N``,
        ``k = 1..N``. A scalar applies to every cluster.
    interp
        ``"linear"`` interpolates the sorted samples ``kappa_i`` placed at
        levels ``i / N``; ``"kernel"`` inverts a Gaussian-kernel-smoothed CDF.
    anchor
        Value of the linear quantile at level 0: the sample minimum (flat
        extension) or zero.
    bandwidth
        Kernel bandwidth; ``None`` picks Silverman's rule per cluster.
    """

    gamma: float | Sequence[float] = 0.5
    interp: Interp = "linear"
    anchor: Anchor = "min"
    bandwidth: Optional[float] = None

    def __post_init__(self):
        gs = np.atleast_1d(np.asarray(self.gamma, dtype=np.float64))
        if np.any(gs <= 0) or np.any(gs >= 1):
            raise ValidationError(f"gamma must lie in (0, 1), got {self.gamma!r}")
        if self.interp not in ("linear", "kernel"):
            raise ValidationError(f"unknown interpolation mode {self.interp!r}")
        if self.anchor not in ("min", "zero"):
            raise ValidationError(f"unknown anchor {self.anchor!r}")
        if self.bandwidth is not None and self.bandwidth <= 0:
            raise ValidationError("bandwidth must be positive")

    def gamma_for(self, cluster: int, n_clusters: int) -> float:
        gs = np.atleast_1d(np.asarray(self.gamma, dtype=np.float64))
        if gs.size == 1:
            return float(gs[0])
        if gs.size != n_clusters:
            raise ValidationError(f"got {gs.size} gamma values for {n_clusters} clusters")
        return float(gs[cluster])


def silverman_bandwidth(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    sd = np.std(x, ddof=1) if n > 1 else 0.0
    q75, q25 = np.percentile(x, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34) if q75 > q25 else sd
    return 0.9 * spread * n ** (-0.2)


class QuantileModel:
    """Empirical quantile function of one singular value function.

    The samples are the values of ``phi_j`` over the frequency grid; the
    Lebesgue measure of ``{phi_j <= v}`` is replaced by the sample proportion.
    """

    def __init__(self, samples, interp: Interp = "linear", anchor: Anchor = "min",
                 bandwidth: Optional[float] = None):
        x = np.sort(np.asarray(samples, dtype=np.float64).ravel())
        if x.size == 0:
            raise ValidationError("need at least one sample")
        self.samples = x
        self.interp = interp
        self.anchor = anchor
        if interp == "kernel":
            bw = silverman_bandwidth(x) if bandwidth is None else bandwidth
            self.bandwidth = float(bw)
        else:
            self.bandwidth = None

    @property
    def size(self) -> int:
        return self.samples.size

    def levels(self) -> np.ndarray:
        """Interpolation nodes ``0, 1/N, ..., 1``."""
        return np.arange(self.size + 1) / self.size

    def cdf(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if self.interp == "kernel" and self.bandwidth > 0:
            return ndtr((v[..., None] - self.samples) / self.bandwidth).mean(axis=-1)
        return np.searchsorted(self.samples, v, side="right") / self.size

    def __call__(self, u) -> np.ndarray:
        u = np.clip(np.asarray(u, dtype=np.float64), 0.0, 1.0)
        x = self.samples
        if self.interp == "kernel" and self.bandwidth > 0:
            return self._invert_smoothed_cdf(u)
        lo = 0.0 if self.anchor == "zero" else x[0]
        return np.interp(u, self.levels(), np.concatenate(([lo], x)))

    def _invert_smoothed_cdf(self, u: np.ndarray) -> np.ndarray:
        x, bw = self.samples, self.bandwidth
        # the smoothed CDF lives on R; clamp the answer to the sample range
        a = np.full(u.shape, x[0] - 8 * bw)
        b = np.full(u.shape, x[-1] + 8 * bw)
        for _ in range(60):
            mid = 0.5 * (a + b)
            below = self.cdf(mid) < u
            a = np.where(below, mid, a)
            b = np.where(below, b, mid)
        return np.clip(0.5 * (a + b), x[0], x[-1])

    def estimates(self, gamma: float) -> np.ndarray:
        """``Q((k - gamma) / N)`` for ``k = 1..N``, nondecreasing."""
        N = self.size
        return self((np.arange(1, N + 1) - gamma) / N)


def _spectrum_size(layer: ConvLayer) -> int:
    return layer.n * layer.n * min(layer.r, layer.s)


def check_size_cap(layer: ConvLayer, cap: Optional[int]) -> None:
    if cap is None:
        return
    entries = (layer.r * layer.n ** 2) * (layer.s * layer.n ** 2)
    if entries > cap:
        raise SizeCapExceeded(
            f"dense operator would have {entries} entries, above the cap of {cap}; raise the cap explicitly to proceed"
        )


def exact_layer_spectrum(layer: ConvLayer, size_cap: Optional[int] = DEFAULT_SIZE_CAP) -> SingularSpectrum:
    check_size_cap(layer, size_cap)
    return exact_spectrum(build_T(layer))


def circular_spectrum(layer: ConvLayer, size_cap: Optional[int] = DEFAULT_SIZE_CAP) -> SingularSpectrum:
    check_size_cap(layer, size_cap)
    return SingularSpectrum(exact_spectrum(build_C(layer)).values, "circular")


def _grid(layer: ConvLayer, n: Optional[int]) -> GridSamples:
    return sample_grid(make_density(layer), layer.n if n is None else n)


def uniform_sampling_spectrum(layer: ConvLayer, n: Optional[int] = None) -> SingularSpectrum:
    g = _grid(layer, n)
    clusters = tuple(g.cluster(j) for j in range(g.n_clusters))
    return SingularSpectrum(g.all_values(), "uniform-sampling", clusters)


def quantile_spectrum(layer: ConvLayer, n: Optional[int] = None,
                      config: QuantileConfig = QuantileConfig()) -> SingularSpectrum:
    g = _grid(layer, n)
    clusters = []
    for j in range(g.n_clusters):
        model = QuantileModel(g.values[..., j].ravel(), config.interp, config.anchor, config.bandwidth)
        clusters.append(model.estimates(config.gamma_for(j, g.n_clusters))[::-1])
    clusters = tuple(clusters)
    return SingularSpectrum(np.concatenate(clusters), "quantile", clusters)


def overall_error(exact, approx) -> float:
    """``sum_j |sigma_j - est_j| / sum_j |sigma_j|`` over both lists sorted nonincreasing."""
    e = np.sort(np.asarray(exact, dtype=np.float64))[::-1]
    a = np.sort(np.asarray(approx, dtype=np.float64))[::-1]
    if e.shape != a.shape:
        raise ValidationError(f"spectra have different lengths ({e.size} vs {a.size})")
    denom = np.abs(e).sum()
    if denom == 0:
        return float("inf") if np.any(a) else 0.0
    return float(np.abs(e - a).sum() / denom)


def first_value_error(exact, approx) -> float:
    e = float(np.max(exact)) if np.size(exact) else 0.0
    a = float(np.max(approx)) if np.size(approx) else 0.0
    if e == 0:
        return 0.0 if a == 0 else float("inf")
    return abs(e - a) / abs(e)


@dataclass
class MethodResult:
    method: str
    spectrum: SingularSpectrum
    seconds: float
    overall_error: float = 0.0
    first_error: float = 0.0
    cluster_errors: Optional[list[float]] = None


@dataclass
class ErrorReport:
    results: dict[str, MethodResult] = field(default_factory=dict)
    reference: str = "exact"

    def errors(self) -> dict[str, dict[str, float]]:
        return {
            m: {"overall": r.overall_error, "first": r.first_error, "seconds": r.seconds}
            for m, r in self.results.items()
        }


METHODS = ("exact", "circular", "sample", "quantile")


def run_method(layer: ConvLayer, method: str, *, config: QuantileConfig = QuantileConfig(),
               size_cap: Optional[int] = DEFAULT_SIZE_CAP) -> tuple[SingularSpectrum, float]:
    table: dict[str, Callable[[], SingularSpectrum]] = {
        "exact": lambda: exact_layer_spectrum(layer, size_cap),
        "circular": lambda: circular_spectrum(layer, size_cap),
        "sample": lambda: uniform_sampling_spectrum(layer),
        "quantile": lambda: quantile_spectrum(layer, config=config),
    }
    if method not in table:
        raise ValidationError(f"unknown method {method!r}; expected one of {METHODS}")
    t0 = time.perf_counter()
    spec = table[method]()
    return spec, time.perf_counter() - t0


def compare_methods(layer: ConvLayer, methods: Sequence[str] = ("circular", "sample", "quantile"), *,
                    config: QuantileConfig = QuantileConfig(),
                    size_cap: Optional[int] = DEFAULT_SIZE_CAP) -> ErrorReport:
    """Errors of each method against the exact spectrum, compared as globally sorted lists.

    Per-cluster errors are reported only when there is a single cluster,
    since the exact spectrum carries no cluster labels otherwise.
    """
    exact, t_exact = run_method(layer, "exact", size_cap=size_cap)
    report = ErrorReport()
    report.results["exact"] = MethodResult("exact", exact, t_exact)
    for m in methods:
        if m == "exact":
            continue
        spec, secs = run_method(layer, m, config=config, size_cap=size_cap)
        res = MethodResult(m, spec, secs, overall_error(exact.values, spec.values),
                           first_value_error(exact.values, spec.values))
        if min(layer.r, layer.s) == 1:
            res.cluster_errors = [float(np.max(np.abs(exact.values - spec.values)))]
        report.results[m] = res
    return report
