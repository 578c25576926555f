"""Seeded Monte-Carlo accuracy benchmark over random filters.

Each trial draws its own generator from ``SeedSequence(seed).spawn(trials)``
(PCG64), so a trial's filter depends only on ``(seed, trial index)``. Results
are stored by trial index, which makes the aggregate independent of how many
worker threads ran the trials.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Literal, Optional

import numpy as np

from .approximation import QuantileConfig, first_value_error, overall_error, quantile_spectrum
from .core import ConvLayer, PaddingSpec, ValidationError, default_padding, make_layer
from .density import make_density, sample_grid
from .operators import build_T
from .svd import singular_values

Distribution = Literal["uniform", "gaussian"]
PRNG = "numpy.random.PCG64 seeded per trial by numpy.random.SeedSequence(seed).spawn(trials)"


def draw_filter(rng: np.random.Generator, shape, dist: Distribution) -> np.ndarray:
    if dist == "uniform":
        return rng.uniform(-0.5, 0.5, size=shape)
    if dist == "gaussian":
        return rng.standard_normal(size=shape)
    raise ValidationError(f"unknown distribution {dist!r}")


@dataclass
class TrialResult:
    trial: int
    circular_overall: float
    circular_first: float
    quantile_overall: float
    quantile_first: float


def run_trial(layer: ConvLayer, trial: int, config: QuantileConfig) -> TrialResult:
    exact = singular_values(build_T(layer).entries)
    # circular spectrum taken from the grid samples, identical to svd(C) as a multiset
    circ = sample_grid(make_density(layer), layer.n).all_values()
    quant = quantile_spectrum(layer, config=config).values
    return TrialResult(
        trial,
        overall_error(exact, circ),
        first_value_error(exact, circ),
        overall_error(exact, quant),
        first_value_error(exact, quant),
    )


@dataclass
class BenchSummary:
    shape: tuple[int, int, int, int]
    n: int
    dist: str
    trials: int
    seed: int
    gamma: float | list[float]
    pad: tuple[int, int, int, int]
    prng: str = PRNG
    per_trial: list[TrialResult] = field(default_factory=list)

    def _col(self, name: str) -> np.ndarray:
        return np.array([getattr(t, name) for t in self.per_trial])

    def stats(self) -> dict[str, dict[str, float]]:
        out = {}
        for name in ("circular_overall", "circular_first", "quantile_overall", "quantile_first"):
            col = self._col(name)
            out[name] = {"mean": float(col.mean()), "std": float(col.std(ddof=1)) if col.size > 1 else 0.0}
        return out

    def as_dict(self) -> dict:
        d = asdict(self)
        d["stats"] = self.stats()
        return d


def monte_carlo(shape, n: int = 10, trials: int = 100, seed: int = 0, dist: Distribution = "uniform",
                config: QuantileConfig = QuantileConfig(), pad: Optional[PaddingSpec] = None,
                jobs: int = 1) -> BenchSummary:
    """Average circular and quantile errors against the exact spectrum over random filters."""
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    shape = tuple(int(x) for x in shape)
    pad = pad or default_padding(shape[2], shape[3])
    children = np.random.SeedSequence(seed).spawn(trials)

    def one(i: int) -> TrialResult:
        rng = np.random.Generator(np.random.PCG64(children[i]))
        layer = make_layer(draw_filter(rng, shape, dist), n, pad)
        return run_trial(layer, i, config)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, range(trials)))
    else:
        results = [one(i) for i in range(trials)]
    gamma = float(config.gamma) if np.ndim(config.gamma) == 0 else [float(g) for g in config.gamma]
    return BenchSummary(shape, n, dist, trials, seed, gamma, pad.as_tuple(), per_trial=results)
