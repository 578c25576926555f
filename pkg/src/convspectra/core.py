"""Filter, padding and geometry types shared by every other module."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

Representation = Literal["A", "T", "C", "CA", "Tg"]
Provenance = Literal["exact", "circular", "uniform-sampling", "quantile"]


class ConvSpectraError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ConvSpectraError, ValueError):
    """Input does not satisfy a type invariant."""


class DimensionMismatch(ValidationError):
    pass


class PaddingMismatch(ValidationError):
    pass


class FilterExceedsInput(ValidationError):
    pass


class NonFiniteWeights(ValidationError):
    pass


class UnsupportedStride(ValidationError):
    pass


class SizeCapExceeded(ConvSpectraError):
    pass


class NoConvergence(ConvSpectraError, ArithmeticError):
    pass


class DegenerateSingularValue(ConvSpectraError, ArithmeticError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ConvFilter:
    """Weights ``K[c, d, p, q]`` of shape ``(c_out, c_in, h, w)``."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 4:
            raise DimensionMismatch(f"filter must be 4-D (c_out, c_in, h, w), got shape {w.shape}")
        if min(w.shape) < 1:
            raise DimensionMismatch(f"all filter dimensions must be positive, got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise NonFiniteWeights("filter contains NaN or Inf weights")
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def from_flat(cls, c_out: int, c_in: int, h: int, w: int, data: Sequence[float]) -> "ConvFilter":
        flat = np.asarray(data, dtype=np.float64).ravel()
        expected = c_out * c_in * h * w
        if flat.size != expected:
            raise DimensionMismatch(
                f"weights length {flat.size} does not match c_out*c_in*h*w = {c_out}*{c_in}*{h}*{w} = {expected}"
            )
        return cls(flat.reshape(c_out, c_in, h, w))

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return self.weights.shape  # type: ignore[return-value]

    @property
    def c_out(self) -> int:
        return self.weights.shape[0]

    @property
    def c_in(self) -> int:
        return self.weights.shape[1]

    @property
    def h(self) -> int:
        return self.weights.shape[2]

    @property
    def w(self) -> int:
        return self.weights.shape[3]

    def flat(self) -> np.ndarray:
        return self.weights.ravel().copy()

    def scaled(self, factor: float) -> "ConvFilter":
        return ConvFilter(self.weights * factor)


@dataclass(frozen=True)
class PaddingSpec:
    """Split of the filter support around the center tap: ``h = h1 + h2 + 1``."""

    h1: int
    h2: int
    w1: int
    w2: int

    def __post_init__(self):
        for name in ("h1", "h2", "w1", "w2"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise PaddingMismatch(f"padding {name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.h1, self.h2, self.w1, self.w2)


def default_padding(h: int, w: int) -> PaddingSpec:
    """Centered split; for even sizes the extra tap goes after the center."""
    if h < 1 or w < 1:
        raise ValidationError(f"filter size must be positive, got ({h}, {w})")
    h1 = (h - 1) // 2
    w1 = (w - 1) // 2
    return PaddingSpec(h1, h - 1 - h1, w1, w - 1 - w1)


@dataclass(frozen=True)
class InputGeometry:
    n: int
    stride: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"input size n must be a positive integer, got {self.n!r}")
        if int(self.stride) != self.stride or self.stride < 1:
            raise ValidationError(f"stride must be a positive integer, got {self.stride!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "stride", int(self.stride))

    @property
    def out_size(self) -> int:
        """Output side length of a strided convolution."""
        return (self.n - 1) // self.stride + 1


@dataclass(frozen=True)
class ConvLayer:
    """A validated (filter, padding, geometry) bundle.

    Build it through :func:`validate_filter` or :func:`make_layer`; the
    constructor re-checks every invariant so a ``ConvLayer`` is always legal.
    """

    filter: ConvFilter
    pad: PaddingSpec
    geom: InputGeometry

    def __post_init__(self):
        f, p, g = self.filter, self.pad, self.geom
        if p.h1 + p.h2 + 1 != f.h or p.w1 + p.w2 + 1 != f.w:
            raise PaddingMismatch(
                f"padding {p.as_tuple()} inconsistent with filter size (h={f.h}, w={f.w}): "
                "need h1+h2+1 = h and w1+w2+1 = w"
            )
        if f.h > g.n or f.w > g.n:
            raise FilterExceedsInput(f"filter ({f.h}x{f.w}) exceeds input size n={g.n}")

    @property
    def weights(self) -> np.ndarray:
        return self.filter.weights

    @property
    def n(self) -> int:
        return self.geom.n

    @property
    def r(self) -> int:
        return self.filter.c_out

    @property
    def s(self) -> int:
        return self.filter.c_in

    @property
    def h(self) -> int:
        return self.filter.h

    @property
    def w(self) -> int:
        return self.filter.w

    def tap(self, k: int, l: int) -> np.ndarray:
        """Coefficient block ``T_{k,l}`` (c_out x c_in) for offsets k in [-h1, h2], l in [-w1, w2]."""
        p = self.pad
        if not (-p.h1 <= k <= p.h2 and -p.w1 <= l <= p.w2):
            return np.zeros((self.r, self.s))
        return self.weights[:, :, p.h1 + k, p.w1 + l]

    def with_n(self, n: int) -> "ConvLayer":
        return ConvLayer(self.filter, self.pad, InputGeometry(n, self.geom.stride))

    def with_filter(self, filt: ConvFilter) -> "ConvLayer":
        return ConvLayer(filt, self.pad, self.geom)


def validate_filter(filt: ConvFilter, pad: PaddingSpec, geom: InputGeometry) -> ConvLayer:
    return ConvLayer(filt, pad, geom)


def make_layer(
    weights,
    n: int,
    pad: Optional[Sequence[int] | PaddingSpec] = None,
    stride: int = 1,
) -> ConvLayer:
    """Convenience constructor from a 4-D array."""
    filt = ConvFilter(np.asarray(weights, dtype=np.float64))
    if pad is None:
        spec = default_padding(filt.h, filt.w)
    elif isinstance(pad, PaddingSpec):
        spec = pad
    else:
        spec = PaddingSpec(*pad)
    return ConvLayer(filt, spec, InputGeometry(n, stride))


@dataclass(frozen=True)
class DenseOperator:
    """A realized matrix together with its two-level block geometry.

    Rows are ``r * row_outer * row_inner`` and columns ``s * col_outer * col_inner``.
    For ``A`` and ``CA`` the channel index is outermost; for ``T``, ``C`` and
    ``Tg`` it is innermost.
    """

    entries: np.ndarray
    kind: Representation
    r: int
    s: int
    row_outer: int
    row_inner: int
    col_outer: int
    col_inner: int

    def __post_init__(self):
        e = self.entries
        if e.shape != (self.r * self.row_outer * self.row_inner, self.s * self.col_outer * self.col_inner):
            raise DimensionMismatch(f"operator shape {e.shape} inconsistent with declared block geometry")
        if not np.all(np.isfinite(e)):
            raise NonFiniteWeights("operator has non-finite entries")
        object.__setattr__(self, "entries", _frozen(e))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape  # type: ignore[return-value]

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class SingularSpectrum:
    """Singular values sorted nonincreasing, optionally grouped into clusters.

    ``clusters[j]`` holds the ``j``-th singular value function's samples or
    estimates, sorted nonincreasing.
    """

    values: np.ndarray
    provenance: Provenance
    clusters: Optional[tuple[np.ndarray, ...]] = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).ravel()
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise ValidationError("singular values must be finite and nonnegative")
        v = np.sort(v)[::-1]
        object.__setattr__(self, "values", _frozen(v))
        if self.clusters is not None:
            cl = tuple(_frozen(np.sort(np.asarray(c, dtype=np.float64).ravel())[::-1]) for c in self.clusters)
            merged = np.sort(np.concatenate(cl))[::-1] if cl else np.empty(0)
            if merged.shape != v.shape or not np.array_equal(merged, v):
                raise ValidationError("cluster partition does not match the value multiset")
            object.__setattr__(self, "clusters", cl)

    def __len__(self) -> int:
        return self.values.size

    def top(self, k: Optional[int] = None) -> np.ndarray:
        return self.values if k is None else self.values[:k]

