"""Dense matrix realizations of a convolutional layer.

Five representations are provided:

``A``
    ``c_out x c_in`` grid of doubly Toeplitz ``n^2 x n^2`` blocks, the
    matrix acting on the channel-major ``vec`` of the input.
``T``
    two-level block Toeplitz matrix whose innermost entries are the
    ``c_out x c_in`` tap matrices ``T_{k,l}``. Same singular values as ``A``.
``C``
    doubly block circulant counterpart of ``T`` (wrap-around convolution).
``CA``
    circulant counterpart of ``A``. Same singular values as ``C``.
``Tg``
    stride-``g`` convolution: ``T`` with output rows subsampled by ``g`` in
    both spatial directions.

Row/column index conventions, for output pixel ``(i1, i2)`` and channel ``c``:

* ``A``/``CA``: row ``c*n^2 + i1*n + i2``
* ``T``/``C``/``Tg``: row ``(i1*m + i2)*c_out + c`` (``m = n`` unless strided)

Tap ``T_{k,l}`` links output ``(i1, i2)`` with input ``(i1 - k, i2 - l)``.
"""

from __future__ import annotations

import numpy as np

from .core import ConvLayer, DenseOperator, UnsupportedStride


def tap_stack(layer: ConvLayer) -> np.ndarray:
    """Taps as an ``(h, w, c_out, c_in)`` array; ``[k + h1, l + w1]`` holds ``T_{k,l}``."""
    return np.ascontiguousarray(layer.weights.transpose(2, 3, 0, 1))


def _offsets(lo: int, hi: int) -> np.ndarray:
    return np.arange(-lo, hi + 1)


def _shift_stack(offsets: np.ndarray, n_out: int, n_in: int, *, stride: int = 1, circular: bool = False) -> np.ndarray:
    """``S[t, i, j] = 1`` iff ``stride*i - j == offsets[t]`` (mod ``n_in`` when circular)."""
    i = np.arange(n_out)[:, None]
    j = np.arange(n_in)[None, :]
    diff = stride * i - j
    if circular:
        return ((diff[None] - offsets[:, None, None]) % n_in == 0).astype(np.float64)
    return (diff[None] == offsets[:, None, None]).astype(np.float64)


def _assemble(layer: ConvLayer, *, circular: bool, channel_major: bool, stride: int = 1) -> np.ndarray:
    p = layer.pad
    n = layer.n
    m = (n - 1) // stride + 1
    taps = tap_stack(layer)
    row_shift = _shift_stack(_offsets(p.h1, p.h2), m, n, stride=stride, circular=circular)
    col_shift = _shift_stack(_offsets(p.w1, p.w2), m, n, stride=stride, circular=circular)
    if channel_major:
        out = np.einsum("kab,lxy,klcd->caxdby", row_shift, col_shift, taps, optimize=True)
    else:
        out = np.einsum("kab,lxy,klcd->axcbyd", row_shift, col_shift, taps, optimize=True)
    return out.reshape(layer.r * m * m, layer.s * n * n)


def _require_unit_stride(layer: ConvLayer) -> None:
    if layer.geom.stride != 1:
        raise UnsupportedStride(f"this representation requires stride 1, got {layer.geom.stride}; use build_T_strided")


def build_A(layer: ConvLayer) -> DenseOperator:
    _require_unit_stride(layer)
    n = layer.n
    e = _assemble(layer, circular=False, channel_major=True)
    return DenseOperator(e, "A", layer.r, layer.s, n, n, n, n)


def build_T(layer: ConvLayer) -> DenseOperator:
    _require_unit_stride(layer)
    n = layer.n
    e = _assemble(layer, circular=False, channel_major=False)
    return DenseOperator(e, "T", layer.r, layer.s, n, n, n, n)


def build_C(layer: ConvLayer) -> DenseOperator:
    _require_unit_stride(layer)
    n = layer.n
    e = _assemble(layer, circular=True, channel_major=False)
    return DenseOperator(e, "C", layer.r, layer.s, n, n, n, n)


def build_CA(layer: ConvLayer) -> DenseOperator:
    _require_unit_stride(layer)
    n = layer.n
    e = _assemble(layer, circular=True, channel_major=True)
    return DenseOperator(e, "CA", layer.r, layer.s, n, n, n, n)


def build_T_strided(layer: ConvLayer) -> DenseOperator:
    """Block ``(i, j)`` at both spatial levels is ``T_{g*i - j}``; ``m = (n-1)//g + 1`` row blocks.

    For ``g = 1`` this coincides with :func:`build_T`.
    """
    g = layer.geom.stride
    n = layer.n
    m = layer.geom.out_size
    e = _assemble(layer, circular=False, channel_major=False, stride=g)
    return DenseOperator(e, "Tg", layer.r, layer.s, m, m, n, n)


BUILDERS = {
    "A": build_A,
    "T": build_T,
    "C": build_C,
    "CA": build_CA,
    "Tg": build_T_strided,
}
