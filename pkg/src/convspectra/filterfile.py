"""Reading and writing filter files.

A filter file is a UTF-8 JSON manifest::

    {"c_out": 2, "c_in": 3, "h": 3, "w": 3, "n": 10,
     "pad": [1, 1, 1, 1], "stride": 1,
     "data": [...]}                 # c_out*c_in*h*w numbers, row-major

``pad`` and ``stride`` are optional. Instead of ``data`` a manifest may name
a binary sidecar with ``"data_file": "weights.cfl"`` (resolved relative to
the manifest). The sidecar layout is a 32-byte header followed by the
weights as little-endian float64 in row-major ``(c_out, c_in, h, w)`` order:

    bytes 0-3    magic b"CFL1"
    bytes 4-19   c_out, c_in, h, w as little-endian uint32
    bytes 20-31  reserved, zero
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core import (
    ConvFilter,
    ConvLayer,
    DimensionMismatch,
    InputGeometry,
    PaddingSpec,
    ValidationError,
    default_padding,
    validate_filter,
)

MAGIC = b"CFL1"
HEADER = struct.Struct("<4s4I12s")
assert HEADER.size == 32


class FilterFileError(ValidationError):
    """Malformed filter file."""


def write_binary(path, weights: np.ndarray) -> None:
    w = np.asarray(weights, dtype="<f8")
    if w.ndim != 4:
        raise DimensionMismatch(f"weights must be 4-D, got shape {w.shape}")
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, *w.shape, b"\0" * 12))
        fh.write(np.ascontiguousarray(w).tobytes(order="C"))


def read_binary(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < HEADER.size:
        raise FilterFileError(f"{path}: file shorter than the 32-byte header")
    magic, c_out, c_in, h, w, _ = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FilterFileError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if min(c_out, c_in, h, w) < 1:
        raise FilterFileError(f"{path}: header dims must be positive, got {(c_out, c_in, h, w)}")
    count = c_out * c_in * h * w
    payload = len(raw) - HEADER.size
    if payload != 8 * count:
        raise FilterFileError(
            f"{path}: header declares {count} weights ({8 * count} bytes) but payload has {payload} bytes"
        )
    data = np.frombuffer(raw, dtype="<f8", offset=HEADER.size, count=count)
    return data.astype(np.float64).reshape(c_out, c_in, h, w)


def _require_int(manifest: dict, key: str, path) -> int:
    if key not in manifest:
        raise FilterFileError(f"{path}: missing field '{key}'")
    v = manifest[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise FilterFileError(f"{path}: field '{key}' must be a positive integer, got {v!r}")
    return v


def parse_filter_file(path, n: Optional[int] = None, stride: Optional[int] = None) -> ConvLayer:
    """Load a manifest (or a bare binary sidecar) into a validated layer.

    ``n`` and ``stride`` override the manifest values; a bare sidecar
    carries no geometry, so ``n`` is then required.
    """
    path = Path(path)
    if not path.exists():
        raise FilterFileError(f"{path}: no such file")
    head = path.read_bytes()[:4]
    if head == MAGIC:
        if n is None:
            raise FilterFileError(f"{path}: binary filter files carry no input size; pass n explicitly")
        weights = read_binary(path)
        filt = ConvFilter(weights)
        return validate_filter(filt, default_padding(filt.h, filt.w), InputGeometry(n, stride or 1))

    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FilterFileError(f"{path}: not a valid JSON manifest ({exc})") from exc
    if not isinstance(manifest, dict):
        raise FilterFileError(f"{path}: manifest must be a JSON object")

    dims = [_require_int(manifest, k, path) for k in ("c_out", "c_in", "h", "w")]
    if n is None:
        n = _require_int(manifest, "n", path)
    if stride is None:
        stride = manifest.get("stride", 1)

    if "data" in manifest and "data_file" in manifest:
        raise FilterFileError(f"{path}: give either 'data' or 'data_file', not both")
    if "data_file" in manifest:
        weights = read_binary(path.parent / manifest["data_file"])
        if list(weights.shape) != dims:
            raise DimensionMismatch(
                f"{path}: sidecar dims {list(weights.shape)} differ from manifest dims {dims}"
            )
        filt = ConvFilter(weights)
    elif "data" in manifest:
        data = manifest["data"]
        if not isinstance(data, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in data
        ):
            raise FilterFileError(f"{path}: 'data' must be a flat array of numbers")
        filt = ConvFilter.from_flat(*dims, data)
    else:
        raise FilterFileError(f"{path}: manifest needs 'data' or 'data_file'")

    pad = manifest.get("pad")
    if pad is None:
        spec = default_padding(filt.h, filt.w)
    else:
        if not isinstance(pad, list) or len(pad) != 4:
            raise FilterFileError(f"{path}: 'pad' must be [h1, h2, w1, w2]")
        spec = PaddingSpec(*pad)
    return validate_filter(filt, spec, InputGeometry(n, stride))


def layer_manifest(layer: ConvLayer, data_file: Optional[str] = None, meta: Optional[dict] = None) -> dict:
    f = layer.filter
    out = {"c_out": f.c_out, "c_in": f.c_in, "h": f.h, "w": f.w, "n": layer.n,
           "pad": list(layer.pad.as_tuple()), "stride": layer.geom.stride}
    if data_file is None:
        out["data"] = f.flat().tolist()
    else:
        out["data_file"] = data_file
    if meta:
        out["meta"] = meta
    return out


def write_filter_file(path, layer: ConvLayer, sidecar: bool = False, meta: Optional[dict] = None) -> None:
    path = Path(path)
    data_file = None
    if sidecar:
        data_file = path.with_suffix(".cfl").name
        write_binary(path.parent / data_file, layer.weights)
    path.write_text(json.dumps(layer_manifest(layer, data_file, meta), indent=1), encoding="utf-8")


def dims_of(shape: Sequence[int]) -> tuple[int, int, int, int]:
    if len(shape) != 4:
        raise ValidationError(f"shape must have four entries (c_out c_in h w), got {list(shape)}")
    return tuple(int(x) for x in shape)  # type: ignore[return-value]
