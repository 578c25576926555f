"""Shared oracles and random-layer factories."""

import numpy as np
import pytest
from scipy.signal import convolve2d

from convspectra import make_layer


def conv_apply(weights, x, pad, *, circular=False, stride=1):
    """Apply the layer to one input image ``x`` of shape ``(c_in, n, n)``."""
    c_out, c_in, h, w = weights.shape
    h1, _, w1, _ = pad
    n = x.shape[-1]
    y = np.zeros((c_out, n, n))
    for c in range(c_out):
        for d in range(c_in):
            if circular:
                for p in range(h):
                    for q in range(w):
                        y[c] += weights[c, d, p, q] * np.roll(x[d], (p - h1, q - w1), axis=(0, 1))
            else:
                y[c] += convolve2d(x[d], weights[c, d], mode="full")[h1:h1 + n, w1:w1 + n]
    return y[:, ::stride, ::stride]


def brute_matrix(weights, n, pad, *, circular=False, stride=1, channel_major=False):
    """Operator matrix assembled column by column from standard-basis inputs."""
    c_out, c_in = weights.shape[:2]
    cols = []
    for idx in range(c_in * n * n):
        e = np.zeros(c_in * n * n)
        e[idx] = 1.0
        x = e.reshape(c_in, n, n) if channel_major else e.reshape(n, n, c_in).transpose(2, 0, 1)
        y = conv_apply(weights, x, pad, circular=circular, stride=stride)
        cols.append(y.ravel() if channel_major else y.transpose(1, 2, 0).ravel())
    return np.stack(cols, axis=1)


def random_layer(rng, *, max_ch=4, max_n=8, max_k=5, n=None, pad=None):
    r, s = rng.integers(1, max_ch + 1, size=2)
    n = int(n if n is not None else rng.integers(2, max_n + 1))
    h = int(rng.integers(1, min(max_k, n) + 1))
    w = int(rng.integers(1, min(max_k, n) + 1))
    if pad is None:
        h1 = int(rng.integers(0, h))
        w1 = int(rng.integers(0, w))
        pad = (h1, h - 1 - h1, w1, w - 1 - w1)
    return make_layer(rng.uniform(-0.5, 0.5, size=(r, s, h, w)), n, pad)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def ones3():
    return make_layer(np.ones((1, 1, 3, 3)), 4)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
