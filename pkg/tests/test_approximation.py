import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from convspectra import (
    QuantileConfig,
    QuantileModel,
    circular_spectrum,
    compare_methods,
    exact_layer_spectrum,
    first_value_error,
    make_layer,
    overall_error,
    quantile_spectrum,
    uniform_sampling_spectrum,
)
from convspectra.approximation import run_method
from convspectra.core import SizeCapExceeded, ValidationError

from conftest import random_layer


class TestQuantileModel:
    def test_constant_samples(self):
        q = QuantileModel(np.full(16, 0.7))
        np.testing.assert_array_equal(q.estimates(0.5), np.full(16, 0.7))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(0, 100, allow_nan=False), min_size=1, max_size=40),
           st.lists(st.floats(0, 1), min_size=2, max_size=20),
           st.sampled_from(["linear", "kernel"]))
    def test_monotone(self, samples, us, interp):
        q = QuantileModel(samples, interp=interp)
        us = np.sort(us)
        vals = q(us)
        assert np.all(np.diff(vals) >= -1e-9 * max(1.0, max(samples)))
        assert np.all(vals >= min(samples) - 1e-12) and np.all(vals <= max(samples) + 1e-12)

    def test_small_gamma_recovers_samples(self, rng):
        x = rng.uniform(0, 3, 50)
        est = QuantileModel(x).estimates(1e-3)
        np.testing.assert_allclose(est, np.sort(x), rtol=0.01)

    def test_midpoint_is_between_order_statistics(self):
        q = QuantileModel([1.0, 2.0, 4.0])
        np.testing.assert_allclose(q.estimates(0.5), [1.0, 1.5, 3.0])
        np.testing.assert_allclose(QuantileModel([1.0, 2.0, 4.0], anchor="zero").estimates(0.5), [0.5, 1.5, 3.0])

    def test_kernel_close_to_linear(self, rng):
        x = rng.normal(2.0, 0.3, 400)
        lin = QuantileModel(x).estimates(0.5)
        ker = QuantileModel(x, interp="kernel").estimates(0.5)
        assert np.max(np.abs(lin - ker)[20:-20]) < 0.05


class TestConfig:
    @pytest.mark.parametrize("g", [0.0, 1.0, -0.1, [0.5, 1.2]])
    def test_gamma_range(self, g):
        with pytest.raises(ValidationError):
            QuantileConfig(gamma=g)

    def test_per_cluster_gamma(self, rng):
        layer = make_layer(rng.uniform(-0.5, 0.5, (2, 3, 3, 3)), 5)
        a = quantile_spectrum(layer, config=QuantileConfig(gamma=[0.5, 0.5]))
        b = quantile_spectrum(layer)
        np.testing.assert_array_equal(a.values, b.values)
        with pytest.raises(ValidationError):
            quantile_spectrum(layer, config=QuantileConfig(gamma=[0.5, 0.5, 0.5]))


class TestSpectra:
    def test_single_tap(self):
        layer = make_layer(np.full((1, 1, 1, 1), -1.5), 3)
        for fn in (circular_spectrum, uniform_sampling_spectrum, quantile_spectrum):
            np.testing.assert_allclose(fn(layer).values, 1.5)

    def test_sample_equals_circular(self, rng):
        for _ in range(5):
            layer = random_layer(rng)
            c = circular_spectrum(layer).values
            np.testing.assert_allclose(uniform_sampling_spectrum(layer).values, c, rtol=0, atol=1e-8 * c[0])

    def test_ones_contains_nine(self, ones3):
        assert circular_spectrum(ones3).values[0] == pytest.approx(9.0)

    def test_counts_and_clusters(self, rng):
        layer = make_layer(rng.uniform(-0.5, 0.5, (3, 5, 3, 3)), 6)
        for spec in (circular_spectrum(layer), uniform_sampling_spectrum(layer), quantile_spectrum(layer)):
            assert len(spec) == 36 * 3
        for spec in (uniform_sampling_spectrum(layer), quantile_spectrum(layer)):
            assert len(spec.clusters) == 3 and all(c.size == 36 for c in spec.clusters)

    def test_constant_symbol_clusters(self):
        layer = make_layer(np.array([[[[2.0]], [[0.0]]], [[[0.0]], [[0.5]]]]), 4)
        for spec in (uniform_sampling_spectrum(layer), quantile_spectrum(layer)):
            np.testing.assert_allclose(spec.clusters[0], 2.0)
            np.testing.assert_allclose(spec.clusters[1], 0.5)

    def test_kernel_mode_runs(self, rng):
        layer = make_layer(rng.uniform(-0.5, 0.5, (2, 2, 3, 3)), 6)
        spec = quantile_spectrum(layer, config=QuantileConfig(interp="kernel"))
        assert len(spec) == 72 and spec.provenance == "quantile"

    def test_error_trend_in_n(self, rng):
        # max |estimate - exact| shrinks as the input grows, single cluster
        for _ in range(3):
            w = rng.uniform(-0.5, 0.5, (1, 1, 3, 3))
            errs = []
            for n in (6, 12, 24):
                layer = make_layer(w, n)
                errs.append(np.max(np.abs(exact_layer_spectrum(layer).values - quantile_spectrum(layer).values)))
            assert errs[0] > errs[1] > errs[2]

    def test_top_value_closer_than_circular(self):
        w = np.random.default_rng(7).uniform(-0.5, 0.5, (1, 1, 5, 5))
        layer = make_layer(w, 10)
        s1 = exact_layer_spectrum(layer).values[0]
        assert abs(quantile_spectrum(layer).values[0] - s1) < abs(circular_spectrum(layer).values[0] - s1)


class TestErrors:
    def test_exact_vs_itself(self, rng):
        layer = random_layer(rng)
        e = exact_layer_spectrum(layer).values
        assert overall_error(e, e) == 0.0 and first_value_error(e, e) == 0.0

    def test_doubling(self, rng):
        e = rng.uniform(0, 1, 20)
        assert overall_error(e, 2 * e) == pytest.approx(1.0)

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            overall_error([1.0, 2.0], [1.0])

    def test_compare_single_tap(self):
        rep = compare_methods(make_layer(np.full((1, 1, 1, 1), 3.0), 4))
        for m, r in rep.results.items():
            assert r.overall_error == 0.0 and r.first_error == 0.0
        assert set(rep.errors()) == {"exact", "circular", "sample", "quantile"}

    def test_compare_cluster_errors_single_channel(self, rng):
        rep = compare_methods(make_layer(rng.uniform(-0.5, 0.5, (1, 1, 3, 3)), 6))
        assert rep.results["quantile"].cluster_errors is not None
        rep = compare_methods(make_layer(rng.uniform(-0.5, 0.5, (2, 2, 3, 3)), 6))
        assert rep.results["quantile"].cluster_errors is None

    def test_size_cap(self, rng):
        layer = make_layer(rng.uniform(-0.5, 0.5, (2, 2, 3, 3)), 6)
        with pytest.raises(SizeCapExceeded):
            run_method(layer, "exact", size_cap=100)
        run_method(layer, "exact", size_cap=None)
        run_method(layer, "quantile", size_cap=100)

    def test_unknown_method(self, ones3):
        with pytest.raises(ValidationError):
            run_method(ones3, "magic")
