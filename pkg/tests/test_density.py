import numpy as np
import pytest
from scipy.signal import convolve2d

from convspectra import build_C, build_T, compose_symbols, eval_F, make_density, make_layer, sample_grid
from convspectra.core import DimensionMismatch, ValidationError
from convspectra.density import SpectralDensity, dft_blocks, grid_frequencies, identity_density
from convspectra.svd import singular_values

from conftest import random_layer


class TestEvaluation:
    def test_single_tap_constant(self):
        d = make_density(make_layer(np.full((1, 1, 1, 1), 1.7), 3))
        B = eval_F(d, np.linspace(-3, 3, 5), np.linspace(-3, 3, 4))
        np.testing.assert_allclose(B, 1.7)

    def test_all_ones_closed_form(self, ones3):
        d = make_density(ones3)
        om = np.linspace(-np.pi, np.pi, 7)
        B = eval_F(d, om, om)[..., 0, 0]
        np.testing.assert_allclose(B, np.outer(1 + 2 * np.cos(om), 1 + 2 * np.cos(om)), atol=1e-14)
        assert eval_F(d, 0.0, 0.0)[0, 0] == pytest.approx(9.0)
        assert abs(eval_F(d, np.pi, np.pi)[0, 0]) == pytest.approx(1.0)

    def test_conjugate_symmetry(self, rng):
        d = make_density(random_layer(rng))
        om = rng.uniform(-np.pi, np.pi, 6)
        np.testing.assert_allclose(eval_F(d, -om, -om), np.conj(eval_F(d, om, om)), atol=1e-14)

    def test_quadrature_recovers_taps(self, rng):
        layer = make_layer(rng.uniform(-0.5, 0.5, (2, 3, 3, 5)), 6, (0, 2, 3, 1))
        d = make_density(layer)
        om = 2 * np.pi * np.arange(64) / 64
        F = eval_F(d, om, om)
        for k in d.row_offsets():
            for l in d.col_offsets():
                phase = np.exp(-1j * np.add.outer(k * om, l * om))
                coeff = np.einsum("ab,abrs->rs", phase, F) / 64 ** 2
                np.testing.assert_allclose(coeff, layer.tap(k, l), atol=1e-8)

    def test_coefficient_count(self, rng):
        layer = random_layer(rng)
        d = make_density(layer)
        assert d.row_offsets().size * d.col_offsets().size == layer.h * layer.w


class TestGrid:
    def test_even_grid_points(self):
        np.testing.assert_allclose(grid_frequencies(6), -np.pi + 2 * np.pi * np.arange(6) / 6)

    def test_constant_symbol(self):
        g = sample_grid(make_density(make_layer(np.full((1, 1, 1, 1), -2.5), 4)), 4)
        assert g.values.shape == (4, 4, 1)
        np.testing.assert_allclose(g.values, 2.5)

    def test_values_sorted(self, rng):
        g = sample_grid(make_density(make_layer(rng.uniform(-0.5, 0.5, (3, 4, 3, 3)), 5)), 5)
        assert g.n_clusters == 3
        assert np.all(np.diff(g.values, axis=-1) <= 0) and np.all(g.values >= 0)

    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_matches_circulant(self, rng, n):
        layer = make_layer(rng.uniform(-0.5, 0.5, (2, 2, 3, 3)), n)
        grid = sample_grid(make_density(layer), n).all_values()
        exact = singular_values(build_C(layer).entries)
        np.testing.assert_allclose(grid, exact, rtol=0, atol=1e-8 * exact[0])

    @pytest.mark.parametrize("n", [4, 5])
    def test_dft_route(self, rng, n):
        d = make_density(random_layer(rng, n=n))
        om = 2 * np.pi * np.arange(n) / n
        np.testing.assert_allclose(dft_blocks(d, n), eval_F(d, om, om), rtol=0, atol=1e-10)

    def test_too_small(self, ones3):
        with pytest.raises(ValidationError):
            sample_grid(make_density(ones3), 2)


class TestCompose:
    def test_identity(self, rng):
        layer = make_layer(rng.uniform(-0.5, 0.5, (3, 2, 3, 3)), 6)
        d = make_density(layer)
        for stack in ([d, identity_density(3)], [identity_density(2), d]):
            c = compose_symbols(stack)
            np.testing.assert_allclose(sample_grid(c, 6).values, sample_grid(d, 6).values, atol=1e-14)

    def test_scalar_full_convolution(self, rng):
        k1, k2 = rng.uniform(-0.5, 0.5, (2, 3, 3))
        d1 = make_density(make_layer(k1[None, None], 5))
        d2 = make_density(make_layer(k2[None, None], 5))
        full = convolve2d(k1, k2, mode="full")
        direct = SpectralDensity(full[:, :, None, None], 2, 2)
        om = rng.uniform(-np.pi, np.pi, 5)
        np.testing.assert_allclose(eval_F(compose_symbols([d1, d2]), om, om), eval_F(direct, om, om), atol=1e-12)

    def test_order_and_shape(self, rng):
        d1 = make_density(make_layer(rng.uniform(-0.5, 0.5, (4, 2, 3, 3)), 6))
        d2 = make_density(make_layer(rng.uniform(-0.5, 0.5, (3, 4, 1, 3)), 6))
        c = compose_symbols([d1, d2])
        assert (c.r, c.s, c.h, c.w) == (3, 2, 3, 5)
        om = np.array([0.3, -1.1])
        np.testing.assert_allclose(eval_F(c, om, om), eval_F(d2, om, om) @ eval_F(d1, om, om), atol=1e-13)
        with pytest.raises(DimensionMismatch):
            compose_symbols([d2, d1])

    def test_product_spectrum_converges(self, rng):
        k1, k2 = rng.uniform(-0.5, 0.5, (2, 1, 1, 3, 3))

        def mae(n):
            l1, l2 = make_layer(k1, n), make_layer(k2, n)
            exact = singular_values(build_T(l2).entries @ build_T(l1).entries)
            approx = sample_grid(compose_symbols([make_density(l1), make_density(l2)]), n).all_values()
            return np.mean(np.abs(exact - approx))

        assert mae(20) < mae(10)
