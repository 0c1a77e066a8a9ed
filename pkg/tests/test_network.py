import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qrbfnn.network import (Cosine, Gaussian, RbfNetwork, activation_matrix, cosine_kernel, forward,
                            gaussian_kernel, hidden_activations)
from qrbfnn.plants import kmeans_centers

finite = st.floats(-50, 50, allow_nan=False)


def vec(n):
    return arrays(float, n, elements=finite)


class TestGaussianKernel:
    def test_identity(self):
        assert gaussian_kernel([0.3, -1.2], [0.3, -1.2], 0.7) == 1.0

    def test_distance_equal_to_spread(self):
        assert gaussian_kernel([0.0, 0.6], [0.8, 0.0], 1.0) == pytest.approx(math.exp(-1))

    def test_cluster_means(self):
        # independent evaluation of exp(-(0.5)^2 / 0.1^2)
        assert gaussian_kernel([0.25], [0.75], 0.1) == pytest.approx(1.3887943864964021e-11, rel=1e-12)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            gaussian_kernel([1.0, 2.0], [1.0], 1.0)
        with pytest.raises(ValueError):
            gaussian_kernel([1.0], [1.0], 0.0)
        with pytest.raises(ValueError):
            Gaussian(-1.0)

    @given(vec(3), vec(3), st.floats(0.01, 10))
    def test_bounded(self, x, c, s):
        v = gaussian_kernel(x, c, s)
        assert 0.0 <= v <= 1.0


class TestCosineKernel:
    def test_zero_input(self):
        assert cosine_kernel([0.0, 0.0], [1.0, 2.0]) == 0.0

    def test_orthogonal(self):
        assert cosine_kernel([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_stabilizer(self):
        assert cosine_kernel([1.0], [1.0], 0.01) == pytest.approx(1 / 1.01, rel=1e-12)

    def test_rejects_nonpositive_stabilizer(self):
        with pytest.raises(ValueError):
            cosine_kernel([1.0], [1.0], 0.0)

    @given(vec(2), vec(2))
    def test_bounded(self, x, c):
        assert -1.0 <= cosine_kernel(x, c) <= 1.0


class TestActivations:
    def test_single_neuron_at_center(self):
        net = RbfNetwork(np.array([[0.4, 0.1]]))
        np.testing.assert_array_equal(hidden_activations(net, [0.4, 0.1]), [1.0])

    def test_far_center(self):
        net = RbfNetwork(np.array([[0.0], [100.0]]), kernel=Gaussian(1.0))
        np.testing.assert_allclose(hidden_activations(net, [0.0]), [1.0, 0.0], atol=1e-300)

    def test_matches_elementwise_on_cluster_task(self, rng):
        labels = rng.integers(0, 2, 100)
        x = (np.array([0.25, 0.75])[labels] + 0.1 * rng.standard_normal(100))[:, None]
        centers = kmeans_centers(x, 2, seed=0)
        phi = activation_matrix(centers, Gaussian(0.1), x)
        oracle = [[math.exp(-((xi - ci) ** 2) / 0.01) for ci in centers[:, 0]] for xi in x[:, 0]]
        np.testing.assert_allclose(phi, oracle, rtol=1e-12, atol=0)

    def test_cosine_batch_matches_scalar(self, rng):
        c = rng.normal(size=(3, 2))
        x = rng.normal(size=(5, 2))
        phi = activation_matrix(c, Cosine(), x)
        oracle = [[cosine_kernel(xi, ci) for ci in c] for xi in x]
        np.testing.assert_allclose(phi, oracle, rtol=1e-12)

    @given(st.permutations(range(4)), vec(2))
    def test_permutation_equivariant(self, perm, x):
        centers = np.array([[0.0, 1.0], [2.0, -1.0], [0.5, 0.5], [-3.0, 2.0]])
        kernel = Gaussian(2.0)
        a = activation_matrix(centers, kernel, x)
        b = activation_matrix(centers[list(perm)], kernel, x)
        np.testing.assert_array_equal(a[list(perm)], b)


class TestForward:
    def test_zero_weights_give_bias(self):
        net = RbfNetwork(np.zeros((3, 2)), bias=-0.7)
        assert forward(net, [1.0, 2.0]) == -0.7

    def test_unit_weight_at_center(self):
        net = RbfNetwork(np.array([[1.5]]), weights=np.array([1.0]))
        assert forward(net, [1.5]) == 1.0

    def test_matches_dot_product_oracle(self, rng):
        c = rng.normal(size=(6, 3))
        net = RbfNetwork(c, weights=rng.normal(size=6), bias=0.3)
        x = rng.normal(size=3)
        phi = [math.exp(-sum((xi - ci) ** 2 for xi, ci in zip(x, row))) for row in c]
        oracle = sum(w * p for w, p in zip(net.weights, phi)) + 0.3
        assert forward(net, x) == pytest.approx(oracle, rel=1e-12)

    @given(st.floats(-5, 5), arrays(float, 4, elements=st.floats(-5, 5)), st.floats(-5, 5))
    def test_linear_in_parameters(self, alpha, w, b):
        centers = np.array([[0.0], [1.0], [2.0], [3.0]])
        x = [1.3]
        y = forward(RbfNetwork(centers, w, b), x)
        y2 = forward(RbfNetwork(centers, alpha * w, alpha * b), x)
        assert y2 == pytest.approx(alpha * y, rel=1e-9, abs=1e-9)

    def test_one_dimensional_centers_are_columns(self):
        net = RbfNetwork(np.array([0.0, 1.0]))
        assert net.centers.shape == (2, 1)
        assert (net.n_neurons, net.input_dim) == (2, 1)

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            RbfNetwork(np.zeros((2, 2)), weights=np.zeros(3))
        with pytest.raises(ValueError):
            RbfNetwork(np.array([[np.nan]]))
        with pytest.raises(ValueError):
            forward(RbfNetwork(np.zeros((2, 2))), [1.0, 2.0, 3.0])
