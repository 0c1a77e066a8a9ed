import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qrbfnn.plants import (HammersteinPlant, MackeyGlassSeries, MimoPlant, NonlinearPlant, add_awgn, awgn,
                           empirical_snr_db, hammerstein_step, kmeans, kmeans_centers, mackey_glass_series,
                           mimo_step, nonlinear_plant_step, rectangular_signal, tapped_delay)

inputs = arrays(float, st.integers(2, 30), elements=st.floats(-3, 3))


def heun_reference(length, h=1e-3, n=0.2, m=0.1, tau=20, r0=1.2):
    """Second-order delay integration on a grid that contains every delayed point."""
    per, lag = int(round(1 / h)), int(round(tau / h))
    r = [0.0] * (length * per + 1)
    r[0] = r0

    def f(x, xd):
        return n * xd / (1 + xd**10) - m * x

    for k in range(length * per):
        j = k - lag
        # history is zero strictly before t = 0, so the step ending at tau still sees 0
        d0 = r[j] if j >= 0 else 0.0
        d1 = r[j + 1] if j >= 0 else 0.0
        k1 = f(r[k], d0)
        k2 = f(r[k] + h * k1, d1)
        r[k + 1] = r[k] + 0.5 * h * (k1 + k2)
    return np.array(r[per::per])


class TestNonlinearPlant:
    def test_zero_input(self):
        assert nonlinear_plant_step(NonlinearPlant(), 0.0) == pytest.approx(-1.4)

    def test_default_coefficients(self):
        assert NonlinearPlant().a == (2.0, -0.5, -0.1, -0.7, 3.0)

    @given(inputs)
    def test_linear_without_nonlinearity(self, r):
        y = NonlinearPlant((1.7, 0.0, 0.0, 0.0, 3.0)).simulate(r)
        np.testing.assert_allclose(y, 1.7 * r)

    @given(inputs, st.integers(0, 29))
    def test_causal(self, r, k):
        k = min(k, len(r) - 1)
        changed = r.copy()
        changed[k:] += 1.0
        a, b = NonlinearPlant().simulate(r), NonlinearPlant().simulate(changed)
        np.testing.assert_array_equal(a[:k], b[:k])

    def test_noise_passes_through(self):
        assert nonlinear_plant_step(NonlinearPlant(), 0.0, 0.25) == pytest.approx(-1.15)


class TestHammerstein:
    def test_defaults(self):
        p = HammersteinPlant()
        assert p.m == (31.549, 41.732, 24.201, 68.634)
        assert p.n == (0.4, 0.35, 0.15)
        assert p.h == 0.1

    def test_zero(self):
        assert hammerstein_step(HammersteinPlant(), 0.0) == 0.0

    def test_unit_input(self):
        assert hammerstein_step(HammersteinPlant(), 1.0) == pytest.approx(0.15 * 54.616)

    def test_deterministic_given_disturbance(self, rng):
        r, h = rng.normal(size=50), 0.1 * rng.normal(size=50)
        np.testing.assert_array_equal(HammersteinPlant().simulate(r, h), HammersteinPlant().simulate(r, h))


class TestMimo:
    def test_defaults(self):
        p = MimoPlant()
        assert p.m == (0.21, -0.12, 0.3, -0.6, 0.5)
        assert p.n == (0.25, -0.1, -0.2, 1.2, 0.2)

    def test_zero(self):
        c1, c2 = mimo_step(MimoPlant(), 0.0, 0.0)
        assert c1 == pytest.approx(0.4)
        assert c2 == 0.0

    @given(inputs, inputs)
    def test_second_output_linear_without_sine(self, r1, r2):
        k = min(len(r1), len(r2))
        out = MimoPlant(n=(0.25, -0.1, -0.2, 0.0, 0.2)).simulate(r1[:k], r2[:k])
        hist = np.r_[0.0, 0.0, r2[:k]]
        expect = 0.25 * hist[2:] + 0.1 * hist[1:-1] - 0.2 * hist[:-2]
        np.testing.assert_allclose(out[:, 1], expect, atol=1e-12)


class TestMackeyGlass:
    def test_zero_series(self):
        s = mackey_glass_series(MackeyGlassSeries(n_coef=0.0, r0=0.0, length=100))
        np.testing.assert_array_equal(s, np.zeros(100))

    def test_defaults(self):
        cfg = MackeyGlassSeries()
        assert (cfg.n_coef, cfg.m_coef, cfg.tau, cfg.length) == (0.2, 0.1, 20, 3000)

    def test_bounded_and_aperiodic(self):
        s = mackey_glass_series()
        assert s.shape == (3000,)
        assert np.all((s[200:] > 0) & (s[200:] < 1.6))
        tail = s[500:]
        for lag in range(1, 1000):
            assert np.max(np.abs(tail[lag:] - tail[:-lag])) > 1e-3

    def test_agrees_with_fine_reference(self):
        # sensitivity to initial conditions limits exact agreement to a finite horizon
        s = mackey_glass_series(MackeyGlassSeries(length=1000))
        assert np.max(np.abs(s - heun_reference(1000))) < 1e-3

    def test_rejects_bad_config(self):
        with pytest.raises(ValueError):
            MackeyGlassSeries(tau=-1)
        with pytest.raises(ValueError):
            MackeyGlassSeries(step=0.3)


class TestSignals:
    def test_rectangular(self):
        s = rectangular_signal(250, 2)
        assert s.size == 1000
        assert np.all(s[:250] == 1.0)
        np.testing.assert_array_equal(rectangular_signal(1, 1), [1.0, -1.0])

    def test_faster_test_signal(self):
        s = rectangular_signal(100, 5)
        assert s.size == 1000
        assert np.all(s[100:200] == -1.0)

    def test_infinite_snr(self, rng):
        s = np.sin(np.arange(10.0))
        np.testing.assert_array_equal(add_awgn(s, np.inf, rng), s)

    def test_zero_db(self, rng):
        noise = awgn(np.ones(100_000), 0.0, rng)
        assert np.var(noise) == pytest.approx(1.0, rel=0.02)

    def test_twenty_db(self, rng):
        noise = awgn(np.ones(100_000), 20.0, rng)
        assert np.var(noise) == pytest.approx(0.01, rel=0.02)

    def test_zero_power(self, rng):
        with pytest.raises(ValueError):
            awgn(np.zeros(5), 10.0, rng)

    @given(st.floats(-10, 40), st.integers(0, 1000))
    def test_snr_recovered(self, snr, seed):
        clean = rectangular_signal(250, 4)
        noisy = add_awgn(clean, snr, np.random.default_rng(seed))
        assert abs(empirical_snr_db(clean, noisy) - snr) < 0.5

    def test_tapped_delay(self):
        X = tapped_delay([1.0, 2.0, 3.0], 3)
        np.testing.assert_array_equal(X, [[1, 0, 0], [2, 1, 0], [3, 2, 1]])
        np.testing.assert_array_equal(tapped_delay([1.0, 2.0, 3.0], 2, delay=1), [[0, 0], [1, 0], [2, 1]])


class TestKMeans:
    def test_single_center_is_mean(self, rng):
        x = rng.normal(size=(40, 2))
        np.testing.assert_allclose(kmeans_centers(x, 1), x.mean(axis=0, keepdims=True))

    def test_two_clusters(self, rng):
        labels = rng.integers(0, 2, 100)
        x = (np.array([0.25, 0.75])[labels] + 0.1 * rng.standard_normal(100))[:, None]
        np.testing.assert_allclose(kmeans_centers(x, 2, seed=1)[:, 0], [0.25, 0.75], atol=0.05)

    def test_exactly_k_points(self, rng):
        x = rng.normal(size=(4, 3))
        c = kmeans_centers(x, 4)
        assert sorted(map(tuple, c)) == sorted(map(tuple, x))

    def test_too_many_clusters(self):
        with pytest.raises(ValueError):
            kmeans(np.ones((5, 1)), 2)

    @given(st.integers(0, 2**32 - 1), st.integers(1, 5))
    def test_lloyd_properties(self, seed, k):
        x = np.random.default_rng(seed).normal(size=(30, 2))
        res = kmeans(x, k, seed=seed)
        assert np.all(np.diff(res.inertia_history) <= 1e-9)
        for j in range(k):
            np.testing.assert_allclose(res.centers[j], x[res.labels == j].mean(axis=0))
