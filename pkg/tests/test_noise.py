import math

import numpy as np
import pytest

from homsense import hom, noise, singlephoton as sp
from homsense.optics import OpticalParams

P = OpticalParams()
S = P.tilt_width
LAM = P.wavelength
COUNTING = noise.CountingConfig()


class TestKeyedRng:
    def test_reproducible(self):
        a = noise.keyed_rng(7, 1, 3).poisson(100.0)
        b = noise.keyed_rng(7, 1, 3).poisson(100.0)
        assert a == b

    def test_streams_differ(self):
        draws = {noise.keyed_rng(7, s, i).integers(0, 2 ** 62)
                 for s in range(4) for i in range(4)}
        assert len(draws) == 16

    def test_key_bounds(self):
        with pytest.raises(ValueError):
            noise.keyed_rng(0, 1 << 16)
        with pytest.raises(ValueError):
            noise.keyed_rng(0, 0, 1 << 48)


class TestOplProcesses:
    def test_constant(self):
        t = np.arange(10.0)
        assert np.all(noise.sample_opl_path(noise.ConstantOpl(0.0), t, 1)
                      == 0.0)

    def test_sinusoidal_quarter_period(self):
        proc = noise.SinusoidalOpl(amplitude=2.5e-7, period=100.0)
        path = noise.sample_opl_path(proc, [25.0], 0)
        assert path[0] == pytest.approx(2.5e-7, rel=1e-12)

    def test_random_walk_increment_statistics(self):
        sigma = 1e-8
        t = np.arange(100_000, dtype=float)
        path = noise.sample_opl_path(noise.RandomWalkOpl(step_sigma=sigma),
                                     t, seed=99)
        increments = np.diff(path)
        assert np.var(increments) == pytest.approx(sigma ** 2, rel=0.05)

    def test_random_walk_reflecting_bound(self):
        proc = noise.RandomWalkOpl(step_sigma=1e-7, bound=4.05e-7)
        path = noise.sample_opl_path(proc, np.arange(50_000, dtype=float),
                                     seed=5)
        assert np.max(np.abs(path)) <= 4.05e-7

    def test_gaussian_jitter_statistics(self):
        proc = noise.GaussianJitterOpl(sigma=3e-9)
        path = noise.sample_opl_path(proc, np.arange(200_000, dtype=float),
                                     seed=2)
        assert np.std(path) == pytest.approx(3e-9, rel=0.02)
        assert abs(np.mean(path)) < 5 * 3e-9 / math.sqrt(path.size)

    def test_piecewise_drift(self):
        proc = noise.PiecewiseDriftOpl(times=(0.0, 10.0), values=(0.0, 1e-6))
        path = noise.sample_opl_path(proc, [0.0, 5.0, 10.0], 0)
        np.testing.assert_allclose(path, [0.0, 5e-7, 1e-6], rtol=1e-12)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            noise.GaussianJitterOpl(sigma=-1.0)
        with pytest.raises(ValueError):
            noise.SinusoidalOpl(amplitude=1e-7, period=0.0)
        with pytest.raises(ValueError):
            noise.RandomWalkOpl(step_sigma=1e-8, bound=-1.0)
        with pytest.raises(ValueError):
            noise.PiecewiseDriftOpl(times=(0.0, 0.0), values=(1.0, 2.0))

    def test_t_grid_validation(self):
        with pytest.raises(ValueError):
            noise.sample_opl_path(noise.ConstantOpl(), [1.0, 1.0], 0)
        with pytest.raises(ValueError):
            noise.sample_opl_path(noise.ConstantOpl(), [], 0)

    def test_deterministic_per_seed(self):
        proc = noise.RandomWalkOpl(step_sigma=1e-8)
        t = np.arange(1000, dtype=float)
        assert np.array_equal(noise.sample_opl_path(proc, t, 3),
                              noise.sample_opl_path(proc, t, 3))
        assert not np.array_equal(noise.sample_opl_path(proc, t, 3),
                                  noise.sample_opl_path(proc, t, 4))


class TestPoissonCounts:
    def test_zero_mean(self):
        rng = noise.keyed_rng(0, 9)
        assert all(noise.poisson_counts(0.0, rng) == 0 for _ in range(100))

    def test_statistics_at_200(self):
        rng = noise.keyed_rng(1, 9)
        draws = np.array([noise.poisson_counts(200.0, rng)
                          for _ in range(100_000)])
        assert draws.mean() == pytest.approx(200.0, rel=0.01)
        assert draws.var() == pytest.approx(200.0, rel=0.03)
        # per-bin relative shot noise at this depth is about 7 percent
        assert draws.std() / draws.mean() == \
            pytest.approx(1 / math.sqrt(200), rel=0.05)

    def test_negative_mean_rejected(self):
        with pytest.raises(ValueError):
            noise.poisson_counts(-1.0, noise.keyed_rng(0, 9))


class TestHomSeries:
    def test_shapes_and_bins(self):
        series = noise.simulate_hom_series(S, noise.ConstantOpl(), COUNTING,
                                           P, duration=28_800, seed=1)
        assert series.t.size == 3600
        assert series.kind == "hom"
        assert np.all(series.c_same >= 0)

    def test_model_delta_p_constant(self):
        series = noise.simulate_hom_series(S, noise.ConstantOpl(), COUNTING,
                                           P, duration=800, seed=1)
        paths = hom.PathConfig.from_params(P)
        expected = float(hom.delta_p(S, paths, P))
        np.testing.assert_allclose(series.delta_p_model, expected, rtol=1e-12)

    def test_expected_counts_match_rates(self):
        # averaged over many replicate bins, counts track rate * P
        series = noise.simulate_hom_series(S, noise.ConstantOpl(), COUNTING,
                                           P, duration=8 * 12_000, seed=7)
        mu = series.mu_plus[0]
        n = series.t.size
        tol = 3 * math.sqrt(mu / n)
        assert series.c_plus.mean() == pytest.approx(mu, abs=tol)

    def test_bounded_walk_keeps_model_flat(self):
        proc = noise.RandomWalkOpl(step_sigma=5e-8, bound=LAM / 2)
        series = noise.simulate_hom_series(S, proc, COUNTING, P,
                                           duration=28_800, seed=3)
        assert np.std(series.delta_p_model) < 1e-6

    def test_determinism(self):
        kwargs = dict(theta_0=S, process=noise.GaussianJitterOpl(1e-8),
                      counting=COUNTING, params=P, duration=1600, seed=11)
        a = noise.simulate_hom_series(**kwargs)
        b = noise.simulate_hom_series(**kwargs)
        assert np.array_equal(a.c_plus, b.c_plus)
        assert np.array_equal(a.c_minus, b.c_minus)
        assert np.array_equal(a.delta_z, b.delta_z)

    def test_seed_changes_counts(self):
        a = noise.simulate_hom_series(S, noise.ConstantOpl(), COUNTING, P,
                                      duration=1600, seed=1)
        b = noise.simulate_hom_series(S, noise.ConstantOpl(), COUNTING, P,
                                      duration=1600, seed=2)
        assert not np.array_equal(a.c_plus, b.c_plus)


class TestSagnacSeries:
    def _model(self, visibility=1.0):
        return sp.SagnacModel.from_params(P, visibility=visibility)

    def test_constant_process_shot_noise_scale(self):
        series = noise.simulate_sagnac_series(S, noise.ConstantOpl(),
                                              COUNTING, self._model(),
                                              duration=28_800, seed=4)
        # relative noise ~ 1/sqrt(80000 * 8) = 1.25e-3
        assert np.std(series.delta_p) == \
            pytest.approx(1 / math.sqrt(640_000), rel=0.10)

    def test_slow_sinusoid_swings_order_one(self):
        proc = noise.SinusoidalOpl(amplitude=LAM / 4, period=7200.0)
        series = noise.simulate_sagnac_series(S, proc, COUNTING,
                                              self._model(),
                                              duration=28_800, seed=4)
        swing = series.delta_p.max() - series.delta_p.min()
        assert swing > 0.5

    def test_shared_opl_realization(self):
        proc = noise.SinusoidalOpl(amplitude=LAM / 4, period=7200.0)
        hom_series = noise.simulate_hom_series(S, proc, COUNTING, P,
                                               duration=8000, seed=21)
        sag_series = noise.simulate_sagnac_series(S, proc, COUNTING,
                                                  self._model(),
                                                  duration=8000, seed=21)
        assert np.array_equal(hom_series.delta_z, sag_series.delta_z)
        proc_rw = noise.RandomWalkOpl(step_sigma=1e-8)
        hom_rw = noise.simulate_hom_series(S, proc_rw, COUNTING, P,
                                           duration=8000, seed=21)
        sag_rw = noise.simulate_sagnac_series(S, proc_rw, COUNTING,
                                              self._model(),
                                              duration=8000, seed=21)
        assert np.array_equal(hom_rw.delta_z, sag_rw.delta_z)


class TestEfficiencyModel:
    def test_detected_vs_generated_ratios(self):
        eta = 0.25
        counting = noise.CountingConfig(efficiency=eta)
        hom_series = noise.simulate_hom_series(S, noise.ConstantOpl(),
                                               counting, P, duration=800,
                                               seed=1)
        sag_series = noise.simulate_sagnac_series(
            S, noise.ConstantOpl(), counting,
            sp.SagnacModel.from_params(P), duration=800, seed=1)
        # pairs survive as eta^2, singles as eta
        assert hom_series.generated_rate * eta ** 2 == \
            pytest.approx(counting.pair_rate, rel=1e-12)
        assert sag_series.generated_rate * eta == \
            pytest.approx(counting.single_rate, rel=1e-12)
        # for an equal generated-photon budget the single-photon record
        # keeps 1/eta more events than the coincidence record
        hom_kept = counting.pair_rate / hom_series.generated_rate
        sag_kept = counting.single_rate / sag_series.generated_rate
        assert sag_kept / hom_kept == pytest.approx(1 / eta, rel=1e-12)

    def test_detected_means_independent_of_eta(self):
        lossy = noise.CountingConfig(efficiency=0.5)
        ideal = noise.CountingConfig(efficiency=1.0)
        a = noise.simulate_hom_series(S, noise.ConstantOpl(), lossy, P,
                                      duration=8 * 6000, seed=5)
        b = noise.simulate_hom_series(S, noise.ConstantOpl(), ideal, P,
                                      duration=8 * 6000, seed=6)
        tol = 3 * math.sqrt(a.mu_plus[0] / a.t.size) * 1.5
        assert abs(a.c_plus.mean() - b.c_plus.mean()) < 2 * tol

    def test_efficiency_validation(self):
        with pytest.raises(ValueError):
            noise.CountingConfig(efficiency=0.0)
        with pytest.raises(ValueError):
            noise.CountingConfig(efficiency=1.5)
        with pytest.raises(ValueError):
            noise.CountingConfig(pair_rate=-1.0)


class TestCountSeriesValidation:
    def test_rejects_bad_counts(self):
        t = np.array([1.0, 2.0])
        zeros = np.zeros(2)
        with pytest.raises(ValueError):
            noise.CountSeries(kind="hom", t=t, delta_z=zeros,
                              c_plus=np.array([-1, 0]),
                              c_minus=np.array([0, 0]), mu_plus=zeros,
                              mu_minus=zeros, norm=1.0, generated_rate=1.0)
        with pytest.raises(ValueError):
            noise.CountSeries(kind="hom", t=np.array([2.0, 1.0]),
                              delta_z=zeros, c_plus=np.array([0, 0]),
                              c_minus=np.array([0, 0]), mu_plus=zeros,
                              mu_minus=zeros, norm=1.0, generated_rate=1.0)

    def test_aliases(self):
        series = noise.simulate_hom_series(S, noise.ConstantOpl(), COUNTING,
                                           P, duration=80, seed=1)
        assert np.array_equal(series.c_same, series.c_plus)
        assert np.array_equal(series.n_minus, series.c_minus)
