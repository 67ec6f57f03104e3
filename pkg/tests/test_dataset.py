import numpy as np
import pytest

from gfkmimo.dataset import (
    DomainConfig,
    LabeledSet,
    build_domain_dataset,
    default_mog,
    load_labeled_set,
    sample_symbols,
    save_labeled_set,
    segment_trace,
)


class TestMoG:
    def test_default_shapes(self):
        mog = default_mog(Z=12, L=48, seed=0)
        assert mog.means.shape == (12, 48)
        assert mog.component_std > 0
        np.testing.assert_allclose(mog.weights.sum(), 1.0)

    def test_zero_std_samples_equal_means(self):
        mog = default_mog(Z=4, L=6, seed=1)
        frozen = type(mog)(
            Z=4, L=6, means=mog.means, component_std=0.0, weights=mog.weights
        )
        symbols, labels = sample_symbols(frozen, 50, np.random.default_rng(2))
        np.testing.assert_array_equal(symbols, frozen.means[labels - 1])

    def test_full_scale(self):
        mog = default_mog()
        symbols, labels = sample_symbols(mog, 1200, np.random.default_rng(0))
        assert symbols.shape == (1200, 48)
        assert labels.shape == (1200,)
        assert labels.min() >= 1 and labels.max() <= 12

    def test_class_frequencies_match_weights(self):
        mog = default_mog(Z=5, L=4, seed=3)
        _, labels = sample_symbols(mog, 100_000, np.random.default_rng(4))
        freqs = np.bincount(labels - 1, minlength=5) / labels.size
        np.testing.assert_allclose(freqs, mog.weights, atol=0.01)


class TestBuildDomainDataset:
    def test_full_scale_row_length(self):
        mog = default_mog()
        symbols, labels = sample_symbols(mog, 20, np.random.default_rng(0))
        domain = DomainConfig(snr_db=15.0, fd_ts=0.01, segment="train", seed=0)
        ds = build_domain_dataset(symbols, labels, domain, dims=(2, 4))
        assert ds.rows.shape == (20, 96)

    def test_clean_channel_nearest_mean_accuracy(self):
        # noiseless static identity channel keeps classes exactly separable
        mog = default_mog(Z=4, L=8, seed=5)
        frozen = type(mog)(Z=4, L=8, means=mog.means, component_std=0.0, weights=mog.weights)
        symbols, labels = sample_symbols(frozen, 80, np.random.default_rng(6))
        domain = DomainConfig(snr_db=np.inf, fd_ts=0.0, segment="train", seed=0)
        ds = build_domain_dataset(symbols, labels, domain, dims=(2, 2))
        trace = segment_trace(domain, (2, 2), 4)
        ref = build_domain_dataset(frozen.means, np.arange(1, 5), domain, dims=(2, 2))
        dists = np.linalg.norm(ds.rows[:, None, :] - ref.rows[None, :, :], axis=2)
        preds = np.argmin(dists, axis=1) + 1
        assert np.all(preds == labels)
        assert trace.H.shape == (4, 2, 2)

    def test_segments_differ(self):
        mog = default_mog(Z=3, L=8, seed=1)
        symbols, labels = sample_symbols(mog, 10, np.random.default_rng(0))
        base = DomainConfig(snr_db=20.0, fd_ts=0.01, segment="train", seed=7)
        other = DomainConfig(snr_db=20.0, fd_ts=0.01, segment="test", seed=7)
        a = build_domain_dataset(symbols, labels, base, (2, 2))
        b = build_domain_dataset(symbols, labels, other, (2, 2))
        assert not np.allclose(a.rows, b.rows)

    @pytest.mark.parametrize("mode", ["shared", "per_frame"])
    def test_deterministic(self, mode):
        mog = default_mog(Z=3, L=8, seed=1)
        symbols, labels = sample_symbols(mog, 8, np.random.default_rng(0))
        domain = DomainConfig(snr_db=10.0, fd_ts=0.005, segment="test", seed=3, trace_mode=mode)
        a = build_domain_dataset(symbols, labels, domain, (2, 2))
        b = build_domain_dataset(symbols, labels, domain, (2, 2))
        np.testing.assert_array_equal(a.rows, b.rows)

    def test_per_frame_traces_differ_across_frames(self):
        mog = default_mog(Z=2, L=8, seed=1)
        # identical symbols, noiseless: differing rows must come from the channel
        symbols = np.tile(mog.means[0], (2, 1))
        labels = np.array([1, 1])
        domain = DomainConfig(
            snr_db=np.inf, fd_ts=0.01, segment="train", seed=3, trace_mode="per_frame"
        )
        ds = build_domain_dataset(symbols, labels, domain, (2, 2))
        assert not np.allclose(ds.rows[0], ds.rows[1])


class TestCsvRoundTrip:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        rows = rng.standard_normal((5, 6)) + 1j * rng.standard_normal((5, 6))
        ds = LabeledSet(rows=rows, labels=np.array([1, 2, 3, 1, 2]))
        path = tmp_path / "set.csv"
        save_labeled_set(ds, path)
        back = load_labeled_set(path)
        np.testing.assert_array_equal(back.labels, ds.labels)
        np.testing.assert_allclose(back.rows, ds.rows, rtol=0, atol=0)
