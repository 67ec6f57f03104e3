import numpy as np
import pytest

from gfkmimo.channel import ChannelTrace, FadingConfig, generate_trace
from gfkmimo.dataset import LabeledSet, default_mog, sample_symbols
from gfkmimo.detector import (
    gfk_gsvm_classify,
    gfk_gsvm_fit,
    ml_detect,
    mmse_detect,
    ser,
    training_overhead,
    zf_detect,
)
from gfkmimo.gsvm import SolverConfig
from gfkmimo.signal_model import SymbolAlphabet, reshape_symbol, transmit


def make_alphabet(Z=4, L=8, seed=0):
    rng = np.random.default_rng(seed)
    protos = (rng.standard_normal((Z, L)) + 1j * rng.standard_normal((Z, L))) / np.sqrt(2)
    return SymbolAlphabet(Z=Z, L=L, prototypes=protos)


def static_trace(H, slots):
    return ChannelTrace(N=H.shape[0], M=H.shape[1], H=np.broadcast_to(H, (slots,) + H.shape).copy())


def noiseless_frame(alphabet, z, trace, P=1.0):
    frame = reshape_symbol(alphabet.prototypes[z - 1], 2)
    return transmit(frame, trace, P, 0.0, np.random.default_rng(0))


class TestGfkGsvm:
    def _toy_sets(self, seed=0):
        mog = default_mog(Z=3, L=8, seed=seed)
        rng = np.random.default_rng(seed + 1)
        train_sym, train_lab = sample_symbols(mog, 90, rng)
        test_sym, test_lab = sample_symbols(mog, 60, rng)
        # a fixed linear mixing plays the channel role for these unit tests
        mix = rng.standard_normal((8, 16)) + 1j * rng.standard_normal((8, 16))
        train = LabeledSet(rows=train_sym @ mix, labels=train_lab)
        test_rows = test_sym @ (mix + 0.05 * rng.standard_normal(mix.shape))
        return train, test_rows, test_lab

    def test_fit_shapes(self):
        train, test_rows, _ = self._toy_sets()
        model = gfk_gsvm_fit(train, test_rows, d=4, config=SolverConfig(C=10.0))
        assert model.F.F.shape == (16, 16)
        assert model.svm.Z == 3
        assert model.d == 4

    def test_classify_matches_training_separation(self):
        train, test_rows, test_lab = self._toy_sets()
        model = gfk_gsvm_fit(train, test_rows, d=4, config=SolverConfig(C=10.0))
        preds = gfk_gsvm_classify(model, test_rows)
        assert ser(preds, test_lab) <= 0.05

    def test_classify_deterministic_and_stateless(self):
        train, test_rows, _ = self._toy_sets(seed=2)
        model = gfk_gsvm_fit(train, test_rows, d=3, config=SolverConfig(C=5.0))
        a = gfk_gsvm_classify(model, test_rows)
        b = gfk_gsvm_classify(model, test_rows[::-1])[::-1]
        c = gfk_gsvm_classify(model, test_rows)
        np.testing.assert_array_equal(a, b)
        np.testing.assert_array_equal(a, c)

    def test_row_power_invariance(self):
        # doubling every row (train and test) must not change any prediction:
        # the Gram normalization keeps the box constraint meaningful across
        # transmit-power scales
        train, test_rows, _ = self._toy_sets(seed=6)
        base = gfk_gsvm_fit(train, test_rows, d=3, config=SolverConfig(C=10.0))
        scaled_train = LabeledSet(rows=2.0 * train.rows, labels=train.labels)
        scaled = gfk_gsvm_fit(scaled_train, 2.0 * test_rows, d=3, config=SolverConfig(C=10.0))
        np.testing.assert_array_equal(
            gfk_gsvm_classify(base, test_rows),
            gfk_gsvm_classify(scaled, 2.0 * test_rows),
        )

    def test_classify_empty(self):
        train, test_rows, _ = self._toy_sets(seed=3)
        model = gfk_gsvm_fit(train, test_rows, d=2, config=SolverConfig())
        out = gfk_gsvm_classify(model, np.zeros((0, 16)))
        assert out.shape == (0,)

    def test_dimension_mismatch(self):
        train, test_rows, _ = self._toy_sets(seed=4)
        model = gfk_gsvm_fit(train, test_rows, d=2, config=SolverConfig())
        with pytest.raises(ValueError):
            gfk_gsvm_classify(model, test_rows[:, :10])

    def test_empty_training_rejected(self):
        train, test_rows, _ = self._toy_sets(seed=5)
        with pytest.raises(ValueError):
            gfk_gsvm_fit(train, np.zeros((0, 16)), d=2, config=SolverConfig())


class TestBaselinesNoiseless:
    def setup_method(self):
        self.alphabet = make_alphabet()
        rng = np.random.default_rng(7)
        H = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
        self.trace = static_trace(H, 4)
        self.H = H

    @pytest.mark.parametrize("z", [1, 2, 3, 4])
    def test_all_methods_exact_with_true_csi(self, z):
        Y = noiseless_frame(self.alphabet, z, self.trace, P=2.0)
        assert mmse_detect(Y, self.H, 2.0, 0.0, self.alphabet) == z
        assert zf_detect(Y, self.H, 2.0, self.alphabet) == z
        assert ml_detect(Y, self.trace, 2.0, self.alphabet) == z

    def test_zf_equals_mmse_at_zero_noise(self):
        for z in range(1, 5):
            Y = noiseless_frame(self.alphabet, z, self.trace)
            assert zf_detect(Y, self.H, 1.0, self.alphabet) == mmse_detect(
                Y, self.H, 1.0, 0.0, self.alphabet
            )

    def test_pinv_is_left_inverse_for_tall_channel(self):
        pinv = np.linalg.pinv(self.H)
        np.testing.assert_allclose(pinv @ self.H, np.eye(2), atol=1e-12)

    def test_per_slot_csi_variant(self):
        rng = np.random.default_rng(8)
        H_stack = rng.standard_normal((4, 3, 2)) + 1j * rng.standard_normal((4, 3, 2))
        trace = ChannelTrace(N=3, M=2, H=H_stack)
        Y = noiseless_frame(self.alphabet, 2, trace)
        assert mmse_detect(Y, H_stack, 1.0, 0.0, self.alphabet) == 2
        assert zf_detect(Y, H_stack, 1.0, self.alphabet) == 2

    def test_csi_shape_mismatch(self):
        Y = noiseless_frame(self.alphabet, 1, self.trace)
        with pytest.raises(ValueError):
            mmse_detect(Y, self.H.T, 1.0, 0.0, self.alphabet)
        with pytest.raises(ValueError):
            zf_detect(Y, self.H.T, 1.0, self.alphabet)


class TestStaleCsi:
    def test_stale_csi_worse_than_perfect_under_fast_fading(self):
        alphabet = make_alphabet(Z=6, L=8, seed=1)
        trace = generate_trace(3, 2, FadingConfig(fd_ts=0.05, seed=0), 400)
        rng = np.random.default_rng(2)
        stale_errs = perfect_errs = 0
        n = 80
        for k in range(n):
            z = int(rng.integers(1, 7))
            offset = 4 * k
            window = ChannelTrace(N=3, M=2, H=trace.H[offset : offset + 4])
            frame = reshape_symbol(alphabet.prototypes[z - 1], 2)
            Y = transmit(frame, window, 10.0, 1.0, rng)
            stale_errs += mmse_detect(Y, trace.H[0], 10.0, 1.0, alphabet) != z
            perfect_errs += mmse_detect(Y, window.H, 10.0, 1.0, alphabet) != z
        assert stale_errs > perfect_errs

    def test_ml_no_worse_than_mmse_with_perfect_csi(self):
        alphabet = make_alphabet(Z=6, L=8, seed=4)
        rng = np.random.default_rng(5)
        ml_errs = mmse_errs = 0
        for k in range(60):
            trace = generate_trace(3, 2, FadingConfig(fd_ts=0.02, seed=100 + k), 4)
            z = int(rng.integers(1, 7))
            frame = reshape_symbol(alphabet.prototypes[z - 1], 2)
            Y = transmit(frame, trace, 2.0, 1.0, rng)
            ml_errs += ml_detect(Y, trace, 2.0, alphabet) != z
            mmse_errs += mmse_detect(Y, trace.H, 2.0, 1.0, alphabet) != z
        assert ml_errs <= mmse_errs


class TestSer:
    def test_exact_fraction(self):
        assert ser([1, 2, 3, 4], [1, 2, 4, 4]) == 0.25

    def test_perfect(self):
        assert ser([5, 5], [5, 5]) == 0.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ser([], [])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            ser([1, 2], [1])


class TestTrainingOverhead:
    def test_one_to_seven_split(self):
        assert training_overhead(1.0, 7.0) == 0.125

    def test_zero_training(self):
        assert training_overhead(0.0, 3.0) == 0.0

    def test_bad_frame_duration(self):
        with pytest.raises(ValueError):
            training_overhead(1.0, 0.0)

    def test_negative_training_time(self):
        with pytest.raises(ValueError):
            training_overhead(-0.5, 1.0)
