"""End-to-end GFK G-SVM detector and the classical baselines (MMSE, ZF, ML).

The learned detector is transductive: the unlabeled test batch supplies the
test-domain subspace, the kernel is built once from the geodesic between the
two domain subspaces, and classification never mutates the model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gfkmimo.channel import ChannelTrace
from gfkmimo.dataset import LabeledSet
from gfkmimo.gfk import GfkMatrix, build_kernel, gram_matrix
from gfkmimo.grassmann import geodesic, pca_subspace
from gfkmimo.gsvm import MulticlassModel, SolverConfig, decision_matrix, train_multiclass
from gfkmimo.signal_model import ReceivedFrame, SymbolAlphabet, reshape_symbol

__all__ = [
    "DetectorModel",
    "DetectionReport",
    "gfk_gsvm_fit",
    "gfk_gsvm_classify",
    "mmse_detect",
    "zf_detect",
    "ml_detect",
    "ser",
    "training_overhead",
]


@dataclass(frozen=True)
class DetectorModel:
    """Frozen training artifacts: kernel, training set reference and SVM."""

    F: GfkMatrix
    train: LabeledSet
    svm: MulticlassModel
    d: int
    kernel_scale: float = 1.0

    def __post_init__(self):
        if self.F.ambient != self.train.ambient:
            raise ValueError("kernel dimension does not match training rows")
        if self.kernel_scale <= 0:
            raise ValueError("kernel scale must be positive")


@dataclass(frozen=True)
class DetectionReport:
    """Predictions plus the error rate and timing of one detection run."""

    predictions: np.ndarray
    ser: float
    n_test: int
    wallclock: float


def gfk_gsvm_fit(
    train: LabeledSet,
    test_rows: np.ndarray,
    d: int,
    config: SolverConfig,
) -> DetectorModel:
    """Fit the detector: domain subspaces, geodesic kernel, one-vs-rest SVM.

    The kernel is computed exactly once; test_rows enter only through the
    test-domain PCA subspace (their labels are never used).
    """
    test_rows = np.asarray(test_rows, dtype=complex)
    if train.n == 0 or test_rows.shape[0] == 0:
        raise ValueError("both training and test rows are required")
    if test_rows.shape[1] != train.ambient:
        raise ValueError("training and test row lengths differ")
    S_r = pca_subspace(train.rows, d)
    S_s = pca_subspace(test_rows, d)
    F = build_kernel(geodesic(S_r, S_s))
    K = gram_matrix(F, train.rows, train.rows)
    K = 0.5 * (K + K.T)
    # normalize to unit mean self-similarity so the box constraint C keeps
    # the same meaning regardless of the transmit power scaling the rows
    scale = float(np.mean(np.diag(K)))
    if scale <= 0:
        scale = 1.0
    Z = int(train.labels.max())
    svm = train_multiclass(K / scale, train.labels, Z, config)
    return DetectorModel(F=F, train=train, svm=svm, d=d, kernel_scale=scale)


def gfk_gsvm_classify(model: DetectorModel, test_rows: np.ndarray) -> np.ndarray:
    """Classify rows with the frozen model (no online training)."""
    test_rows = np.asarray(test_rows, dtype=complex)
    if test_rows.size == 0:
        return np.zeros(0, dtype=int)
    if test_rows.ndim != 2 or test_rows.shape[1] != model.train.ambient:
        raise ValueError(
            f"test rows of length {test_rows.shape[-1]} do not match model dimension "
            f"{model.train.ambient}"
        )
    k_rows = gram_matrix(model.F, test_rows, model.train.rows) / model.kernel_scale
    decisions = decision_matrix(model.svm, k_rows)
    return np.argmax(decisions, axis=1) + 1


def _equalize_classify(
    Y: ReceivedFrame,
    equalizers: np.ndarray,
    P: float,
    alphabet: SymbolAlphabet,
) -> int:
    """Apply per-slot equalizer matrices, reassemble the symbol, nearest class."""
    X_hat = np.einsum("tmn,nt->mt", equalizers, Y.Y) / math.sqrt(P)
    s_hat = X_hat.reshape(-1)[: alphabet.L]
    dists = np.linalg.norm(alphabet.prototypes - s_hat[None, :], axis=1)
    return int(np.argmin(dists)) + 1


def _mmse_equalizer(H: np.ndarray, P: float, noise_var: float) -> np.ndarray:
    M = H.shape[1]
    if noise_var == 0:
        return np.linalg.pinv(H)
    A = H.conj().T @ H + (noise_var / P) * np.eye(M)
    return np.linalg.solve(A, H.conj().T)


def mmse_detect(
    Y: ReceivedFrame,
    H_est: np.ndarray,
    P: float,
    noise_var: float,
    alphabet: SymbolAlphabet,
) -> int:
    """Regularized-inverse detection with a single (possibly stale) CSI matrix.

    H_est may also be a per-slot stack of shape (T, N, M) for the perfect-CSI
    variant. noise_var = 0 falls back to the pseudo-inverse (ZF).
    """
    H_est = np.asarray(H_est, dtype=complex)
    per_slot = H_est.ndim == 3
    if (per_slot and H_est.shape[1] != Y.N) or (not per_slot and H_est.shape[0] != Y.N):
        raise ValueError("CSI shape does not match the received frame")
    if per_slot:
        eq = np.stack([_mmse_equalizer(H_est[t], P, noise_var) for t in range(Y.T)])
    else:
        eq = np.broadcast_to(_mmse_equalizer(H_est, P, noise_var), (Y.T,) + (H_est.shape[1], H_est.shape[0]))
    return _equalize_classify(Y, eq, P, alphabet)


def zf_detect(
    Y: ReceivedFrame,
    H_est: np.ndarray,
    P: float,
    alphabet: SymbolAlphabet,
) -> int:
    """Pseudo-inverse (zero-forcing) detection; rank deficiency is absorbed
    by the SVD-based pseudo-inverse."""
    H_est = np.asarray(H_est, dtype=complex)
    per_slot = H_est.ndim == 3
    if (per_slot and H_est.shape[1] != Y.N) or (not per_slot and H_est.shape[0] != Y.N):
        raise ValueError("CSI shape does not match the received frame")
    if per_slot:
        eq = np.stack([np.linalg.pinv(H_est[t]) for t in range(Y.T)])
    else:
        eq = np.broadcast_to(np.linalg.pinv(H_est), (Y.T,) + (H_est.shape[1], H_est.shape[0]))
    return _equalize_classify(Y, eq, P, alphabet)


def ml_detect(
    Y: ReceivedFrame,
    trace: ChannelTrace,
    P: float,
    alphabet: SymbolAlphabet,
) -> int:
    """Exhaustive maximum-likelihood search over the alphabet with perfect CSI."""
    H = trace.H[: Y.T]
    best_class, best_res = 1, math.inf
    for z in range(alphabet.Z):
        frame = reshape_symbol(alphabet.prototypes[z], H.shape[2])
        Y_hyp = np.einsum("tnm,mt->nt", H, frame.X) * math.sqrt(P)
        res = float(np.linalg.norm(Y.Y - Y_hyp) ** 2)
        if res < best_res:
            best_class, best_res = z + 1, res
    return best_class


def ser(predictions: np.ndarray, truth: np.ndarray) -> float:
    """Exact mismatch fraction between predictions and ground truth."""
    predictions = np.asarray(predictions).ravel()
    truth = np.asarray(truth).ravel()
    if predictions.size == 0 or predictions.size != truth.size:
        raise ValueError("predictions and truth must be nonempty and equal length")
    return float(np.count_nonzero(predictions != truth)) / predictions.size


def training_overhead(P_time: float, F_frame: float) -> float:
    """Channel-training overhead fraction P / (P + F)."""
    if F_frame <= 0:
        raise ValueError(f"frame duration must be positive, got {F_frame}")
    if P_time < 0:
        raise ValueError(f"training time must be nonnegative, got {P_time}")
    return P_time / (P_time + F_frame)
