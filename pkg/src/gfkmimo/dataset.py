"""Mixture-of-Gaussians symbol source and domain-shifted dataset construction.

A "domain" is one channel environment (SNR, Doppler, time segment). Training
and test sets built from different segments of the same experiment seed see
different channel realizations, which is the domain shift the detector must
absorb.
"""

from __future__ import annotations

import csv
import math
import zlib
from dataclasses import dataclass, field

import numpy as np

from gfkmimo.channel import FadingConfig, generate_trace
from gfkmimo.signal_model import SymbolAlphabet, flatten_received, reshape_symbol, transmit

__all__ = [
    "MoGModel",
    "LabeledSet",
    "DomainConfig",
    "default_mog",
    "sample_symbols",
    "build_domain_dataset",
    "segment_trace",
    "save_labeled_set",
    "load_labeled_set",
]


@dataclass(frozen=True)
class MoGModel:
    """Mixture of Z isotropic complex Gaussians in C^L."""

    Z: int
    L: int
    means: np.ndarray  # (Z, L) complex
    component_std: float
    weights: np.ndarray  # (Z,)

    def __post_init__(self):
        means = np.asarray(self.means, dtype=complex)
        weights = np.asarray(self.weights, dtype=float)
        if means.shape != (self.Z, self.L):
            raise ValueError(f"means shape {means.shape} != ({self.Z}, {self.L})")
        if weights.shape != (self.Z,) or np.any(weights < 0):
            raise ValueError("weights must be Z nonnegative values")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {weights.sum()}, expected 1")
        d = _min_pairwise_distance(means)
        if d <= 0:
            raise ValueError("component means must be pairwise distinct")
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "weights", weights)

    def alphabet(self) -> SymbolAlphabet:
        """The class means viewed as the transmit alphabet."""
        return SymbolAlphabet(Z=self.Z, L=self.L, prototypes=self.means)


@dataclass(frozen=True)
class LabeledSet:
    """Flattened received rows with their transmitted class labels (1..Z)."""

    rows: np.ndarray  # (n, L') complex
    labels: np.ndarray  # (n,) int

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=complex)
        labels = np.asarray(self.labels, dtype=int)
        if rows.ndim != 2 or labels.shape != (rows.shape[0],):
            raise ValueError("rows and labels must have matching leading dimension")
        if rows.shape[0] and labels.min() < 1:
            raise ValueError("labels are 1-based class indices")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def ambient(self) -> int:
        return self.rows.shape[1]


@dataclass(frozen=True)
class DomainConfig:
    """One channel environment: SNR, Doppler, time-segment tag and seed.

    trace_mode:
      "shared"    -- all frames of the segment see one common channel
                     realization; segments are consecutive windows of a single
                     continuous fading process, so the shift between segments
                     is genuine channel drift.
      "per_frame" -- every frame draws an independent trace from a seed stream
                     derived from (seed, segment, frame index).
    """

    snr_db: float
    fd_ts: float
    segment: str = "train"
    seed: int = 0
    oscillators: int = 32
    trace_mode: str = "shared"

    def __post_init__(self):
        if math.isnan(self.snr_db):
            raise ValueError("snr_db must not be NaN")
        if self.trace_mode not in ("shared", "per_frame"):
            raise ValueError(f"unknown trace_mode {self.trace_mode!r}")

    def power_and_noise(self) -> tuple[float, float]:
        """Transmit power and per-entry noise variance implied by snr_db.

        Unit noise variance with P = 10^(snr_db/10); infinite SNR maps to
        (1, 0) so the noiseless limit is exact.
        """
        if math.isinf(self.snr_db) and self.snr_db > 0:
            return 1.0, 0.0
        return 10.0 ** (self.snr_db / 10.0), 1.0


# offset of a segment (in units of frame length) along the shared fading process
_SEGMENT_ORDER = {"train": 0, "test": 1}


def _segment_slot_offset(segment: str, T: int) -> int:
    idx = _SEGMENT_ORDER.get(segment)
    if idx is None:
        idx = 2 + (zlib.crc32(segment.encode()) % 1024)
    return idx * T


def _segment_entropy(segment: str) -> int:
    return zlib.crc32(segment.encode())


def default_mog(Z: int = 12, L: int = 48, seed: int = 0) -> MoGModel:
    """Seeded default mixture: unit complex Gaussian means, uniform weights.

    Component std is 10% of the mean inter-class distance, which keeps the
    clean-channel error rate of a nearest-mean detector near zero.
    """
    rng = np.random.default_rng(seed)
    means = (rng.standard_normal((Z, L)) + 1j * rng.standard_normal((Z, L))) / np.sqrt(2.0)
    dists = [
        np.linalg.norm(means[i] - means[j]) for i in range(Z) for j in range(i + 1, Z)
    ]
    std = 0.1 * float(np.mean(dists))
    return MoGModel(Z=Z, L=L, means=means, component_std=std, weights=np.full(Z, 1.0 / Z))


def sample_symbols(
    mog: MoGModel, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw n labeled symbols: mean of a weighted component plus isotropic jitter.

    Returns (symbols, labels) with symbols (n, L) and 1-based labels (n,).
    """
    if n < 1:
        raise ValueError(f"need at least one sample, got n={n}")
    comps = rng.choice(mog.Z, size=n, p=mog.weights)
    symbols = mog.means[comps].copy()
    if mog.component_std > 0:
        scale = mog.component_std / np.sqrt(2.0)
        symbols += rng.normal(0.0, scale, size=symbols.shape) + 1j * rng.normal(
            0.0, scale, size=symbols.shape
        )
    return symbols, comps + 1


def build_domain_dataset(
    symbols: np.ndarray,
    labels: np.ndarray,
    domain: DomainConfig,
    dims: tuple[int, int],
    keep_frames: bool = False,
):
    """Push labeled symbols through the domain's channel into flattened rows.

    dims is (M, N). Each symbol is reshaped onto M antennas, transmitted over
    the domain's fading trace at the power implied by snr_db (unit noise
    variance), and the received matrix flattened to a length-N*T row.

    With keep_frames=True also returns the per-frame artifacts needed by the
    classical baselines: a list of (ReceivedFrame, ChannelTrace, P, noise_var).
    """
    symbols = np.asarray(symbols, dtype=complex)
    labels = np.asarray(labels, dtype=int)
    if symbols.ndim != 2 or symbols.shape[0] == 0:
        raise ValueError("symbols must be a nonempty (n, L) array")
    M, N = dims
    P, noise_var = domain.power_and_noise()
    T = math.ceil(symbols.shape[1] / M)

    shared_trace = None
    if domain.trace_mode == "shared":
        shared_trace = segment_trace(domain, dims, T)

    noise_root = np.random.SeedSequence(
        entropy=(domain.seed, _segment_entropy(domain.segment), 0xA5)
    )
    noise_rng = np.random.default_rng(noise_root)

    rows = np.empty((symbols.shape[0], N * T), dtype=complex)
    frames = [] if keep_frames else None
    for i, s in enumerate(symbols):
        frame = reshape_symbol(s, M)
        if shared_trace is not None:
            trace = shared_trace
        else:
            seq = np.random.SeedSequence(
                entropy=(domain.seed, _segment_entropy(domain.segment), i)
            )
            cfg = FadingConfig(
                fd_ts=domain.fd_ts,
                oscillators=domain.oscillators,
                seed=seq.generate_state(1)[0],
            )
            trace = generate_trace(N, M, cfg, frame.T)
        received = transmit(frame, trace, P, noise_var, noise_rng)
        rows[i] = flatten_received(received.Y)
        if keep_frames:
            frames.append((received, trace, P, noise_var))
    dataset = LabeledSet(rows=rows, labels=labels)
    if keep_frames:
        return dataset, frames
    return dataset


def segment_trace(domain: DomainConfig, dims: tuple[int, int], T: int):
    """The shared fading trace of a domain segment (shared trace_mode only).

    Exposes the channel a receiver would have estimated during that segment,
    which the benchmark uses as the baselines' stale CSI.
    """
    if domain.trace_mode != "shared":
        raise ValueError("per-frame domains have no single segment trace")
    M, N = dims
    offset = _segment_slot_offset(domain.segment, T)
    cfg = FadingConfig(fd_ts=domain.fd_ts, oscillators=domain.oscillators, seed=domain.seed)
    long_trace = generate_trace(N, M, cfg, offset + T)
    from gfkmimo.channel import ChannelTrace

    return ChannelTrace(N=N, M=M, H=long_trace.H[offset : offset + T])


def save_labeled_set(dataset: LabeledSet, path) -> None:
    """Write one CSV row per sample: label, then interleaved re/im values."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for label, row in zip(dataset.labels, dataset.rows):
            rec = [int(label)]
            for v in row:
                rec.append(repr(float(v.real)))
                rec.append(repr(float(v.imag)))
            writer.writerow(rec)


def load_labeled_set(path) -> LabeledSet:
    """Inverse of :func:`save_labeled_set`."""
    labels = []
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec:
                continue
            labels.append(int(rec[0]))
            vals = np.asarray(rec[1:], dtype=float)
            rows.append(vals[0::2] + 1j * vals[1::2])
    return LabeledSet(rows=np.asarray(rows), labels=np.asarray(labels))


def _min_pairwise_distance(means: np.ndarray) -> float:
    Z = means.shape[0]
    best = np.inf
    for i in range(Z):
        for j in range(i + 1, Z):
            best = min(best, float(np.linalg.norm(means[i] - means[j])))
    return best
