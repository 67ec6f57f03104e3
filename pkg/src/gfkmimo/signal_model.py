"""Symbol/frame representations and the physical receive equation.

A length-L complex symbol is reshaped onto M transmit antennas, sent over a
time-varying N x M channel for T slots, and the received N x T matrix is
flattened back into a single row vector of length L' = N*T for the learning
pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SymbolAlphabet",
    "TransmitFrame",
    "ReceivedFrame",
    "reshape_symbol",
    "flatten_received",
    "unflatten_received",
    "transmit",
]


@dataclass(frozen=True)
class SymbolAlphabet:
    """Finite alphabet of Z complex prototype symbols of length L."""

    Z: int
    L: int
    prototypes: np.ndarray  # (Z, L) complex

    def __post_init__(self):
        if self.Z < 2:
            raise ValueError(f"alphabet needs at least 2 symbols, got Z={self.Z}")
        protos = np.asarray(self.prototypes, dtype=complex)
        if protos.shape != (self.Z, self.L):
            raise ValueError(f"prototypes shape {protos.shape} != ({self.Z}, {self.L})")
        if not np.all(np.isfinite(protos)):
            raise ValueError("prototypes must be finite")
        # pairwise distinct
        for i in range(self.Z):
            for j in range(i + 1, self.Z):
                if np.allclose(protos[i], protos[j]):
                    raise ValueError(f"prototypes {i} and {j} coincide")
        object.__setattr__(self, "prototypes", protos)


@dataclass(frozen=True)
class TransmitFrame:
    """M x T transmit matrix holding one (zero-padded) symbol, one row per antenna."""

    M: int
    T: int
    X: np.ndarray  # (M, T) complex
    pad: int

    @property
    def symbol_length(self) -> int:
        return self.M * self.T - self.pad


@dataclass(frozen=True)
class ReceivedFrame:
    """N x T received matrix and its row-major flattening of length L' = N*T."""

    N: int
    T: int
    Y: np.ndarray  # (N, T) complex

    @property
    def flat(self) -> np.ndarray:
        return flatten_received(self.Y)

    @property
    def ambient(self) -> int:
        return self.N * self.T


def reshape_symbol(s: np.ndarray, M: int) -> TransmitFrame:
    """Split a complex row vector into M antenna rows, zero-padding the tail.

    Row i of the result is the i-th contiguous sub-vector of the padded symbol,
    so concatenating the rows recovers the padded symbol exactly.
    """
    if M < 1:
        raise ValueError(f"need at least one transmit antenna, got M={M}")
    s = np.asarray(s, dtype=complex).ravel()
    L = s.size
    if L < 1:
        raise ValueError("empty symbol")
    T = math.ceil(L / M)
    pad = M * T - L
    padded = np.concatenate([s, np.zeros(pad, dtype=complex)])
    return TransmitFrame(M=M, T=T, X=padded.reshape(M, T), pad=pad)


def flatten_received(Y: np.ndarray) -> np.ndarray:
    """Concatenate the rows of Y into a single row vector of length N*T."""
    Y = np.asarray(Y, dtype=complex)
    if Y.ndim != 2 or Y.size == 0:
        raise ValueError(f"expected a nonempty 2-D matrix, got shape {Y.shape}")
    return Y.reshape(-1).copy()


def unflatten_received(flat: np.ndarray, N: int) -> np.ndarray:
    """Inverse of :func:`flatten_received` given the row count N."""
    flat = np.asarray(flat, dtype=complex).ravel()
    if N < 1 or flat.size % N != 0:
        raise ValueError(f"length {flat.size} not divisible into {N} rows")
    return flat.reshape(N, -1).copy()


def transmit(
    frame: TransmitFrame,
    trace,
    P: float,
    noise_var: float,
    rng: np.random.Generator,
) -> ReceivedFrame:
    """Send a frame through a fading trace: y_t = sqrt(P) H_t x_t + w_t.

    Noise is circularly-symmetric complex Gaussian with per-entry variance
    ``noise_var`` (real and imaginary parts each carry half of it).
    """
    if P <= 0:
        raise ValueError(f"transmit power must be positive, got {P}")
    if noise_var < 0:
        raise ValueError(f"noise variance must be nonnegative, got {noise_var}")
    H = np.asarray(trace.H)
    if H.ndim != 3 or H.shape[0] < frame.T or H.shape[2] != frame.M:
        raise ValueError(
            f"trace of shape {H.shape} incompatible with frame (M={frame.M}, T={frame.T})"
        )
    N = H.shape[1]
    # column t of Y from slot-t channel
    Y = np.einsum("tnm,mt->nt", H[: frame.T], frame.X) * math.sqrt(P)
    if noise_var > 0:
        scale = math.sqrt(noise_var / 2.0)
        W = rng.normal(0.0, scale, size=(N, frame.T)) + 1j * rng.normal(
            0.0, scale, size=(N, frame.T)
        )
        Y = Y + W
    return ReceivedFrame(N=N, T=frame.T, Y=Y)
