"""Temporally correlated Rayleigh fading (Clarke's model) via sum of sinusoids.

Each scalar channel entry is synthesised as a sum of complex sinusoids with
random arrival angles and phases, giving unit average power, a Rayleigh
envelope and ensemble autocorrelation J0(2*pi*fd_ts*lag).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["FadingConfig", "ChannelTrace", "generate_trace", "velocity_to_fdts"]

# calibration from the 66 mph <-> fd_ts = 0.01 operating point
_FDTS_PER_MPH = 0.01 / 66.0


@dataclass(frozen=True)
class FadingConfig:
    """Normalized Doppler, oscillator count and seed for one fading process."""

    fd_ts: float
    oscillators: int = 32
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.fd_ts < 0.5:
            raise ValueError(f"fd_ts={self.fd_ts} outside [0, 0.5) (aliasing)")
        if self.oscillators < 8:
            raise ValueError(f"need at least 8 oscillators, got {self.oscillators}")


@dataclass(frozen=True)
class ChannelTrace:
    """Sequence of N x M channel matrices, one per slot."""

    N: int
    M: int
    H: np.ndarray  # (slots, N, M) complex

    @property
    def slots(self) -> int:
        return self.H.shape[0]


def generate_trace(N: int, M: int, config: FadingConfig, slots: int) -> ChannelTrace:
    """Generate a trace of independent Rayleigh-faded entries.

    Every scalar entry is an independent sum-of-sinusoids process
    h(t) = K^{-1/2} sum_k exp(j(2*pi*fd_ts*t*cos(a_k) + psi_k)) with uniform
    arrival angles a_k and phases psi_k.
    """
    if slots < 1:
        raise ValueError(f"need at least one slot, got {slots}")
    if N < 1 or M < 1:
        raise ValueError(f"antenna counts must be positive, got N={N}, M={M}")
    rng = np.random.default_rng(config.seed)
    K = config.oscillators
    angles = rng.uniform(0.0, 2.0 * np.pi, size=(N, M, K))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=(N, M, K))
    t = np.arange(slots, dtype=float)
    # (slots, N, M, K) phase argument, summed over oscillators
    arg = (
        2.0 * np.pi * config.fd_ts * np.cos(angles)[None, :, :, :] * t[:, None, None, None]
        + phases[None, :, :, :]
    )
    H = np.exp(1j * arg).sum(axis=-1) / np.sqrt(K)
    return ChannelTrace(N=N, M=M, H=H)


def velocity_to_fdts(mph: float) -> float:
    """Map node velocity in mph to normalized Doppler (66 mph -> 0.01)."""
    if mph < 0:
        raise ValueError(f"negative speed {mph}")
    return mph * _FDTS_PER_MPH
