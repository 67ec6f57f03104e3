"""Closed-form geodesic flow kernel and kernel evaluations.

The kernel matrix F integrates the projectors of every intermediate subspace
on the geodesic; with the closed-form diagonal entries used here it equals
twice the unit-interval integral of Phi(q) Phi(q)^H. The global factor is
harmless for SVM decisions (absorbed by rescaling the box constraint).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gfkmimo.grassmann import GeodesicPath, PrincipalAngles

__all__ = ["SigmaDiagonals", "GfkMatrix", "sigma_entries", "build_kernel", "kernel_eval", "gram_matrix"]

_SERIES_THRESHOLD = 1e-4


@dataclass(frozen=True)
class SigmaDiagonals:
    """Diagonals of the three integration blocks, one entry per angle."""

    sigma1: np.ndarray
    sigma2: np.ndarray
    sigma3: np.ndarray

    def __post_init__(self):
        s1 = np.asarray(self.sigma1, dtype=float)
        s2 = np.asarray(self.sigma2, dtype=float)
        s3 = np.asarray(self.sigma3, dtype=float)
        if np.max(np.abs(s1 + s3 - 2.0)) > 1e-12:
            raise ValueError("sigma1 + sigma3 must equal 2 entrywise")
        if np.any(s2 > 0):
            raise ValueError("sigma2 entries must be nonpositive")
        object.__setattr__(self, "sigma1", s1)
        object.__setattr__(self, "sigma2", s2)
        object.__setattr__(self, "sigma3", s3)


@dataclass(frozen=True)
class GfkMatrix:
    """Hermitian positive-semidefinite kernel matrix F (L' x L')."""

    F: np.ndarray

    def __post_init__(self):
        F = np.asarray(self.F, dtype=complex)
        if F.ndim != 2 or F.shape[0] != F.shape[1]:
            raise ValueError("kernel matrix must be square")
        if np.max(np.abs(F - np.conj(np.ascontiguousarray(F.T)))) > 1e-10:
            raise ValueError("kernel matrix must be Hermitian")
        object.__setattr__(self, "F", F)

    @property
    def ambient(self) -> int:
        return self.F.shape[0]


def sigma_entries(angles: PrincipalAngles) -> SigmaDiagonals:
    """Closed-form diagonal entries as functions of the principal angles.

    Small angles switch to the series expansion to dodge the 0/0 in the
    sin(2*phi)/(2*phi) terms.
    """
    phi = np.asarray(angles.angles, dtype=float)
    small = phi < _SERIES_THRESHOLD
    two_phi = np.where(small, 1.0, 2.0 * phi)  # dummy divisor where unused
    s1 = np.where(small, 2.0 - (2.0 / 3.0) * phi**2, 1.0 + np.sin(2.0 * phi) / two_phi)
    s2 = np.where(small, -phi, (np.cos(2.0 * phi) - 1.0) / two_phi)
    s3 = np.where(small, (2.0 / 3.0) * phi**2, 1.0 - np.sin(2.0 * phi) / two_phi)
    s2 = np.minimum(s2, 0.0)  # clip arithmetic dust above zero
    return SigmaDiagonals(sigma1=s1, sigma2=s2, sigma3=s3)


def build_kernel(path: GeodesicPath) -> GfkMatrix:
    """Assemble F from the geodesic factors and the closed-form diagonals."""
    sig = sigma_entries(path.angles)
    P1 = path.source.B @ path.U1  # L' x d
    P2 = path.comp.R @ path.U2  # L' x d
    d = sig.sigma1.size
    # single product G [[s1, s2], [s2, s3]] G^H with G = [P1, P2]
    G = np.hstack((P1, P2))
    Sigma = np.zeros((2 * d, 2 * d))
    idx = np.arange(d)
    Sigma[idx, idx] = sig.sigma1
    Sigma[idx, d + idx] = sig.sigma2
    Sigma[d + idx, idx] = sig.sigma2
    Sigma[d + idx, d + idx] = sig.sigma3
    F = (G @ Sigma) @ G.conj().T
    # symmetrize via a contiguous transpose; adding the strided F.conj().T
    # view directly is several times slower
    F = 0.5 * (F + np.conj(np.ascontiguousarray(F.T)))
    return GfkMatrix(F=F)


def kernel_eval(F: GfkMatrix, a: np.ndarray, b: np.ndarray) -> float:
    """Real part of the Hermitian form a F b^H between two data rows."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size != F.ambient or b.size != F.ambient:
        raise ValueError(
            f"row lengths ({a.size}, {b.size}) do not match kernel dimension {F.ambient}"
        )
    return float(np.real(a @ F.F @ b.conj()))


def gram_matrix(F: GfkMatrix, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Real kernel matrix between two row sets: entry (i, j) = Re(A_i F B_j^H)."""
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    B = np.atleast_2d(np.asarray(B, dtype=complex))
    if A.shape[1] != F.ambient or B.shape[1] != F.ambient:
        raise ValueError(
            f"row lengths ({A.shape[1]}, {B.shape[1]}) do not match kernel dimension {F.ambient}"
        )
    return np.real((A @ F.F) @ B.conj().T)
