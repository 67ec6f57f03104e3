"""Subspaces of C^{L'} as Grassmannian points: PCA bases, complements,
principal angles and the geodesic between two subspaces.

The geodesic factors (U1, U2, angles, V) are computed from a single SVD so
that both defining identities hold with the same right factor V; this is what
makes the closed-form kernel construction consistent.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SubspaceBasis",
    "OrthoComplement",
    "PrincipalAngles",
    "GeodesicPath",
    "DegenerateSubspaceWarning",
    "pca_subspace",
    "complement",
    "principal_angles",
    "geodesic",
    "flow_point",
]

_SIN_THRESHOLD = 1e-8


class DegenerateSubspaceWarning(UserWarning):
    """Tied covariance eigenvalues: the returned basis is not unique."""


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal basis B (L' x d) of a d-dimensional subspace of C^{L'}."""

    B: np.ndarray

    def __post_init__(self):
        B = np.asarray(self.B, dtype=complex)
        if B.ndim != 2:
            raise ValueError("basis must be a 2-D matrix")
        gram = B.conj().T @ B
        if np.max(np.abs(gram - np.eye(B.shape[1]))) > 1e-10:
            raise ValueError("basis columns are not orthonormal")
        object.__setattr__(self, "B", B)

    @property
    def ambient(self) -> int:
        return self.B.shape[0]

    @property
    def dim(self) -> int:
        return self.B.shape[1]

    def projector(self) -> np.ndarray:
        return self.B @ self.B.conj().T


@dataclass(frozen=True)
class OrthoComplement:
    """Orthonormal basis R of the orthogonal complement of a subspace."""

    R: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.R, dtype=complex)
        gram = R.conj().T @ R
        if np.max(np.abs(gram - np.eye(R.shape[1]))) > 1e-10:
            raise ValueError("complement columns are not orthonormal")
        object.__setattr__(self, "R", R)

    @property
    def ambient(self) -> int:
        return self.R.shape[0]

    @property
    def dim(self) -> int:
        return self.R.shape[1]


@dataclass(frozen=True)
class PrincipalAngles:
    """Canonical angles between two equal-dimensional subspaces, ascending."""

    angles: np.ndarray  # (d,) radians

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        if np.any(a < -1e-15) or np.any(a > np.pi / 2 + 1e-12):
            raise ValueError("principal angles must lie in [0, pi/2]")
        if np.any(np.diff(a) < -1e-12):
            raise ValueError("principal angles must be sorted ascending")
        object.__setattr__(self, "angles", np.clip(a, 0.0, np.pi / 2))


@dataclass(frozen=True)
class GeodesicPath:
    """Precomputed factors of the geodesic from a source to a target subspace."""

    source: SubspaceBasis
    comp: OrthoComplement
    U1: np.ndarray  # (d, d)
    U2: np.ndarray  # (L'-d, d)
    angles: PrincipalAngles
    V: np.ndarray  # (d, d)

    @property
    def ambient(self) -> int:
        return self.source.ambient

    @property
    def dim(self) -> int:
        return self.source.dim


def pca_subspace(rows: np.ndarray, d: int) -> SubspaceBasis:
    """Top-d eigenvectors of the sample covariance of mean-centered rows."""
    rows = np.asarray(rows, dtype=complex)
    if rows.ndim != 2:
        raise ValueError("rows must be a 2-D (n, L') array")
    n, ambient = rows.shape
    if not 1 <= d <= min(n, ambient):
        raise ValueError(f"invalid subspace dimension d={d} for {n} rows in C^{ambient}")
    centered = rows - rows.mean(axis=0, keepdims=True)
    cov = centered.conj().T @ centered / n
    evals, evecs = np.linalg.eigh(cov)  # ascending
    evals, evecs = evals[::-1], evecs[:, ::-1]
    if d < ambient and abs(evals[d - 1] - evals[d]) <= 1e-12:
        warnings.warn(
            f"covariance eigenvalues {d} and {d + 1} are tied; basis not unique",
            DegenerateSubspaceWarning,
            stacklevel=2,
        )
    return SubspaceBasis(B=evecs[:, :d])


def complement(S: SubspaceBasis) -> OrthoComplement:
    """Orthonormal basis of the orthogonal complement, so [S R] is unitary."""
    if S.dim >= S.ambient:
        raise ValueError("full-dimensional subspace has an empty complement")
    U, _, _ = np.linalg.svd(S.B, full_matrices=True)
    R = U[:, S.dim :]
    # realign: columns of U beyond d are orthogonal to col(B) by construction
    return OrthoComplement(R=R)


def principal_angles(
    S_r: SubspaceBasis, S_s: SubspaceBasis
) -> tuple[PrincipalAngles, np.ndarray, np.ndarray]:
    """Angles between two subspaces plus the (U1, V) factors of the SVD.

    The SVD of S_r^H S_s = U1 diag(cos phi) V^H delivers singular values in
    descending order, i.e. angles ascending, which is the order kept here.
    """
    if S_r.ambient != S_s.ambient or S_r.dim != S_s.dim:
        raise ValueError(
            f"subspace shapes differ: ({S_r.ambient},{S_r.dim}) vs ({S_s.ambient},{S_s.dim})"
        )
    U1, sig, Vh = np.linalg.svd(S_r.B.conj().T @ S_s.B)
    sig = np.clip(sig, 0.0, 1.0)
    return PrincipalAngles(angles=np.arccos(sig)), U1, Vh.conj().T


def geodesic(S_r: SubspaceBasis, S_s: SubspaceBasis) -> GeodesicPath:
    """Factorize the geodesic from S_r to S_s.

    U2 is derived from the same V as U1 (column j is -R^H S_s v_j / sin phi_j);
    columns with vanishing sin are filled by an orthonormal completion, which
    is immaterial because they are always multiplied by sin(q*phi_j) = 0.
    """
    angles, U1, V = principal_angles(S_r, S_s)
    R = complement(S_r)
    phi = angles.angles
    d = S_r.dim
    A = R.R.conj().T @ S_s.B @ V  # column j = -U2_j * sin(phi_j)
    U2 = np.zeros((S_r.ambient - d, d), dtype=complex)
    sines = np.sin(phi)
    good = sines > _SIN_THRESHOLD
    U2[:, good] = -A[:, good] / sines[good]
    if not np.all(good):
        U2 = _complete_columns(U2, good)
    return GeodesicPath(source=S_r, comp=R, U1=U1, U2=U2, angles=angles, V=V)


def flow_point(path: GeodesicPath, q: float) -> np.ndarray:
    """Point on the geodesic at position q in [0, 1] (orthonormal L' x d)."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"flow parameter q={q} outside [0, 1]")
    phi = path.angles.angles
    return path.source.B @ path.U1 @ np.diag(np.cos(q * phi)) - path.comp.R @ path.U2 @ np.diag(
        np.sin(q * phi)
    )


def _complete_columns(U2: np.ndarray, good: np.ndarray) -> np.ndarray:
    """Fill the unset columns of U2 with an orthonormal completion."""
    rows = U2.shape[0]
    existing = U2[:, good]
    rng = np.random.default_rng(0)
    out = U2.copy()
    basis = [existing[:, j] for j in range(existing.shape[1])]
    for j in np.nonzero(~good)[0]:
        while True:
            v = rng.standard_normal(rows) + 1j * rng.standard_normal(rows)
            for b in basis:
                v -= (b.conj() @ v) * b
            norm = np.linalg.norm(v)
            if norm > 1e-6:
                v /= norm
                break
        out[:, j] = v
        basis.append(v)
    return out
