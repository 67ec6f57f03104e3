"""Kernel SVM on a precomputed Gram matrix: SMO-style dual solver,
one-vs-rest multiclass wrapper and the decision function.

The solver works on the standard soft-margin dual
    max  sum(g) - 1/2 g' (yy' * K) g   s.t.  y'g = 0, 0 <= g <= C
with deterministic maximal-violating-pair selection, so training is
reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SolverConfig",
    "TrainedBinarySVM",
    "MulticlassModel",
    "solve_dual",
    "train_multiclass",
    "predict",
    "decision_matrix",
    "save_model",
    "load_model",
]


@dataclass(frozen=True)
class SolverConfig:
    """Box constraint, KKT tolerance and iteration cap for the dual solver."""

    C: float = 10.0
    tol: float = 1e-3
    max_passes: int = 100_000

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError(f"box constraint must be positive, got C={self.C}")
        if not 0 < self.tol <= 1e-2:
            raise ValueError(f"tolerance {self.tol} outside (0, 1e-2]")
        if self.max_passes < 1:
            raise ValueError("max_passes must be positive")


@dataclass(frozen=True)
class TrainedBinarySVM:
    """Sparse dual solution: supports, multipliers, signed labels and bias."""

    support_indices: np.ndarray  # (n_sv,) int
    multipliers: np.ndarray  # (n_sv,) float, 0 < g <= C
    signs: np.ndarray  # (n_sv,) +-1
    bias: float
    converged: bool = True
    objective_curve: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def n_sv(self) -> int:
        return self.support_indices.size

    def decision_values(self, k_rows: np.ndarray) -> np.ndarray:
        """Decision values for kernel rows of shape (n_test, n_train)."""
        k_rows = np.atleast_2d(k_rows)
        return k_rows[:, self.support_indices] @ (self.multipliers * self.signs) + self.bias


@dataclass(frozen=True)
class MulticlassModel:
    """One binary machine per class, class z against the rest."""

    machines: tuple
    Z: int
    n_train: int

    def __post_init__(self):
        if len(self.machines) != self.Z:
            raise ValueError(f"expected {self.Z} machines, got {len(self.machines)}")


def solve_dual(K: np.ndarray, y: np.ndarray, config: SolverConfig) -> TrainedBinarySVM:
    """Solve the binary soft-margin dual on a precomputed Gram matrix.

    Working-pair selection is the maximal violating pair; ties resolve to the
    lowest index, so results are deterministic. The returned objective curve
    is the dual objective after every update (non-decreasing).
    """
    K = np.asarray(K, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    n = y.size
    if K.shape != (n, n):
        raise ValueError(f"Gram matrix shape {K.shape} does not match {n} labels")
    if np.max(np.abs(K - K.T)) > 1e-8:
        raise ValueError("Gram matrix is not symmetric")
    if not (np.any(y > 0) and np.any(y < 0)):
        raise ValueError("both label signs must be present")

    C = config.C
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of 1/2 a'Qa - e'a at a = 0
    yK = y[:, None] * K  # row i of Q is y_i * yK[i]
    objective = []
    converged = False

    for _ in range(config.max_passes):
        minus_yg = -y * grad
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y < 0) & (alpha < C)) | ((y > 0) & (alpha > 0))
        m_val = np.max(minus_yg[up])
        M_val = np.min(minus_yg[low])
        if m_val - M_val <= config.tol:
            converged = True
            break
        i = int(np.flatnonzero(up)[np.argmax(minus_yg[up])])
        j = int(np.flatnonzero(low)[np.argmin(minus_yg[low])])

        # curvature along the feasible direction (a_i += y_i*t, a_j -= y_j*t)
        quad = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if quad <= 0:
            quad = 1e-12
        step = (minus_yg[i] - minus_yg[j]) / quad
        # clip to the box along the feasible direction (a_i += y_i*t, a_j -= y_j*t)
        step = min(step, C - alpha[i] if y[i] > 0 else alpha[i])
        step = min(step, alpha[j] if y[j] > 0 else C - alpha[j])
        d_i = y[i] * step
        d_j = -y[j] * step
        alpha[i] += d_i
        alpha[j] += d_j
        grad += (y * K[i]) * (y[i] * d_i) + (y * K[j]) * (y[j] * d_j)
        # dual objective e'a - 1/2 a'Qa, using Qa = grad + e
        objective.append(float(alpha.sum()) - 0.5 * float(alpha @ (grad + 1.0)))

    sv = alpha > 0
    idx = np.flatnonzero(sv)
    free = sv & (alpha < C * (1.0 - 1e-9))
    minus_yg = -y * grad
    if np.any(free):
        bias = float(np.mean(minus_yg[free]))
    else:
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y < 0) & (alpha < C)) | ((y > 0) & (alpha > 0))
        hi = np.max(minus_yg[up]) if np.any(up) else 0.0
        lo = np.min(minus_yg[low]) if np.any(low) else 0.0
        bias = 0.5 * (hi + lo)
    return TrainedBinarySVM(
        support_indices=idx,
        multipliers=alpha[idx],
        signs=y[idx].astype(int),
        bias=bias,
        converged=converged,
        objective_curve=np.asarray(objective),
    )


def train_multiclass(
    K: np.ndarray, labels: np.ndarray, Z: int, config: SolverConfig
) -> MulticlassModel:
    """Train Z one-vs-rest machines on a shared Gram matrix (labels in 1..Z)."""
    labels = np.asarray(labels, dtype=int).ravel()
    present = np.unique(labels)
    missing = [z for z in range(1, Z + 1) if z not in present]
    if missing:
        raise ValueError(f"classes missing from the training labels: {missing}")
    machines = []
    for z in range(1, Z + 1):
        y = np.where(labels == z, 1.0, -1.0)
        machines.append(solve_dual(K, y, config))
    return MulticlassModel(machines=tuple(machines), Z=Z, n_train=labels.size)


def predict(model: MulticlassModel, k_row: np.ndarray) -> tuple[int, np.ndarray]:
    """Classify one test row from its kernel evaluations against the training set.

    Returns the 1-based predicted class (argmax of the Z decision values, ties
    to the lowest index) and the decision values themselves.
    """
    k_row = np.asarray(k_row, dtype=float).ravel()
    if k_row.size != model.n_train:
        raise ValueError(f"kernel row length {k_row.size} != training size {model.n_train}")
    decisions = np.array([mach.decision_values(k_row[None, :])[0] for mach in model.machines])
    return int(np.argmax(decisions)) + 1, decisions


def decision_matrix(model: MulticlassModel, k_rows: np.ndarray) -> np.ndarray:
    """Decision values for a batch: (n_test, Z)."""
    k_rows = np.atleast_2d(np.asarray(k_rows, dtype=float))
    return np.column_stack([mach.decision_values(k_rows) for mach in model.machines])


def save_model(model: MulticlassModel, path) -> None:
    """Persist a trained multiclass model to a flat .npz archive."""
    payload = {"Z": np.array(model.Z), "n_train": np.array(model.n_train)}
    for z, mach in enumerate(model.machines):
        payload[f"idx_{z}"] = mach.support_indices
        payload[f"mult_{z}"] = mach.multipliers
        payload[f"sign_{z}"] = mach.signs
        payload[f"bias_{z}"] = np.array(mach.bias)
        payload[f"conv_{z}"] = np.array(mach.converged)
    np.savez(path, **payload)


def load_model(path) -> MulticlassModel:
    """Inverse of :func:`save_model`."""
    with np.load(path) as data:
        Z = int(data["Z"])
        machines = tuple(
            TrainedBinarySVM(
                support_indices=data[f"idx_{z}"],
                multipliers=data[f"mult_{z}"],
                signs=data[f"sign_{z}"],
                bias=float(data[f"bias_{z}"]),
                converged=bool(data[f"conv_{z}"]),
            )
            for z in range(Z)
        )
        n_train = int(data["n_train"])
    return MulticlassModel(machines=machines, Z=Z, n_train=n_train)
