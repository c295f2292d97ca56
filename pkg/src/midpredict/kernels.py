"""Kernel functions for the SVM: radial basis and linear."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RBF = "rbf"
LINEAR = "linear"


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    gamma: float | None = None

    def __post_init__(self):
        if self.kind not in (RBF, LINEAR):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == RBF and (self.gamma is None or self.gamma <= 0):
            raise ValueError("rbf kernel requires gamma > 0")


def kernel_eval(spec: KernelSpec, x, x2) -> float:
    """k(x, x2) for a single pair; symmetric in its vector arguments."""
    x = np.asarray(x, dtype=float).ravel()
    x2 = np.asarray(x2, dtype=float).ravel()
    if x.shape != x2.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {x2.shape}")
    if spec.kind == LINEAR:
        return float(x @ x2)
    d = x - x2
    return float(np.exp(-spec.gamma * (d @ d)))


def gram_matrix(spec: KernelSpec, X, X2=None) -> np.ndarray:
    """Kernel matrix K[i, j] = k(X[i], X2[j]); X2 defaults to X."""
    X = np.asarray(X, dtype=float)
    X2 = X if X2 is None else np.asarray(X2, dtype=float)
    if X.ndim != 2 or X2.ndim != 2 or X.shape[1] != X2.shape[1]:
        raise ValueError(f"dimension mismatch: {X.shape} vs {X2.shape}")
    if spec.kind == LINEAR:
        return X @ X2.T
    # Squared distances via the expansion; clip tiny negatives from rounding
    # so rbf values stay in (0, 1].
    sq1 = np.einsum("ij,ij->i", X, X)
    sq2 = sq1 if X2 is X else np.einsum("ij,ij->i", X2, X2)
    d2 = sq1[:, None] + sq2[None, :] - 2.0 * (X @ X2.T)
    np.clip(d2, 0.0, None, out=d2)
    if X2 is X:
        np.fill_diagonal(d2, 0.0)
    return np.exp(-spec.gamma * d2)
