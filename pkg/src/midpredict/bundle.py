"""A trained estimator packaged with the scaler it was trained behind.

Bundles accept raw (unnormalized) datasets and apply the training-time
transform internally, so callers never normalize twice. Datasets already
flagged normalized pass through untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import CONFLICT, PEACE, Dataset
from .mlp import MlpClassifier
from .scaling import DyadScaler
from .svm import SvmClassifier

MLP = "mlp"
SVM = "svm"


@dataclass(frozen=True)
class ModelBundle:
    family: str
    estimator: MlpClassifier | SvmClassifier
    scaler: DyadScaler
    seed: int

    def __post_init__(self):
        if self.family not in (MLP, SVM):
            raise ValueError(f"unknown model family {self.family!r}")

    def normalized_features(self, ds: Dataset) -> np.ndarray:
        X = ds.features()
        return X if ds.normalized else self.scaler.transform(X)

    def conflict_scores(self, ds: Dataset) -> np.ndarray:
        """Monotone conflict score per record (probability or margin)."""
        return self.estimator.conflict_score(self.normalized_features(ds))

    def predict_matrix(self, X_normalized: np.ndarray) -> np.ndarray:
        """Boolean conflict predictions for an already-normalized matrix."""
        if self.family == MLP:
            return self.estimator.conflict_score(X_normalized) >= 0.5
        return self.estimator.decision_function(X_normalized) >= 0.0

    def predict_labels(self, ds: Dataset) -> list[str]:
        flags = self.predict_matrix(self.normalized_features(ds))
        return [CONFLICT if f else PEACE for f in flags]
