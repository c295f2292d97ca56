"""Per-variable min-max scaling onto [0, 1].

Democracy and the binary variables use their canonical bounds; distance,
capability and dependency take min/max from the data the scaler was fitted
on. Transforming later data reuses the fitted bounds and clamps anything
that falls outside, so unseen extremes stay in [0, 1].
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array

from ._util import ValidationError
from .data import Dataset, DyadRecord
from .variables import N_VARIABLES, VARIABLES, VariableSpec


class DyadScaler(BaseEstimator, TransformerMixin):
    """Min-max scaler aware of the seven-variable layout.

    Attributes after fit:
        lo_, hi_   : (7,) arrays of per-variable bounds
        specs_     : VariableSpec tuple with data-derived bounds resolved
    """

    def fit(self, X, y=None):
        X = check_array(np.asarray(X, dtype=float), ensure_min_features=N_VARIABLES)
        if X.shape[1] != N_VARIABLES:
            raise ValidationError(f"expected {N_VARIABLES} columns, got {X.shape[1]}")
        lo = np.empty(N_VARIABLES)
        hi = np.empty(N_VARIABLES)
        for j, spec in enumerate(VARIABLES):
            if spec.has_bounds:
                lo[j], hi[j] = spec.lo, spec.hi
            else:
                lo[j], hi[j] = X[:, j].min(), X[:, j].max()
            if not hi[j] > lo[j]:
                raise ValidationError(
                    f"degenerate range for {spec.name}: min == max == {lo[j]}"
                )
        self.lo_ = lo
        self.hi_ = hi
        self.specs_ = tuple(
            s if s.has_bounds else s.with_bounds(lo[j], hi[j])
            for j, s in enumerate(VARIABLES)
        )
        return self

    def _check_fitted(self):
        if not hasattr(self, "lo_"):
            raise NotFittedError("DyadScaler is not fitted")

    def transform(self, X) -> np.ndarray:
        self._check_fitted()
        X = np.asarray(X, dtype=float)
        scaled = (X - self.lo_) / (self.hi_ - self.lo_)
        return np.clip(scaled, 0.0, 1.0)

    def inverse_transform(self, X) -> np.ndarray:
        self._check_fitted()
        X = np.asarray(X, dtype=float)
        return X * (self.hi_ - self.lo_) + self.lo_

    # Dataset-level conveniences ------------------------------------------

    def fit_dataset(self, ds: Dataset) -> "DyadScaler":
        if ds.normalized:
            raise ValidationError("dataset is already normalized")
        return self.fit(ds.features())

    def transform_dataset(self, ds: Dataset) -> Dataset:
        self._check_fitted()
        scaled = self.transform(ds.features())
        records = tuple(
            DyadRecord(r.dyad_id, r.year, tuple(float(v) for v in row), r.label)
            for r, row in zip(ds.records, scaled)
        )
        return Dataset(records, self.specs_, normalized=True)

    def bounds(self) -> dict[str, tuple[float, float]]:
        self._check_fitted()
        return {s.name: (float(self.lo_[j]), float(self.hi_[j])) for j, s in enumerate(VARIABLES)}


def normalize(ds: Dataset) -> tuple[Dataset, DyadScaler]:
    """Fit a scaler on `ds` and return the scaled dataset with its scaler."""
    if ds.normalized:
        raise ValidationError("dataset is already normalized")
    scaler = DyadScaler().fit_dataset(ds)
    return scaler.transform_dataset(ds), scaler


def resolved_specs(scaler: DyadScaler) -> tuple[VariableSpec, ...]:
    scaler._check_fitted()
    return scaler.specs_
