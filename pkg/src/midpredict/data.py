"""Dyad-year records: CSV ingestion, balanced sampling, synthetic generation.

A record is one pair of countries in one year with seven explanatory
variables and a peace/conflict label. Conflict is the positive class
throughout the package.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._util import STREAM_SPLIT, STREAM_SYNTH, ParseError, ValidationError, fmt, make_rng
from .variables import N_VARIABLES, VARIABLE_NAMES, VARIABLES, VariableSpec, variable_index

PEACE = "peace"
CONFLICT = "conflict"
LABELS = (PEACE, CONFLICT)

CSV_HEADER = "dyad_id,year," + ",".join(VARIABLE_NAMES) + ",label"

# Class-conditional parameters of the synthetic generator. Democracy and
# capability are the informative variables (high values push toward peace);
# the rest are class-independent noise.
_DEM_SD = 2.5
_CAP_SD = 0.5
_CAP_BASE = 1.5


@dataclass(frozen=True)
class DyadRecord:
    dyad_id: str
    year: int
    values: tuple[float, ...]
    label: str

    def __post_init__(self):
        if len(self.values) != N_VARIABLES:
            raise ValidationError(
                f"record {self.dyad_id}/{self.year}: expected {N_VARIABLES} values, "
                f"got {len(self.values)}"
            )
        if self.label not in LABELS:
            raise ValidationError(
                f"record {self.dyad_id}/{self.year}: label {self.label!r} not in {LABELS}"
            )

    def value(self, name: str) -> float:
        return self.values[variable_index(name)]

    @property
    def key(self) -> tuple[str, int]:
        return (self.dyad_id, self.year)


@dataclass(frozen=True)
class Dataset:
    records: tuple[DyadRecord, ...]
    specs: tuple[VariableSpec, ...] = VARIABLES
    normalized: bool = False

    def __len__(self) -> int:
        return len(self.records)

    def features(self) -> np.ndarray:
        """(n, 7) float matrix in canonical variable order."""
        return np.array([r.values for r in self.records], dtype=float).reshape(
            len(self.records), N_VARIABLES
        )

    def labels(self) -> list[str]:
        return [r.label for r in self.records]

    def targets01(self) -> np.ndarray:
        """Targets with conflict=1, peace=0."""
        return np.array([1.0 if r.label == CONFLICT else 0.0 for r in self.records])

    def targets_pm(self) -> np.ndarray:
        """Targets with conflict=+1, peace=-1."""
        return np.array([1.0 if r.label == CONFLICT else -1.0 for r in self.records])

    def count(self, label: str) -> int:
        return sum(1 for r in self.records if r.label == label)

    def subset(self, indices) -> "Dataset":
        recs = tuple(self.records[i] for i in indices)
        return Dataset(recs, self.specs, self.normalized)


def validate_record(record: DyadRecord, specs=VARIABLES) -> None:
    context = f"record {record.dyad_id}/{record.year}"
    for spec, value in zip(specs, record.values):
        spec.check_value(value, context)


def load_dataset(path: str | Path, specs=VARIABLES) -> Dataset:
    """Read a dataset CSV, validating every row against the variable specs.

    Raises ParseError for malformed rows (naming the line), ValidationError
    for bound violations (naming the record and variable).
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return _read_csv(fh, specs, source=str(path))


def _read_csv(fh, specs, source: str) -> Dataset:
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(f"{source}: empty file") from None
    if ",".join(header) != CSV_HEADER:
        raise ParseError(f"{source}: bad header; expected '{CSV_HEADER}'")

    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != N_VARIABLES + 3:
            raise ParseError(
                f"{source}, line {lineno}: expected {N_VARIABLES + 3} columns, got {len(row)}"
            )
        dyad_id = row[0]
        try:
            year = int(row[1])
        except ValueError:
            raise ParseError(f"{source}, line {lineno}: year {row[1]!r} is not an integer") from None
        try:
            values = tuple(float(v) for v in row[2:-1])
        except ValueError:
            raise ParseError(f"{source}, line {lineno}: non-numeric variable value") from None
        label = row[-1]
        if label not in LABELS:
            raise ParseError(f"{source}, line {lineno}: label {label!r} not in {LABELS}")
        record = DyadRecord(dyad_id, year, values, label)
        validate_record(record, specs)
        records.append(record)

    if not records:
        raise ParseError(f"{source}: no data rows")
    return Dataset(tuple(records), tuple(specs))


def write_dataset(ds: Dataset, path: str | Path) -> None:
    """Write canonical CSV (LF endings, shortest round-tripping floats)."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in ds.records:
        cells = [r.dyad_id, str(r.year)] + [fmt(v) for v in r.values] + [r.label]
        buf.write(",".join(cells) + "\n")
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="")


def balanced_sample(ds: Dataset, n_per_class: int, seed: int) -> tuple[Dataset, Dataset]:
    """Draw a class-balanced training set without replacement; rest is test.

    Both outputs preserve the input record order. The same seed reproduces
    the identical split.
    """
    if n_per_class < 0:
        raise ValueError("n_per_class must be >= 0")
    conflict_idx = np.array([i for i, r in enumerate(ds.records) if r.label == CONFLICT])
    peace_idx = np.array([i for i, r in enumerate(ds.records) if r.label == PEACE])
    for name, idx in ((CONFLICT, conflict_idx), (PEACE, peace_idx)):
        if len(idx) < n_per_class:
            raise ValidationError(
                f"need {n_per_class} {name} records, dataset has {len(idx)}"
            )
    rng = make_rng(seed, STREAM_SPLIT)
    take = np.concatenate(
        [
            rng.choice(conflict_idx, size=n_per_class, replace=False),
            rng.choice(peace_idx, size=n_per_class, replace=False),
        ]
        if n_per_class > 0
        else [np.array([], dtype=int)]
    ).astype(int)
    chosen = np.zeros(len(ds.records), dtype=bool)
    chosen[take] = True
    train = ds.subset(np.flatnonzero(chosen))
    test = ds.subset(np.flatnonzero(~chosen))
    return train, test


def generate_synthetic(n_peace: int, n_conflict: int, separation: float, seed: int) -> Dataset:
    """Synthetic dyad-year data for desk-scale runs.

    Class-conditional means of democracy and capability differ by
    `separation` standard deviations (peace sits at the high end of both);
    the other five variables are identically distributed noise in both
    classes. Deterministic for a given seed.
    """
    if n_peace < 0 or n_conflict < 0:
        raise ValueError("record counts must be >= 0")
    if separation < 0:
        raise ValueError("separation must be >= 0")
    rng = make_rng(seed, STREAM_SYNTH)
    records = []
    for label, n, sign in ((PEACE, n_peace, +1.0), (CONFLICT, n_conflict, -1.0)):
        if n == 0:
            continue
        democracy = np.clip(
            rng.normal(sign * separation * _DEM_SD / 2.0, _DEM_SD, size=n), -10.0, 10.0
        )
        capability = np.clip(
            rng.normal(_CAP_BASE + sign * separation * _CAP_SD / 2.0, _CAP_SD, size=n),
            0.0,
            None,
        )
        allies = rng.binomial(1, 0.25, size=n).astype(float)
        contingency = rng.binomial(1, 0.5, size=n).astype(float)
        majorpower = rng.binomial(1, 0.35, size=n).astype(float)
        distance = np.clip(rng.normal(3.0, 0.6, size=n), 0.5, 4.5)
        dependency = rng.exponential(0.02, size=n)
        tag = "P" if label == PEACE else "C"
        for i in range(n):
            records.append(
                DyadRecord(
                    dyad_id=f"SYN-{tag}{i:05d}",
                    year=1946 + i % 47,
                    values=(
                        float(democracy[i]),
                        float(allies[i]),
                        float(contingency[i]),
                        float(distance[i]),
                        float(capability[i]),
                        float(dependency[i]),
                        float(majorpower[i]),
                    ),
                    label=label,
                )
            )
    ds = Dataset(tuple(records))
    for r in ds.records:
        validate_record(r, ds.specs)
    return ds
