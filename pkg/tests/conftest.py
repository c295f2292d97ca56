import numpy as np
import pytest

from midpredict import DyadRecord, Dataset, generate_synthetic


@pytest.fixture(scope="session")
def easy_dataset():
    """Well-separated two-class data; cheap enough for repeated use."""
    return generate_synthetic(150, 150, 4.0, seed=11)


@pytest.fixture(scope="session")
def noise_dataset():
    """No class signal at all."""
    return generate_synthetic(200, 200, 0.0, seed=12)


def make_records(values_by_row, labels, start_year=1950):
    records = []
    for i, (vals, lab) in enumerate(zip(values_by_row, labels)):
        records.append(
            DyadRecord(f"D{i:04d}", start_year + i % 40, tuple(float(v) for v in vals), lab)
        )
    return Dataset(tuple(records))


def random_raw_rows(rng: np.random.Generator, n: int) -> np.ndarray:
    """Rows that satisfy the raw-variable constraints."""
    return np.column_stack(
        [
            rng.uniform(-10, 10, n),          # democracy
            rng.integers(0, 2, n).astype(float),  # allies
            rng.integers(0, 2, n).astype(float),  # contingency
            rng.uniform(0.5, 4.5, n),         # distance
            rng.uniform(0.0, 3.0, n),         # capability
            rng.uniform(0.0, 0.5, n),         # dependency
            rng.integers(0, 2, n).astype(float),  # majorpower
        ]
    )
