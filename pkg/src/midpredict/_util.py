"""Shared plumbing: deterministic RNG streams, file digests, float formatting."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

# Stream ids keep per-stage generators independent while everything still
# derives from the one user-supplied seed.
STREAM_SYNTH = 1
STREAM_SPLIT = 2
STREAM_FOLDS = 3
STREAM_SVM = 4
STREAM_MLP = 5


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for (seed, stream); no global RNG state."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, stream))))


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def fmt(x: float) -> str:
    """Shortest representation that parses back to the same float."""
    return repr(float(x))


class MidpredictError(Exception):
    """Base class for errors raised by this package."""


class ParseError(MidpredictError, ValueError):
    """Malformed input file."""


class ValidationError(MidpredictError, ValueError):
    """Well-formed input violating a domain constraint."""


class ConvergenceError(MidpredictError):
    """Iterative solver ran out of budget before reaching tolerance."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class TrainingError(MidpredictError):
    """Training produced a non-finite loss or gradient."""

    def __init__(self, message: str, iteration: int | None = None):
        super().__init__(message)
        self.iteration = iteration
