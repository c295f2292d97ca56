"""The seven dyadic explanatory variables and their admissible ranges.

Kinds:
  binary      -- values in {0, 1} exactly
  bounded     -- continuous with fixed canonical bounds
  unbounded   -- continuous; bounds are derived from training data at scaling time
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ._util import ValidationError

BINARY = "binary"
BOUNDED = "bounded"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class VariableSpec:
    name: str
    kind: str
    lo: float | None = None
    hi: float | None = None

    def __post_init__(self):
        if self.kind not in (BINARY, BOUNDED, UNBOUNDED):
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.kind == BINARY and (self.lo, self.hi) != (0.0, 1.0):
            raise ValueError(f"binary variable {self.name} must have bounds (0, 1)")
        if self.lo is not None and self.hi is not None and not self.lo < self.hi:
            raise ValueError(f"variable {self.name}: lo must be below hi")

    @property
    def has_bounds(self) -> bool:
        return self.lo is not None and self.hi is not None

    def with_bounds(self, lo: float, hi: float) -> "VariableSpec":
        """Copy of this spec with data-derived bounds filled in."""
        return replace(self, lo=float(lo), hi=float(hi))

    def check_value(self, value: float, context: str = "") -> None:
        where = f" in {context}" if context else ""
        if value != value or value in (float("inf"), float("-inf")):
            raise ValidationError(f"{self.name}{where}: non-finite value {value!r}")
        if self.kind == BINARY and value not in (0.0, 1.0):
            raise ValidationError(f"{self.name}{where}: expected 0 or 1, got {value}")
        if self.kind == BOUNDED and not (self.lo <= value <= self.hi):
            raise ValidationError(
                f"{self.name}{where}: {value} outside [{self.lo}, {self.hi}]"
            )


# Canonical ordering; CSV columns and feature matrices follow it.
VARIABLES: tuple[VariableSpec, ...] = (
    VariableSpec("democracy", BOUNDED, -10.0, 10.0),
    VariableSpec("allies", BINARY, 0.0, 1.0),
    VariableSpec("contingency", BINARY, 0.0, 1.0),
    VariableSpec("distance", UNBOUNDED),
    VariableSpec("capability", UNBOUNDED),
    VariableSpec("dependency", UNBOUNDED),
    VariableSpec("majorpower", BINARY, 0.0, 1.0),
)

VARIABLE_NAMES: tuple[str, ...] = tuple(s.name for s in VARIABLES)
N_VARIABLES = len(VARIABLES)
_INDEX = {s.name: i for i, s in enumerate(VARIABLES)}


def variable_index(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise KeyError(f"unknown variable {name!r}; expected one of {VARIABLE_NAMES}") from None
