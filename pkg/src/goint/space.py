"""Finite ground spaces, subsets and fuzzy functions.

The ground space is a finite, ordered set of labeled points; subsets are
encoded as characteristic bit patterns over the canonical point order.
Fuzzy functions map each point into [0,1].  On a finite space every subset
is closed and every function is continuous, so the topological side
conditions of the underlying theory (compactness, upper semicontinuity of
capacities) are vacuous here and carry no runtime representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import ConstructionError

__all__ = ["FiniteSpace", "SubsetRef", "FuzzyFunction", "level_set"]

# Full subset tables have 2**n entries; beyond this exhaustive validation
# stops being feasible in bounded memory.
MAX_TABLE_POINTS = 20


@dataclass(frozen=True)
class FiniteSpace:
    """An ordered set of distinct point labels; order fixes point indexing."""

    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str]) -> None:
        labels = tuple(str(x) for x in labels)
        if not labels:
            raise ConstructionError("a space needs at least one point")
        if len(set(labels)) != len(labels):
            raise ConstructionError(f"duplicate point labels: {labels}")
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown point label {label!r}") from None

    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def subset(self, labels: Iterable[str]) -> "SubsetRef":
        mask = 0
        for lab in labels:
            mask |= 1 << self.index(lab)
        return SubsetRef(self, mask)

    def empty(self) -> "SubsetRef":
        return SubsetRef(self, 0)

    def full(self) -> "SubsetRef":
        return SubsetRef(self, self.full_mask())

    def subsets(self) -> Iterator["SubsetRef"]:
        """All 2**n subsets in mask order; refuses spaces beyond the table cap."""
        if self.size > MAX_TABLE_POINTS:
            raise ConstructionError(
                f"exhaustive subset enumeration capped at {MAX_TABLE_POINTS} points "
                f"(space has {self.size})"
            )
        for mask in range(1 << self.size):
            yield SubsetRef(self, mask)

    def to_dict(self) -> dict:
        return {"points": list(self.labels)}

    @classmethod
    def from_dict(cls, doc: dict) -> "FiniteSpace":
        return cls(doc["points"])


@dataclass(frozen=True)
class SubsetRef:
    """A subset of a FiniteSpace, held as a characteristic bit pattern."""

    space: FiniteSpace
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask <= self.space.full_mask():
            raise ConstructionError(
                f"mask {self.mask:#x} out of range for a {self.space.size}-point space"
            )

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def is_empty(self) -> bool:
        return self.mask == 0

    def is_full(self) -> bool:
        return self.mask == self.space.full_mask()

    def contains_index(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def indices(self) -> Iterator[int]:
        for i in range(self.space.size):
            if self.mask >> i & 1:
                yield i

    def labels(self) -> tuple[str, ...]:
        return tuple(self.space.labels[i] for i in self.indices())

    def issubset(self, other: "SubsetRef") -> bool:
        return self.mask & ~other.mask == 0

    def union(self, other: "SubsetRef") -> "SubsetRef":
        return SubsetRef(self.space, self.mask | other.mask)

    def with_index(self, i: int) -> "SubsetRef":
        return SubsetRef(self.space, self.mask | 1 << i)


@dataclass(frozen=True)
class FuzzyFunction:
    """A map from the points of a FiniteSpace into [0,1]."""

    space: FiniteSpace
    values: tuple[float, ...]

    def __init__(self, space: FiniteSpace, values: Iterable[float]) -> None:
        values = tuple(float(v) for v in values)
        if len(values) != space.size:
            raise ConstructionError(
                f"need one value per point: got {len(values)} for {space.size} points"
            )
        for lab, v in zip(space.labels, values):
            if not 0.0 <= v <= 1.0:
                raise ConstructionError(f"value {v!r} at point {lab!r} outside [0,1]")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, space: FiniteSpace, c: float) -> "FuzzyFunction":
        return cls(space, (float(c),) * space.size)

    @classmethod
    def from_mapping(cls, space: FiniteSpace, mapping: dict) -> "FuzzyFunction":
        missing = [lab for lab in space.labels if lab not in mapping]
        if missing:
            raise ConstructionError(f"function is missing values for points {missing}")
        extra = [lab for lab in mapping if lab not in space.labels]
        if extra:
            raise ConstructionError(f"function names unknown points {extra}")
        return cls(space, (mapping[lab] for lab in space.labels))

    def __call__(self, label: str) -> float:
        return self.values[self.space.index(label)]

    def distinct_positive_values(self) -> tuple[float, ...]:
        """The distinct strictly positive values, ascending."""
        return tuple(sorted({v for v in self.values if v > 0.0}))

    def join(self, other: "FuzzyFunction") -> "FuzzyFunction":
        """Pointwise lattice join (maximum)."""
        _same_space(self, other)
        return FuzzyFunction(self.space, map(max, self.values, other.values))

    def leq(self, other: "FuzzyFunction") -> bool:
        _same_space(self, other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def to_dict(self) -> dict:
        return dict(zip(self.space.labels, self.values))


def _same_space(f: FuzzyFunction, g: FuzzyFunction) -> None:
    if f.space != g.space:
        raise ConstructionError("functions live on different spaces")


def level_set(f: FuzzyFunction, t: float) -> SubsetRef:
    """The set {x : f(x) >= t}; comparison is exact on the stored values.

    At t = 0 this is the whole space; above max(f) it is empty.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"threshold {t!r} outside [0,1]")
    mask = 0
    for i, v in enumerate(f.values):
        if v >= t:
            mask |= 1 << i
    return SubsetRef(f.space, mask)
