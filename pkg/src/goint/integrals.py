"""The four integrals: Sugeno, t-normed, Choquet, and the generalized GO form.

Sugeno and the t-normed integral are computed by their own sorted-value
formulas, independent of the level-profile machinery; the GO integral goes
through `build_level_profile` + `apply_gpg`.  Keeping the routes separate
is what lets the reduction identities (GO with min/max collapses to
Sugeno, GO with */max to the t-normed integral) act as cross-checks
instead of tautologies.

Every path enumerates the distinct positive values of the integrand: the
t=0 term contributes O(nu(X), 0) = 0 under the overlap axioms, and within
each value segment the objective is nondecreasing in t, so the supremum
over [0,1] is attained at the enumerated right endpoints.  Operator
admissibility (t-norm for the star, t-overlap for O) is certified once
per operator instance and memoized; `certify=False` bypasses the gate for
negative-control experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

from .capacity import Capacity, capacity_value
from .errors import ConfigurationError, ConstructionError
from .grouping import (
    DiscreteGpg,
    GpgFunctional,
    apply_gpg,
    build_level_profile,
    kernel_grid_resolution,
)
from .operators import BinaryOperator, require_t_norm, require_t_overlap
from .space import FuzzyFunction, level_set

__all__ = [
    "IntegralConfig",
    "sugeno_integral",
    "t_normed_integral",
    "go_integral",
    "choquet_integral",
    "discrete_go_aggregate",
]


def _shared_space(nu: Capacity, f: FuzzyFunction) -> None:
    if nu.space != f.space:
        raise ConstructionError("capacity and function live on different spaces")


def sugeno_integral(nu: Capacity, f: FuzzyFunction) -> float:
    """max over the distinct positive values v of min(v, nu({f >= v}))."""
    _shared_space(nu, f)
    best = 0.0
    for v in f.distinct_positive_values():
        cand = min(v, capacity_value(nu, level_set(f, v)))
        if cand > best:
            best = cand
    return best


def t_normed_integral(
    nu: Capacity, f: FuzzyFunction, star: BinaryOperator, *, certify: bool = True
) -> float:
    """max over the distinct positive values v of star(nu({f >= v}), v)."""
    _shared_space(nu, f)
    if certify:
        require_t_norm(star)
    best = 0.0
    for v in f.distinct_positive_values():
        cand = star(capacity_value(nu, level_set(f, v)), v)
        if cand > best:
            best = cand
    return best


def go_integral(
    nu: Capacity,
    f: FuzzyFunction,
    overlap: BinaryOperator,
    gpg: GpgFunctional,
    *,
    grid_n: int | None = None,
    certify: bool = True,
) -> float:
    """G applied to the level profile of (nu, f, O)."""
    _shared_space(nu, f)
    if certify:
        require_t_overlap(overlap)
    return apply_gpg(gpg, build_level_profile(nu, f, overlap), grid_n)


def choquet_integral(nu: Capacity, f: FuzzyFunction) -> float:
    """Sum of (v_i - v_{i-1}) * nu({f >= v_i}) over sorted distinct values."""
    _shared_space(nu, f)
    total = 0.0
    prev = 0.0
    for v in f.distinct_positive_values():
        total += (v - prev) * capacity_value(nu, level_set(f, v))
        prev = v
    return total


def discrete_go_aggregate(
    nu: Capacity,
    f: FuzzyFunction,
    overlap: BinaryOperator,
    gn: DiscreteGpg,
    *,
    certify: bool = True,
) -> float:
    """Apply an n-ary grouping operator to the breakpoint vector O(c_i, w_i).

    Bridges to the discrete constructions the n-ary grouping operators come
    from; with gn = max_n it coincides with the max-functional GO integral.
    The arity varies with f, so this aggregate is exploratory and excluded
    from the monotonicity suites.  f identically 0 returns 0 by convention.
    """
    _shared_space(nu, f)
    if certify:
        require_t_overlap(overlap)
    m = build_level_profile(nu, f, overlap)
    if m.is_empty():
        return 0.0
    xs = m.overlap.eval_many(list(m.plateaus), list(m.breakpoints))
    return gn.apply(xs)


@dataclass(frozen=True)
class IntegralConfig:
    """A validated integral choice: kind plus whatever operators it needs.

    `certify=False` skips the operator admissibility gates (used by the
    negative-control suites, which need deliberately broken operators).
    """

    kind: str  # "sugeno" | "tnormed" | "choquet" | "go"
    star: BinaryOperator | None = None
    overlap: BinaryOperator | None = None
    gpg: GpgFunctional | None = None
    grid_n: int | None = None
    certify: bool = True

    def __post_init__(self) -> None:
        if self.kind not in ("sugeno", "tnormed", "choquet", "go"):
            raise ConfigurationError(f"unknown integral kind {self.kind!r}")
        if self.kind == "tnormed":
            if self.star is None:
                raise ConfigurationError("tnormed integral needs a star operator")
            if self.certify:
                require_t_norm(self.star)
        if self.kind == "go":
            if self.overlap is None or self.gpg is None:
                raise ConfigurationError("go integral needs an overlap operator and a grouping functional")
            if self.certify:
                require_t_overlap(self.overlap)

    def evaluate(self, nu: Capacity, f: FuzzyFunction) -> float:
        if self.kind == "sugeno":
            return sugeno_integral(nu, f)
        if self.kind == "tnormed":
            return t_normed_integral(nu, f, self.star, certify=False)
        if self.kind == "choquet":
            return choquet_integral(nu, f)
        return go_integral(
            nu, f, self.overlap, self.gpg, grid_n=self.grid_n, certify=False
        )

    def grid_resolution(self) -> int | None:
        """The kernel grid resolution this config evaluates with, if any."""
        if self.kind == "go" and self.gpg.variant == "kernel":
            return kernel_grid_resolution(self.grid_n)
        return None

    def name(self) -> str:
        if self.kind == "sugeno":
            return "sugeno"
        if self.kind == "choquet":
            return "choquet"
        if self.kind == "tnormed":
            return f"tnormed[{self.star.name()}]"
        return f"go[{self.overlap.name()}|{self.gpg.name()}]"

    def to_dict(self) -> dict:
        doc: dict = {"kind": self.kind}
        if self.kind == "tnormed":
            doc["star"] = self.star.to_dict()
        if self.kind == "go":
            doc["overlap"] = self.overlap.to_dict()
            doc["gpg"] = self.gpg.to_dict()
            if self.grid_n is not None:
                doc["grid_n"] = self.grid_n
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "IntegralConfig":
        kind = doc.get("kind")
        if kind == "sugeno":
            return cls("sugeno")
        if kind == "choquet":
            return cls("choquet")
        if kind == "tnormed":
            star = doc.get("star")
            if star is None:
                raise ConfigurationError("tnormed integral needs a 'star' operator")
            return cls("tnormed", star=BinaryOperator.from_dict(star))
        if kind == "go":
            overlap = doc.get("overlap")
            gpg = doc.get("gpg")
            if overlap is None or gpg is None:
                raise ConfigurationError("go integral needs 'overlap' and 'gpg' entries")
            return cls(
                "go",
                overlap=BinaryOperator.from_dict(overlap),
                gpg=GpgFunctional.from_dict(gpg),
                grid_n=doc.get("grid_n"),
            )
        raise ConfigurationError(f"unknown integral kind {kind!r}")
