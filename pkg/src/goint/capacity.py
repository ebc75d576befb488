"""Capacities (monotone normalized set functions) on finite spaces.

Five constructive kinds are supported: explicit tables, possibility
measures (max of point densities), additive measures, Sugeno
lambda-measures, and distorted probabilities.  The underlying theory also
asks capacities to be upper semicontinuous; on a finite space that axiom
has no content, so it is documented here and not checked.

Parametric kinds return exactly 0 on the empty set and exactly 1 on the
full space, with the kind formula clamped into [0,1] in between; this
keeps the boundary identities of the integral layer exact in floating
point.  Table capacities return the raw stored value so that
`validate_capacity` can expose stored violations.

Subset values for additive-style kinds accumulate in canonical point
order; with round-to-nearest arithmetic this keeps float subset values
monotone under inclusion, so exhaustive monotonicity validation is not
tripped by rounding noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import ConstructionError, IncompleteTableError
from .operators import PowerDistortion, validate_distortion
from .space import MAX_TABLE_POINTS, FiniteSpace, SubsetRef

__all__ = [
    "Capacity",
    "ValidationReport",
    "Violation",
    "capacity_value",
    "validate_capacity",
    "build_capacity",
    "table_capacity",
    "possibility_capacity",
    "additive_capacity",
    "sugeno_lambda_capacity",
    "distorted_capacity",
    "solve_sugeno_lambda",
    "expand_to_table",
    "CAPACITY_KINDS",
]

CAPACITY_KINDS = ("table", "possibility", "additive", "sugeno_lambda", "distorted")

LAMBDA_TOL = 1e-10
WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Capacity:
    """A set function on the subsets of `space`, given by `kind` and its data.

    Construction performs only structural checks; the capacity axioms are
    the business of `validate_capacity` (and the `build_*` helpers, which
    gate on it).
    """

    space: FiniteSpace
    kind: str
    table: tuple[float | None, ...] | None = None  # indexed by subset mask
    densities: tuple[float, ...] | None = None  # possibility / sugeno_lambda
    weights: tuple[float, ...] | None = None  # additive / distorted base
    lam: float | None = None  # sugeno_lambda
    distortion: Callable | None = None  # distorted

    def __post_init__(self) -> None:
        if self.kind not in CAPACITY_KINDS:
            raise ConstructionError(f"unknown capacity kind {self.kind!r}")

    def value(self, subset: SubsetRef) -> float:
        return capacity_value(self, subset)

    def describe(self) -> dict:
        """JSON-ready description; inverse of `build_capacity`."""
        doc: dict = {"kind": self.kind}
        labels = self.space.labels
        if self.kind == "table":
            doc["entries"] = [
                {"subset": list(SubsetRef(self.space, m).labels()), "value": v}
                for m, v in enumerate(self.table)
                if v is not None
            ]
        elif self.kind == "possibility":
            doc["densities"] = dict(zip(labels, self.densities))
        elif self.kind == "additive":
            doc["weights"] = dict(zip(labels, self.weights))
        elif self.kind == "sugeno_lambda":
            doc["densities"] = dict(zip(labels, self.densities))
            doc["lambda"] = self.lam
        elif self.kind == "distorted":
            doc["weights"] = dict(zip(labels, self.weights))
            if isinstance(self.distortion, PowerDistortion):
                doc["distortion"] = {"name": "power", "p": self.distortion.p}
            else:
                raise ConstructionError("custom distortions have no serialized form")
        return doc


def _clamp01(x: float) -> float:
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


def capacity_value(nu: Capacity, subset: SubsetRef) -> float:
    """nu(A) per the kind's formula.

    Raises IncompleteTableError for a table capacity missing the entry.
    """
    if subset.space != nu.space:
        raise ConstructionError("subset belongs to a different space")
    mask = subset.mask

    if nu.kind == "table":
        v = nu.table[mask]
        if v is None:
            raise IncompleteTableError(
                f"table capacity has no entry for subset {subset.labels()!r}"
            )
        return v

    if mask == 0:
        return 0.0
    if subset.is_full():
        return 1.0

    if nu.kind == "possibility":
        best = 0.0
        for i in subset.indices():
            d = nu.densities[i]
            if d > best:
                best = d
        return _clamp01(best)

    if nu.kind == "additive":
        total = 0.0
        for i in subset.indices():
            total += nu.weights[i]
        return _clamp01(total)

    if nu.kind == "sugeno_lambda":
        lam = nu.lam
        if lam == 0.0:
            total = 0.0
            for i in subset.indices():
                total += nu.densities[i]
            return _clamp01(total)
        prod = 1.0
        for i in subset.indices():
            prod *= 1.0 + lam * nu.densities[i]
        return _clamp01((prod - 1.0) / lam)

    # distorted
    total = 0.0
    for i in subset.indices():
        total += nu.weights[i]
    return _clamp01(float(nu.distortion(_clamp01(total))))


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[tuple[str, ...], ...]
    observed: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "witness": [list(w) for w in self.witness],
            "observed": list(self.observed),
        }


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violations: tuple[Violation, ...]
    mode: str  # "exhaustive" | "sampled"

    def __post_init__(self) -> None:
        assert self.passed == (not self.violations)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "mode": self.mode,
            "violations": [v.to_dict() for v in self.violations],
        }


MAX_REPORTED_VIOLATIONS = 256


def _checked_value(nu: Capacity, mask: int, violations: list[Violation]) -> float:
    sub = SubsetRef(nu.space, mask)
    try:
        v = capacity_value(nu, sub)
    except IncompleteTableError:
        if len(violations) < MAX_REPORTED_VIOLATIONS:
            violations.append(Violation("totality", (sub.labels(),), ()))
        return math.nan
    if not 0.0 <= v <= 1.0 and len(violations) < MAX_REPORTED_VIOLATIONS:
        violations.append(Violation("range", (sub.labels(),), (v,)))
    return v


def validate_capacity(
    nu: Capacity, *, seed: int = 0, sample_pairs: int = 4096
) -> ValidationReport:
    """Check normalization and monotonicity.

    Up to 20 points the check is exhaustive over all single-point
    insertions A -> A+{x} (which is sufficient for full monotonicity);
    beyond that a seeded random sample of insertion pairs is checked and
    the report is flagged "sampled".  Violations are report content,
    never exceptions; at most 256 are recorded.
    """
    n = nu.space.size
    violations: list[Violation] = []
    full = nu.space.full_mask()

    empty_v = _checked_value(nu, 0, violations)
    if not math.isnan(empty_v) and empty_v != 0.0:
        violations.append(Violation("normalization", ((),), (empty_v,)))
    full_v = _checked_value(nu, full, violations)
    if not math.isnan(full_v) and full_v != 1.0:
        violations.append(Violation("normalization", (nu.space.labels,), (full_v,)))

    def record_pair(lo_mask: int, hi_mask: int, lo: float, hi: float) -> None:
        violations.append(
            Violation(
                "monotonicity",
                (SubsetRef(nu.space, lo_mask).labels(), SubsetRef(nu.space, hi_mask).labels()),
                (lo, hi),
            )
        )

    if n <= MAX_TABLE_POINTS:
        mode = "exhaustive"
        vals = np.fromiter(
            (_checked_value(nu, mask, violations) for mask in range(1 << n)),
            dtype=np.float64,
            count=1 << n,
        )
        masks = np.arange(1 << n, dtype=np.int64)
        for i in range(n):
            lo_masks = masks[(masks >> i) & 1 == 0]
            lo_vals = vals[lo_masks]
            hi_vals = vals[lo_masks | (1 << i)]
            for j in np.flatnonzero(lo_vals > hi_vals):  # NaN (missing) compares false
                if len(violations) >= MAX_REPORTED_VIOLATIONS:
                    break
                record_pair(
                    int(lo_masks[j]), int(lo_masks[j]) | (1 << i),
                    float(lo_vals[j]), float(hi_vals[j]),
                )
    else:
        mode = "sampled"
        rng = np.random.default_rng(seed)
        cache: dict[int, float] = {}

        def value_of(mask: int) -> float:
            if mask not in cache:
                cache[mask] = _checked_value(nu, mask, violations)
            return cache[mask]

        for _ in range(sample_pairs):
            if len(violations) >= MAX_REPORTED_VIOLATIONS:
                break
            mask = int.from_bytes(rng.bytes((n + 7) // 8), "little") & full
            i = int(rng.integers(0, n))
            mask &= ~(1 << i)
            lo, hi = value_of(mask), value_of(mask | 1 << i)
            if not (math.isnan(lo) or math.isnan(hi)) and lo > hi:
                record_pair(mask, mask | 1 << i, lo, hi)

    return ValidationReport(not violations, tuple(violations[:MAX_REPORTED_VIOLATIONS]), mode)


def _density_vector(space: FiniteSpace, data, what: str) -> tuple[float, ...]:
    if isinstance(data, Mapping):
        missing = [lab for lab in space.labels if lab not in data]
        if missing:
            raise ConstructionError(f"{what} missing for points {missing}")
        extra = [lab for lab in data if lab not in space.labels]
        if extra:
            raise ConstructionError(f"{what} given for unknown points {extra}")
        vec = tuple(float(data[lab]) for lab in space.labels)
    else:
        vec = tuple(float(x) for x in data)
        if len(vec) != space.size:
            raise ConstructionError(f"need one {what} entry per point")
    for lab, v in zip(space.labels, vec):
        if not 0.0 <= v <= 1.0:
            raise ConstructionError(f"{what} value {v!r} at {lab!r} outside [0,1]")
    return vec


def _gate(nu: Capacity) -> Capacity:
    report = validate_capacity(nu)
    if not report.passed:
        first = report.violations[0]
        raise ConstructionError(
            f"{nu.kind} capacity fails {first.axiom} at witness {first.witness} "
            f"(observed {first.observed})"
        )
    return nu


def table_capacity(space: FiniteSpace, entries) -> Capacity:
    """Build a total table capacity; `entries` maps subsets to values.

    Subsets are given as iterables of labels (or as raw masks).  All 2**n
    subsets must be present; the result must pass validate_capacity.
    """
    if space.size > MAX_TABLE_POINTS:
        raise ConstructionError(
            f"table capacities capped at {MAX_TABLE_POINTS} points (space has {space.size})"
        )
    table: list[float | None] = [None] * (1 << space.size)
    items = entries.items() if isinstance(entries, Mapping) else entries
    for subset, value in items:
        mask = subset if isinstance(subset, int) else space.subset(subset).mask
        value = float(value)
        if not 0.0 <= value <= 1.0:
            raise ConstructionError(f"table value {value!r} outside [0,1]")
        if table[mask] is not None:
            raise ConstructionError(
                f"duplicate table entry for subset {SubsetRef(space, mask).labels()!r}"
            )
        table[mask] = value
    missing = table.count(None)
    if missing:
        raise IncompleteTableError(
            f"table capacity must be total: {missing} of {len(table)} subsets missing"
        )
    return _gate(Capacity(space, "table", table=tuple(table)))


def possibility_capacity(space: FiniteSpace, densities) -> Capacity:
    """nu(A) = max of point densities over A; requires max density = 1."""
    dens = _density_vector(space, densities, "density")
    if max(dens) != 1.0:
        raise ConstructionError(f"possibility densities must attain 1 (max is {max(dens)!r})")
    return _gate(Capacity(space, "possibility", densities=dens))


def additive_capacity(space: FiniteSpace, weights) -> Capacity:
    """nu(A) = sum of point weights over A; weights must sum to 1."""
    w = _density_vector(space, weights, "weight")
    total = math.fsum(w)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ConstructionError(f"additive weights must sum to 1 (sum is {total!r})")
    return _gate(Capacity(space, "additive", weights=w))


def solve_sugeno_lambda(densities: Iterable[float]) -> float:
    """The lambda with prod(1 + lambda*g_i) = 1 + lambda, lambda in (-1, inf).

    Bisection to width 1e-10 on G(lambda) = expm1(sum log1p(lambda*g_i)) / lambda - 1,
    whose limit at 0 is sum(g) - 1; the log1p/expm1 form stays well
    conditioned near 0.  Falls back to 0 (additive) when the densities
    already sum to 1.
    """
    g = [float(x) for x in densities]
    if any(not 0.0 < x < 1.0 for x in g):
        raise ConstructionError("sugeno-lambda auto solver needs densities strictly inside (0,1)")
    s = math.fsum(g)
    if abs(s - 1.0) <= WEIGHT_SUM_TOL:
        return 0.0

    def G(lam: float) -> float:
        if lam == 0.0:
            return s - 1.0
        return math.expm1(math.fsum(math.log1p(lam * x) for x in g)) / lam - 1.0

    if s < 1.0:
        lo, hi = 0.0, 1.0
        while G(hi) < 0.0:
            hi *= 2.0
            if hi > 1e18:
                raise ConstructionError("sugeno-lambda root not bracketed (lambda grows unbounded)")
    else:
        lo, hi = -1.0, 0.0
        # G(-1) = -prod(1 - g_i) < 0 < G(0) = s - 1.

    while hi - lo > LAMBDA_TOL:
        mid = 0.5 * (lo + hi)
        if G(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sugeno_lambda_capacity(space: FiniteSpace, densities, lam="auto") -> Capacity:
    """Sugeno lambda-measure from point densities.

    lam="auto" solves the normalization equation; an explicit lambda is
    accepted and then held to the same validation gate (an inconsistent
    lambda fails normalization or monotonicity and raises).
    """
    dens = _density_vector(space, densities, "density")
    if lam == "auto":
        lam_value = solve_sugeno_lambda(dens)
    else:
        lam_value = float(lam)
        if not lam_value > -1.0:
            raise ConstructionError(f"lambda must lie in (-1, inf), got {lam_value!r}")
    return _gate(Capacity(space, "sugeno_lambda", densities=dens, lam=lam_value))


def distorted_capacity(space: FiniteSpace, weights, distortion) -> Capacity:
    """nu(A) = h(sum of base weights over A) for a valid distortion h."""
    w = _density_vector(space, weights, "weight")
    total = math.fsum(w)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ConstructionError(f"distorted base weights must sum to 1 (sum is {total!r})")
    if isinstance(distortion, Mapping):
        if distortion.get("name") != "power":
            raise ConstructionError(f"unknown distortion family {distortion.get('name')!r}")
        distortion = PowerDistortion(float(distortion["p"]))
    validate_distortion(distortion)
    return _gate(Capacity(space, "distorted", weights=w, distortion=distortion))


def build_capacity(space: FiniteSpace, spec: Mapping) -> Capacity:
    """Dispatch on a JSON-style capacity description (see the CLI schema)."""
    kind = spec.get("kind")
    if kind == "table":
        entries = spec.get("entries")
        if entries is None:
            raise ConstructionError("table capacity needs an 'entries' list")
        return table_capacity(space, [(e["subset"], e["value"]) for e in entries])
    if kind == "possibility":
        return possibility_capacity(space, spec["densities"])
    if kind == "additive":
        return additive_capacity(space, spec["weights"])
    if kind == "sugeno_lambda":
        return sugeno_lambda_capacity(space, spec["densities"], spec.get("lambda", "auto"))
    if kind == "distorted":
        return distorted_capacity(space, spec["weights"], spec["distortion"])
    raise ConstructionError(f"unknown capacity kind {kind!r}")


def expand_to_table(nu: Capacity) -> Capacity:
    """Rewrite any capacity as an explicit full table (n <= 20)."""
    table = tuple(capacity_value(nu, sub) for sub in nu.space.subsets())
    return Capacity(nu.space, "table", table=table)
