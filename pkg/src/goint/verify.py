"""Brute-force oracles and property harnesses.

`brute_force_go` re-evaluates the integral from the definition: m(t) is
computed pointwise on a dense threshold grid straight from level sets and
capacity values, never through the exact breakpoint path, and the grouping
functional is applied directly to those samples.  The property suites
check the boundary/monotonicity theorem, comonotone maxitivity,
star-homogeneity, the upper-semicontinuity surrogate, and run the open
generalization question as a pure counterexample search.

Trials are independent: trial i draws its generator from (seed, i), so
reports are deterministic and order-independent.  Every recorded violation
carries the full instance and is replayable via `replay_violation`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capacity import (
    Capacity,
    build_capacity,
    capacity_value,
    solve_sugeno_lambda,
)
from .errors import ConfigurationError, ConstructionError
from .grouping import GpgFunctional, LevelProfile, build_level_profile
from .integrals import IntegralConfig
from .operators import BinaryOperator, PowerDistortion
from .space import FiniteSpace, FuzzyFunction, SubsetRef

__all__ = [
    "GridSpec",
    "PropertyReport",
    "brute_force_go",
    "run_theorem1_suite",
    "generate_comonotone_pair",
    "is_comonotone",
    "check_comonotone_maxitivity",
    "check_star_homogeneity",
    "search_problem1",
    "check_profile_usc",
    "replay_violation",
    "random_space",
    "random_function",
    "random_capacity",
    "capacity_pool",
]

EXACT_TOL = 1e-9  # identities that hold exactly along exact evaluation paths
KERNEL_TOL = 1e-3  # identities mediated by kernel grid approximation


@dataclass(frozen=True)
class GridSpec:
    """Threshold grid for the definition-level oracle."""

    step: float = 1e-4
    include_breakpoints: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.step <= 0.5:
            raise ConstructionError(f"grid step must lie in (0, 0.5], got {self.step!r}")

    def thresholds(self, f: FuzzyFunction | None = None) -> np.ndarray:
        ts = np.arange(0.0, 1.0, self.step)
        parts = [ts, np.asarray([1.0])]
        if self.include_breakpoints and f is not None:
            parts.append(np.asarray(f.distinct_positive_values()))
        return np.unique(np.concatenate(parts))


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of a property suite; passes iff no violations were recorded."""

    name: str
    trials: int
    violations: tuple[dict, ...]
    seed: int
    outcome: str | None = None
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "property": self.name,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "outcome": self.outcome,
            "violations": list(self.violations),
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# Random instance generation


def random_space(rng: np.random.Generator, min_points: int = 1, max_points: int = 8) -> FiniteSpace:
    n = int(rng.integers(min_points, max_points + 1))
    return FiniteSpace(tuple(f"x{i}" for i in range(n)))


def random_function(rng: np.random.Generator, space: FiniteSpace) -> FuzzyFunction:
    return FuzzyFunction(space, rng.uniform(0.0, 1.0, size=space.size))


def random_capacity(
    rng: np.random.Generator, space: FiniteSpace, kind: str | None = None
) -> Capacity:
    """A random capacity of the given kind (random kind when omitted).

    Instances are monotone by construction, so the validation gate is
    skipped here for speed; the generator itself is pinned by the table-
    expansion validation property in the test suite.  A one-point space
    cannot carry a proper lambda-measure (its density would have to be 1),
    so that combination degrades to additive.
    """
    n = space.size
    kinds = ("table", "possibility", "additive", "sugeno_lambda", "distorted")
    if kind is None:
        kind = kinds[int(rng.integers(0, len(kinds)))]
    if kind == "sugeno_lambda" and n == 1:
        kind = "additive"

    if kind == "table":
        raw = np.zeros(1 << n)
        for mask in range(1, 1 << n):
            base = 0.0
            for i in range(n):
                if mask >> i & 1:
                    prev = raw[mask & ~(1 << i)]
                    if prev > base:
                        base = prev
            bump = rng.uniform(0.0, 1.0) if rng.uniform() < 0.7 else 0.0
            raw[mask] = base + bump
        top = raw[-1]
        if top == 0.0:
            raw[-1] = top = 1.0
        table = tuple(float(v / top) for v in raw)
        return Capacity(space, "table", table=table)

    if kind == "possibility":
        dens = rng.uniform(0.0, 1.0, size=n)
        dens[int(rng.integers(0, n))] = 1.0
        return Capacity(space, "possibility", densities=tuple(float(d) for d in dens))

    if kind == "additive":
        u = rng.uniform(0.01, 1.0, size=n)
        w = u / u.sum()
        return Capacity(space, "additive", weights=tuple(float(x) for x in w))

    if kind == "sugeno_lambda":
        dens = rng.uniform(0.05, 0.95, size=n)
        lam = solve_sugeno_lambda(dens)
        return Capacity(
            space, "sugeno_lambda", densities=tuple(float(d) for d in dens), lam=lam
        )

    u = rng.uniform(0.01, 1.0, size=n)
    w = u / u.sum()
    p = float(rng.uniform(0.3, 3.0))
    return Capacity(
        space, "distorted", weights=tuple(float(x) for x in w), distortion=PowerDistortion(p)
    )


def capacity_pool(
    seed: int, space_sizes: tuple[int, ...], stream: int = 2**31
) -> tuple[Capacity, ...]:
    """One capacity per (kind, size), drawn from a dedicated substream."""
    rng = np.random.default_rng((seed, stream))
    pool = []
    for n in space_sizes:
        space = FiniteSpace(tuple(f"x{i}" for i in range(n)))
        for kind in ("table", "possibility", "additive", "sugeno_lambda", "distorted"):
            pool.append(random_capacity(rng, space, kind))
    return tuple(pool)


# ---------------------------------------------------------------------------
# Definition-level oracle


def brute_force_go(
    nu: Capacity,
    f: FuzzyFunction,
    overlap: BinaryOperator,
    gpg: GpgFunctional,
    grid: GridSpec = GridSpec(),
) -> float:
    """GO integral from first principles on a dense threshold grid.

    For every grid threshold t the level set and its capacity are computed
    definitionally (m(t) = O(nu({f >= t}), t)); the grouping functional is
    then applied directly to the samples: plain max for the max variant,
    distortion of the max for the distorted variant, max of g(t, m(t)) for
    the kernel variant.  Identical level sets share one capacity lookup,
    which is a cache, not a change of method.
    """
    if nu.space != f.space:
        raise ConstructionError("capacity and function live on different spaces")
    ts = grid.thresholds(f)
    vals = np.asarray(f.values)
    member = vals[None, :] >= ts[:, None]
    powers = 1 << np.arange(f.space.size, dtype=np.int64)
    mask_ids = member @ powers
    unique, inverse = np.unique(mask_ids, return_inverse=True)
    caps = np.asarray(
        [capacity_value(nu, SubsetRef(f.space, int(m))) for m in unique]
    )
    ms = overlap.eval_many(caps[inverse], ts)

    if gpg.variant == "max":
        return float(np.max(ms, initial=0.0))
    if gpg.variant == "distorted":
        return float(gpg.distortion(float(np.max(ms, initial=0.0))))
    gs = np.asarray(gpg.kernel(ts, ms), float)
    return float(np.max(gs, initial=0.0))


# ---------------------------------------------------------------------------
# Violation plumbing


def _instance_doc(nu: Capacity, functions: dict[str, FuzzyFunction]) -> dict:
    doc = {
        "space": nu.space.to_dict(),
        "capacity": nu.describe(),
    }
    for name, fn in functions.items():
        doc[name] = fn.to_dict()
    return doc


def _config_doc(config: IntegralConfig) -> dict | None:
    try:
        return config.to_dict()
    except ConstructionError:
        return None  # custom operators: replay needs the in-memory config


def _rebuild(violation: dict) -> tuple[FiniteSpace, Capacity]:
    space = FiniteSpace.from_dict(violation["space"])
    nu = build_capacity(space, violation["capacity"])
    return space, nu


def replay_violation(violation: dict, config: IntegralConfig | None = None) -> float:
    """Recompute a stored violation's gap from its instance description.

    The config argument overrides the serialized one (necessary when the
    violating configuration used custom, non-serializable operators).
    """
    check = violation["check"]
    if check in ("usc-plateau", "usc-breakpoint"):
        profile = LevelProfile(
            BinaryOperator.from_dict(violation["overlap"]),
            tuple(violation["breakpoints"]),
            tuple(violation["plateaus"]),
        )
        report = check_profile_usc(profile)
        for v in report.violations:
            if v["check"] == check and v["index"] == violation["index"]:
                return v["gap"]
        return 0.0

    if config is None:
        if violation.get("config") is None:
            raise ConfigurationError(
                "violation has no serialized config; pass the config object"
            )
        config = IntegralConfig.from_dict(violation["config"])
        config = IntegralConfig(
            config.kind, star=config.star, overlap=config.overlap,
            gpg=config.gpg, grid_n=config.grid_n, certify=False,
        )
    space, nu = _rebuild(violation)

    if check == "boundary-one":
        return abs(config.evaluate(nu, FuzzyFunction.constant(space, 1.0)) - 1.0)
    if check == "boundary-zero":
        return abs(config.evaluate(nu, FuzzyFunction.constant(space, 0.0)))
    if check == "monotonicity":
        f = FuzzyFunction.from_mapping(space, violation["f"])
        g = FuzzyFunction.from_mapping(space, violation["g"])
        return config.evaluate(nu, f) - config.evaluate(nu, g)
    if check == "comonotone-maxitivity":
        f = FuzzyFunction.from_mapping(space, violation["f"])
        g = FuzzyFunction.from_mapping(space, violation["g"])
        left = config.evaluate(nu, f.join(g))
        right = max(config.evaluate(nu, f), config.evaluate(nu, g))
        return abs(left - right)
    if check == "star-homogeneity":
        f = FuzzyFunction.from_mapping(space, violation["f"])
        star = BinaryOperator.from_dict(violation["star"])
        c = violation["scalar"]
        scaled = FuzzyFunction(space, (star(c, v) for v in f.values))
        return abs(config.evaluate(nu, scaled) - star(c, config.evaluate(nu, f)))
    raise ConfigurationError(f"unknown violation check {check!r}")


# ---------------------------------------------------------------------------
# Property suites


def _monotonicity_tolerance(config: IntegralConfig) -> float:
    if config.kind == "go" and config.gpg.variant == "kernel":
        return KERNEL_TOL
    return 0.0


def run_theorem1_suite(
    config: IntegralConfig,
    space_sizes: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8),
    trials: int = 1000,
    seed: int = 0,
) -> PropertyReport:
    """Boundary values and monotonicity of the configured integral.

    I(1_X)=1 and I(0_X)=0 are checked exactly, once per capacity in a pool
    spanning every kind and size; monotonicity runs on `trials` ordered
    pairs (g is f raised pointwise).  Exact evaluation paths get zero
    tolerance; kernel-variant configurations are grid approximations and
    get the kernel tolerance.
    """
    if trials < 0:
        raise ValueError("trials must be >= 0")
    pool = capacity_pool(seed, space_sizes)
    violations: list[dict] = []
    tol = _monotonicity_tolerance(config)
    cfg_doc = _config_doc(config)

    for nu in pool:
        one = config.evaluate(nu, FuzzyFunction.constant(nu.space, 1.0))
        if one != 1.0:
            violations.append(
                {
                    "check": "boundary-one", "config": cfg_doc,
                    **_instance_doc(nu, {}),
                    "left": one, "right": 1.0, "gap": abs(one - 1.0),
                }
            )
        zero = config.evaluate(nu, FuzzyFunction.constant(nu.space, 0.0))
        if zero != 0.0:
            violations.append(
                {
                    "check": "boundary-zero", "config": cfg_doc,
                    **_instance_doc(nu, {}),
                    "left": zero, "right": 0.0, "gap": abs(zero),
                }
            )

    for trial in range(trials):
        rng = np.random.default_rng((seed, trial))
        nu = pool[int(rng.integers(0, len(pool)))]
        f = random_function(rng, nu.space)
        lift = rng.uniform(0.0, 1.0, size=nu.space.size)
        g = FuzzyFunction(nu.space, np.asarray(f.values) + lift * (1.0 - np.asarray(f.values)))
        left = config.evaluate(nu, f)
        right = config.evaluate(nu, g)
        if left > right + tol and len(violations) < 64:
            violations.append(
                {
                    "check": "monotonicity", "config": cfg_doc, "trial": trial,
                    **_instance_doc(nu, {"f": f, "g": g}),
                    "left": left, "right": right, "gap": left - right,
                }
            )

    notes = (
        f"monotonicity tolerance {tol:g} "
        + ("(kernel grid approximation)" if tol else "(exact path)"),
        f"capacity pool: {len(pool)} across kinds and sizes {space_sizes}",
    )
    return PropertyReport("theorem1", trials, tuple(violations), seed, notes=notes)


def generate_comonotone_pair(space: FiniteSpace, seed) -> tuple[FuzzyFunction, FuzzyFunction]:
    """A comonotone pair via a shared random ordering.

    Both functions assign independently drawn sorted value sequences along
    one random permutation of the points, so (f(x)-f(y))(g(x)-g(y)) >= 0
    for all x, y.  Deterministic per seed.
    """
    rng = np.random.default_rng(seed)
    n = space.size
    order = rng.permutation(n)
    fv = np.empty(n)
    gv = np.empty(n)
    fv[order] = np.sort(rng.uniform(0.0, 1.0, size=n))
    gv[order] = np.sort(rng.uniform(0.0, 1.0, size=n))
    return FuzzyFunction(space, fv), FuzzyFunction(space, gv)


def is_comonotone(f: FuzzyFunction, g: FuzzyFunction) -> bool:
    """Definitional O(n^2) scan."""
    fv, gv = f.values, g.values
    return all(
        (fv[i] - fv[j]) * (gv[i] - gv[j]) >= 0.0
        for i in range(len(fv))
        for j in range(i + 1, len(fv))
    )


def check_comonotone_maxitivity(
    config: IntegralConfig,
    trials: int = 1000,
    seed: int = 0,
    *,
    pairs: list[tuple[FuzzyFunction, FuzzyFunction]] | None = None,
    space_sizes: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8),
) -> PropertyReport:
    """I(f v g) = I(f) v I(g) for comonotone pairs, within 1e-9.

    Explicit pairs are validated for comonotonicity first and rejected
    with ValueError otherwise.
    """
    if trials < 0:
        raise ValueError("trials must be >= 0")
    if pairs is not None:
        for f, g in pairs:
            if not is_comonotone(f, g):
                raise ValueError("explicit pair is not comonotone")
    pool = capacity_pool(seed, space_sizes)
    cfg_doc = _config_doc(config)
    violations: list[dict] = []
    total = len(pairs) if pairs is not None else trials

    for trial in range(total):
        rng = np.random.default_rng((seed, trial))
        if pairs is not None:
            f, g = pairs[trial]
            matching = [nu for nu in pool if nu.space == f.space]
            if not matching:
                matching = [random_capacity(rng, f.space)]
            nu = matching[int(rng.integers(0, len(matching)))]
        else:
            nu = pool[int(rng.integers(0, len(pool)))]
            f, g = generate_comonotone_pair(nu.space, (seed, trial, 1))
        left = config.evaluate(nu, f.join(g))
        right = max(config.evaluate(nu, f), config.evaluate(nu, g))
        gap = abs(left - right)
        if gap > EXACT_TOL and len(violations) < 64:
            violations.append(
                {
                    "check": "comonotone-maxitivity", "config": cfg_doc, "trial": trial,
                    **_instance_doc(nu, {"f": f, "g": g}),
                    "left": left, "right": right, "gap": gap,
                }
            )

    return PropertyReport(
        "comonotone-maxitivity", total, tuple(violations), seed,
        notes=(f"tolerance {EXACT_TOL:g}",),
    )


def check_star_homogeneity(
    config: IntegralConfig,
    trials: int = 1000,
    seed: int = 0,
    *,
    star: BinaryOperator | None = None,
    exploratory: bool = False,
    space_sizes: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8),
) -> PropertyReport:
    """I(c_X * f) = c * I(f) for random scalars, within 1e-9.

    `config` must be a t-normed integral (whose own star is used), unless
    exploratory mode passes an explicit star against a GO configuration.
    """
    if trials < 0:
        raise ValueError("trials must be >= 0")
    if config.kind == "tnormed":
        star = star or config.star
    elif not exploratory:
        raise ConfigurationError(
            "star-homogeneity targets t-normed integrals; pass exploratory=True to probe others"
        )
    if star is None:
        raise ConfigurationError("exploratory star-homogeneity needs an explicit star")
    pool = capacity_pool(seed, space_sizes)
    cfg_doc = _config_doc(config)
    try:
        star_doc = star.to_dict()
    except ConstructionError:
        star_doc = None
    violations: list[dict] = []

    for trial in range(trials):
        rng = np.random.default_rng((seed, trial))
        nu = pool[int(rng.integers(0, len(pool)))]
        f = random_function(rng, nu.space)
        c = float(rng.uniform(0.0, 1.0))
        scaled = FuzzyFunction(nu.space, (star(c, v) for v in f.values))
        left = config.evaluate(nu, scaled)
        right = star(c, config.evaluate(nu, f))
        gap = abs(left - right)
        if gap > EXACT_TOL and len(violations) < 64:
            violations.append(
                {
                    "check": "star-homogeneity", "config": cfg_doc, "trial": trial,
                    "star": star_doc, "scalar": c,
                    **_instance_doc(nu, {"f": f}),
                    "left": left, "right": right, "gap": gap,
                }
            )

    return PropertyReport(
        "star-homogeneity", trials, tuple(violations), seed,
        notes=(f"tolerance {EXACT_TOL:g}",),
    )


def search_problem1(
    overlap: BinaryOperator,
    gpg: GpgFunctional,
    star: BinaryOperator,
    budget: int = 500,
    seed: int = 0,
) -> PropertyReport:
    """Counterexample search for the open generalization question.

    Runs the comonotone-maxitivity and star-homogeneity probes against the
    GO(O, G) integral.  The outcome is only ever "counterexample-found"
    (with a replayable witness) or "no-counterexample-within-budget";
    absence of a counterexample asserts nothing.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    config = IntegralConfig("go", overlap=overlap, gpg=gpg, certify=False)
    maxi = check_comonotone_maxitivity(config, budget, seed)
    homo = check_star_homogeneity(config, budget, seed, star=star, exploratory=True)
    violations = maxi.violations + homo.violations
    outcome = "counterexample-found" if violations else "no-counterexample-within-budget"
    return PropertyReport(
        "problem1",
        budget,
        violations,
        seed,
        outcome=outcome,
        notes=(
            "exploratory search: no mathematical claim either way (the question is open)",
            f"probes: comonotone-maxitivity and star-homogeneity, {budget} trials each",
        ),
    )


def check_profile_usc(m: LevelProfile) -> PropertyReport:
    """Upper-semicontinuity surrogate for a step profile.

    Plateaus must be nonincreasing, and at every breakpoint the attained
    value O(c_i, w_i) must dominate the right limit O(c_{i+1}, w_i) with
    c_{k+1} = 0.  Exact comparisons: the operator families are monotone in
    floating point, so a failure is structural, not rounding.
    """
    w, c = m.breakpoints, m.plateaus
    try:
        overlap_doc = m.overlap.to_dict()
    except ConstructionError:
        overlap_doc = None
    violations: list[dict] = []

    def base(check: str, i: int) -> dict:
        return {
            "check": check, "index": i, "overlap": overlap_doc,
            "breakpoints": list(w), "plateaus": list(c),
        }

    for i in range(m.k - 1):
        if c[i] < c[i + 1]:
            violations.append(
                {**base("usc-plateau", i), "left": c[i], "right": c[i + 1],
                 "gap": c[i + 1] - c[i]}
            )
    for i in range(m.k):
        attained = m.overlap(c[i], w[i])
        right_limit = m.overlap(c[i + 1] if i + 1 < m.k else 0.0, w[i])
        if attained < right_limit:
            violations.append(
                {**base("usc-breakpoint", i), "left": attained, "right": right_limit,
                 "gap": right_limit - attained}
            )

    return PropertyReport("usc", m.k, tuple(violations), 0)
