"""Level profiles and pseudo-grouping functionals.

A LevelProfile is the exact step representation of the threshold function
m(t) = O(nu({f >= t}), t): breakpoints are the distinct positive values of
f and plateaus the capacities of their level sets.  Within each half-open
segment (w_{i-1}, w_i] the capacity is constant and m is nondecreasing in
t, so every supremum the integral layer needs is attained at an included
right endpoint; this is the exactness argument the oracle suite tests.

Grouping functionals consume a profile: Max takes the supremum of m,
Distorted(h) post-composes a nondecreasing distortion, Kernel(g) takes
sup_t g(t, m(t)) approximated on per-segment grids.  Named families are
validated by their factories; raw construction is deliberately permissive
so `check_gpg_functional` can exhibit counterexamples for broken inputs.
Whether kernel functionals are continuous in the hyperspace sense the
theory asks for is not settled; the checker covers the three pointwise
conditions only.
"""

from __future__ import annotations

import bisect
import math
import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels as K
from ._kernels import _purepy
from .capacity import Capacity, capacity_value
from .errors import ConstructionError
from .operators import (
    AxiomReport,
    BinaryOperator,
    Counterexample,
    EQ_TOL,
    PowerDistortion,
    TiltKernel,
    validate_distortion,
)
from .space import FuzzyFunction, level_set

__all__ = [
    "LevelProfile",
    "GpgFunctional",
    "DiscreteGpg",
    "build_level_profile",
    "eval_profile",
    "eval_profile_many",
    "apply_gpg",
    "check_gpg_discrete",
    "check_gpg_functional",
    "gpg_max",
    "gpg_distorted",
    "gpg_kernel",
    "discrete_gpg",
    "kernel_grid_resolution",
    "random_profile",
    "BUILTIN_GPGS",
]

DEFAULT_KERNEL_GRID = 4096
GRID_ENV_VAR = "GOINT_DEFAULT_GRID"


def kernel_grid_resolution(grid_n: int | None = None) -> int:
    """Effective kernel grid resolution: explicit arg, else env override, else 4096."""
    if grid_n is not None:
        if grid_n < 1:
            raise ConstructionError(f"kernel grid resolution must be >= 1, got {grid_n}")
        return int(grid_n)
    env = os.environ.get(GRID_ENV_VAR)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConstructionError(f"{GRID_ENV_VAR}={env!r} is not an integer") from None
        if value < 1:
            raise ConstructionError(f"{GRID_ENV_VAR} must be >= 1, got {value}")
        return value
    return DEFAULT_KERNEL_GRID


@dataclass(frozen=True)
class LevelProfile:
    """Step representation of m(t) = O(capacity of level set at t, t).

    Breakpoints are strictly increasing in (0,1]; plateau i governs the
    segment (w_{i-1}, w_i] (w_0 = 0).  Construction checks ranges and
    ordering only; that plateaus are nonincreasing is the upper
    semicontinuity surrogate checked by `verify.check_profile_usc`.
    """

    overlap: BinaryOperator
    breakpoints: tuple[float, ...]
    plateaus: tuple[float, ...]

    def __post_init__(self) -> None:
        w, c = self.breakpoints, self.plateaus
        if len(w) != len(c):
            raise ConstructionError("breakpoints and plateaus must pair up")
        for i, wi in enumerate(w):
            if not 0.0 < wi <= 1.0:
                raise ConstructionError(f"breakpoint {wi!r} outside (0,1]")
            if i and not w[i - 1] < wi:
                raise ConstructionError("breakpoints must be strictly increasing")
        for ci in c:
            if not 0.0 <= ci <= 1.0:
                raise ConstructionError(f"plateau {ci!r} outside [0,1]")
        object.__setattr__(self, "breakpoints", tuple(float(x) for x in w))
        object.__setattr__(self, "plateaus", tuple(float(x) for x in c))

    @property
    def k(self) -> int:
        return len(self.breakpoints)

    def is_empty(self) -> bool:
        return not self.breakpoints

    def segments(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self.breakpoints, self.plateaus))

    def __call__(self, t: float) -> float:
        return eval_profile(self, t)


def build_level_profile(nu: Capacity, f: FuzzyFunction, overlap: BinaryOperator) -> LevelProfile:
    """Enumerate the distinct positive values of f with their level capacities."""
    if nu.space != f.space:
        raise ConstructionError("capacity and function live on different spaces")
    ws = f.distinct_positive_values()
    cs = tuple(capacity_value(nu, level_set(f, w)) for w in ws)
    return LevelProfile(overlap, ws, cs)


def _plateau_at(m: LevelProfile, t: float) -> float:
    """Capacity of the level set governing threshold t."""
    if t == 0.0:
        return 1.0
    i = bisect.bisect_left(m.breakpoints, t)
    return m.plateaus[i] if i < m.k else 0.0


def eval_profile(m: LevelProfile, t: float) -> float:
    """m(t); exact at breakpoints, where t = w_i belongs to segment i."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"threshold {t!r} outside [0,1]")
    c = _plateau_at(m, t)
    if m.overlap.family == "custom":
        return float(m.overlap(c, t))
    return K.op_eval(m.overlap.code, m.overlap.p or 0.0, c, t)


def eval_profile_many(m: LevelProfile, ts) -> np.ndarray:
    """Vectorized m(t) over an array of thresholds."""
    if m.overlap.family == "custom":
        cc = _purepy.segment_capacities(m.breakpoints, m.plateaus, ts)
        return m.overlap.eval_many(cc, np.asarray(ts, float))
    return K.profile_eval_many(
        m.overlap.code, m.overlap.p or 0.0, m.breakpoints, m.plateaus, ts
    )


def _profile_sup(m: LevelProfile) -> float:
    """Exact sup of m over [0,1]: within each segment the sup sits at the
    included right endpoint, so it is the max of the breakpoint values."""
    if m.overlap.family == "custom":
        if m.is_empty():
            return 0.0
        vals = m.overlap.eval_many(np.asarray(m.plateaus), np.asarray(m.breakpoints))
        return float(np.max(vals))
    return K.profile_max(m.overlap.code, m.overlap.p or 0.0, m.breakpoints, m.plateaus)


def _segment_grid(breakpoints: tuple[float, ...], n: int) -> np.ndarray:
    """Per-segment uniform grids with both endpoints: ceil(n*len)+2 points each."""
    edges = (0.0,) + breakpoints
    pieces = [
        np.linspace(a, b, math.ceil(n * (b - a)) + 2)
        for a, b in zip(edges[:-1], edges[1:])
    ]
    return np.concatenate(pieces)


@dataclass(frozen=True)
class GpgFunctional:
    """A grouping functional on level profiles: max, distorted max, or kernel sup.

    Raw construction does not certify the grouping conditions; use the
    `gpg_*` factories for validated named families.
    """

    variant: str  # "max" | "distorted" | "kernel"
    distortion: Callable | None = field(default=None)
    kernel: Callable | None = field(default=None)

    def __post_init__(self) -> None:
        if self.variant not in ("max", "distorted", "kernel"):
            raise ConstructionError(f"unknown grouping variant {self.variant!r}")
        if self.variant == "distorted" and self.distortion is None:
            raise ConstructionError("distorted variant needs a distortion")
        if self.variant == "kernel" and self.kernel is None:
            raise ConstructionError("kernel variant needs a kernel")

    def name(self) -> str:
        if self.variant == "max":
            return "max"
        if self.variant == "distorted":
            inner = self.distortion.name() if hasattr(self.distortion, "name") else "custom"
            return f"distorted[{inner}]"
        inner = self.kernel.name() if hasattr(self.kernel, "name") else "custom"
        return f"kernel[{inner}]"

    def to_dict(self) -> dict:
        if self.variant == "max":
            return {"name": "max"}
        if self.variant == "distorted":
            if not isinstance(self.distortion, PowerDistortion):
                raise ConstructionError("custom distortions have no serialized form")
            return {"name": "distorted", "distortion": {"name": "power", "p": self.distortion.p}}
        if not isinstance(self.kernel, TiltKernel):
            raise ConstructionError("custom kernels have no serialized form")
        return {"name": "kernel", "kernel": {"name": "tilt", "beta": self.kernel.beta}}

    @classmethod
    def from_dict(cls, doc: dict) -> "GpgFunctional":
        name = doc.get("name")
        if name == "max":
            return gpg_max()
        if name == "distorted":
            d = doc.get("distortion", {})
            if d.get("name") != "power":
                raise ConstructionError(f"unknown distortion family {d.get('name')!r}")
            return gpg_distorted(PowerDistortion(float(d["p"])))
        if name == "kernel":
            g = doc.get("kernel", {})
            if g.get("name") != "tilt":
                raise ConstructionError(f"unknown kernel family {g.get('name')!r}")
            return gpg_kernel(TiltKernel(float(g["beta"])))
        raise ConstructionError(f"unknown grouping functional {name!r}")


def gpg_max() -> GpgFunctional:
    """The plain supremum functional (certified grouping functional)."""
    return GpgFunctional("max")


def gpg_distorted(distortion: Callable) -> GpgFunctional:
    """h o max for a validated nondecreasing distortion h."""
    validate_distortion(distortion)
    return GpgFunctional("distorted", distortion=distortion)


def gpg_kernel(kernel: Callable) -> GpgFunctional:
    """sup_t g(t, m(t)) for a kernel g; named tilt family is accepted as-is,
    custom callables get a light grid validation of g(t,0)=0, g(t,1)=1 and
    monotonicity in the second argument."""
    if not isinstance(kernel, TiltKernel):
        ts = np.linspace(0.0, 1.0, 33)
        zeros = np.asarray(kernel(ts, np.zeros_like(ts)), float)
        ones = np.asarray(kernel(ts, np.ones_like(ts)), float)
        if np.any(np.abs(zeros) > EQ_TOL):
            raise ConstructionError("kernel must satisfy g(t, 0) = 0")
        if np.any(np.abs(ones - 1.0) > EQ_TOL):
            raise ConstructionError("kernel must satisfy g(t, 1) = 1")
        aa = np.linspace(0.0, 1.0, 33)
        tt, mm = (x.ravel() for x in np.meshgrid(ts, aa, indexing="ij"))
        vals = np.asarray(kernel(tt, mm), float).reshape(33, 33)
        if np.any(np.diff(vals, axis=1) < -EQ_TOL):
            raise ConstructionError("kernel must be nondecreasing in its second argument")
    return GpgFunctional("kernel", kernel=kernel)


# Default grouping functionals for the property and acceptance suites.
BUILTIN_GPGS: tuple[GpgFunctional, ...] = (
    gpg_max(),
    gpg_distorted(PowerDistortion(0.5)),
    gpg_distorted(PowerDistortion(2.0)),
    gpg_kernel(TiltKernel(0.5)),
    gpg_kernel(TiltKernel(1.0)),
    gpg_kernel(TiltKernel(2.0)),
)


def apply_gpg(G: GpgFunctional, m: LevelProfile, grid_n: int | None = None) -> float:
    """G applied to the profile.

    Max and Distorted are exact (breakpoint maximum); Kernel approximates
    sup_t g(t, m(t)) on per-segment endpoint-inclusive grids at resolution
    `kernel_grid_resolution(grid_n)`.  An empty profile is the zero
    function: Max gives 0, Distorted gives h(0), Kernel evaluates g on a
    zero sample so that a broken kernel is still exposed.
    """
    if G.variant == "max":
        return _profile_sup(m)
    if G.variant == "distorted":
        return float(G.distortion(_profile_sup(m)))
    n = kernel_grid_resolution(grid_n)
    if m.is_empty():
        ts = np.linspace(0.0, 1.0, n + 2)
        gs = np.asarray(G.kernel(ts, np.zeros_like(ts)), float)
        return float(np.max(gs))
    ts = _segment_grid(m.breakpoints, n)
    ms = eval_profile_many(m, ts)
    gs = np.asarray(G.kernel(ts, ms), float)
    return float(np.max(gs))


@dataclass(frozen=True)
class DiscreteGpg:
    """n-ary grouping operators: max_n, prob_sum, and the mean_n negative control."""

    family: str

    def __post_init__(self) -> None:
        if self.family not in ("max_n", "prob_sum", "mean_n"):
            raise ConstructionError(f"unknown discrete grouping family {self.family!r}")

    def apply(self, xs) -> float:
        xs = np.asarray(xs, float)
        if xs.size == 0:
            raise ValueError("discrete grouping needs arity >= 1")
        if self.family == "max_n":
            return float(np.max(xs))
        if self.family == "prob_sum":
            return float(1.0 - np.prod(1.0 - xs))
        return float(np.mean(xs))

    def apply_rows(self, xs: np.ndarray) -> np.ndarray:
        """Row-wise application over a 2-D array of tuples."""
        if self.family == "max_n":
            return np.max(xs, axis=1)
        if self.family == "prob_sum":
            return 1.0 - np.prod(1.0 - xs, axis=1)
        return np.mean(xs, axis=1)

    def name(self) -> str:
        return self.family


def discrete_gpg(name: str) -> DiscreteGpg:
    return DiscreteGpg(name)


def check_gpg_discrete(
    G: DiscreteGpg, n: int, grid_n: int = 20, *, samples: int = 100_000, seed: int = 0
) -> AxiomReport:
    """Check the n-ary grouping conditions.

    For n <= 4 the zero/one conditions run on exhaustive grids and
    monotonicity on the full (grid_n+1)^n lattice; for larger arities a
    seeded sample of `samples` tuples is used and the report says so.
    """
    if n < 1:
        raise ValueError("arity must be >= 1")
    if grid_n < 1:
        raise ValueError("grid_n must be >= 1")
    ces: list[Counterexample] = []
    notes: list[str] = []

    zero = G.apply(np.zeros(n))
    if abs(zero) > EQ_TOL:
        ces.append(Counterexample("zero-at-zero", (0.0,) * n, (zero,)))

    grid = np.linspace(0.0, 1.0, grid_n + 1)
    if n <= 4:
        # One coordinate pinned at 1, the rest exhaustive.
        if n > 1:
            rest = np.stack(
                [x.ravel() for x in np.meshgrid(*([grid] * (n - 1)), indexing="ij")],
                axis=-1,
            )
        else:
            rest = np.zeros((1, 0))
        for axis in range(n):
            tuples = np.insert(rest, axis, 1.0, axis=1)
            vals = G.apply_rows(tuples)
            bad = np.flatnonzero(np.abs(vals - 1.0) > EQ_TOL)
            if bad.size:
                j = int(bad[0])
                ces.append(Counterexample("one-dominance", tuple(tuples[j]), (float(vals[j]),)))
                break

        axes = np.meshgrid(*([grid] * n), indexing="ij")
        vals = G.apply_rows(np.stack([a.ravel() for a in axes], axis=-1)).reshape(
            *([grid_n + 1] * n)
        )
        for axis in range(n):
            diffs = np.diff(vals, axis=axis)
            bad = np.argwhere(diffs < -EQ_TOL)
            if bad.size:
                idx = tuple(int(x) for x in bad[0])
                lo = tuple(grid[i] for i in idx)
                hi = tuple(
                    grid[i + 1] if a == axis else grid[i] for a, i in enumerate(idx)
                )
                ces.append(
                    Counterexample(
                        "monotonicity", lo + hi,
                        (float(vals[idx]), float(vals[tuple(
                            i + 1 if a == axis else i for a, i in enumerate(idx))])),
                    )
                )
                break
    else:
        notes.append(f"arity {n} > 4: sampled with {samples} tuples (seed {seed})")
        rng = np.random.default_rng(seed)
        xs = rng.uniform(0.0, 1.0, size=(samples, n))
        pinned = xs.copy()
        cols = rng.integers(0, n, size=samples)
        pinned[np.arange(samples), cols] = 1.0
        vals = G.apply_rows(pinned)
        bad = np.flatnonzero(np.abs(vals - 1.0) > EQ_TOL)
        if bad.size:
            j = int(bad[0])
            ces.append(Counterexample("one-dominance", tuple(pinned[j]), (float(vals[j]),)))
        raised = xs + rng.uniform(0.0, 1.0, size=(samples, n)) * (1.0 - xs)
        lo_vals = G.apply_rows(xs)
        hi_vals = G.apply_rows(raised)
        bad = np.flatnonzero(lo_vals > hi_vals + EQ_TOL)
        if bad.size:
            j = int(bad[0])
            ces.append(
                Counterexample(
                    "monotonicity", tuple(xs[j]) + tuple(raised[j]),
                    (float(lo_vals[j]), float(hi_vals[j])),
                )
            )

    return AxiomReport("gpg-discrete", f"{G.name()}(n={n})", not ces, tuple(ces), grid_n, tuple(notes))


def random_profile(
    rng: np.random.Generator,
    overlap: BinaryOperator,
    *,
    max_segments: int = 6,
    attain_one: bool = False,
) -> LevelProfile:
    """Random small profile: k uniform in 1..max_segments, breakpoints sorted
    uniforms, plateaus sorted-descending uniforms.  With attain_one the last
    breakpoint is 1 and every plateau is 1, so m attains 1 at t=1."""
    k = int(rng.integers(1, max_segments + 1))
    while True:
        w = np.sort(rng.uniform(0.0, 1.0, size=k))
        if w[0] > 0.0 and np.all(np.diff(w) > 0.0):
            break
    if attain_one:
        w[-1] = 1.0
        if k > 1 and w[-2] >= 1.0:
            w = np.unique(w)
            k = w.size
        c = np.ones(k)
    else:
        c = np.sort(rng.uniform(0.0, 1.0, size=k))[::-1]
    return LevelProfile(overlap, tuple(w), tuple(c))


def _raise_plateaus(rng: np.random.Generator, m: LevelProfile) -> LevelProfile:
    """A pointwise-dominating profile on the same breakpoints: plateaus are
    the elementwise max with another sorted-descending draw."""
    c = np.asarray(m.plateaus)
    d = np.sort(rng.uniform(0.0, 1.0, size=c.size))[::-1]
    return LevelProfile(m.overlap, m.breakpoints, tuple(np.maximum(c, d)))


def check_gpg_functional(
    G: GpgFunctional,
    trials: int = 500,
    seed: int = 0,
    *,
    overlap_pool: tuple[BinaryOperator, ...] | None = None,
    grid_n: int | None = None,
) -> AxiomReport:
    """Check the grouping-functional conditions on random profiles.

    Condition 1 on the empty profile; condition 2 on `trials` random
    profiles whose step function attains 1 (which forces plateau and
    breakpoint 1); condition 3 on `trials` ordered pairs built by raising
    plateau capacities.  Only these pointwise conditions are checked; the
    hyperspace-continuity requirement of the theory is out of scope.
    """
    if trials < 0:
        raise ValueError("trials must be >= 0")
    from .operators import BUILTIN_OVERLAPS

    pool = overlap_pool or BUILTIN_OVERLAPS
    ces: list[Counterexample] = []

    empty = LevelProfile(pool[0], (), ())
    v = apply_gpg(G, empty, grid_n)
    if abs(v) > EQ_TOL:
        ces.append(Counterexample("zero-function", (), (v,)))

    for trial in range(trials):
        rng = np.random.default_rng((seed, trial))
        op = pool[int(rng.integers(0, len(pool)))]

        m1 = random_profile(rng, op, attain_one=True)
        v1 = apply_gpg(G, m1, grid_n)
        if abs(v1 - 1.0) > EQ_TOL and len(ces) < 16:
            ces.append(
                Counterexample(
                    "one-attainment",
                    m1.breakpoints + m1.plateaus,
                    (v1,),
                )
            )

        lo = random_profile(rng, op)
        hi = _raise_plateaus(rng, lo)
        vlo = apply_gpg(G, lo, grid_n)
        vhi = apply_gpg(G, hi, grid_n)
        if vlo > vhi + EQ_TOL and len(ces) < 16:
            ces.append(
                Counterexample(
                    "monotonicity",
                    lo.breakpoints + lo.plateaus + hi.plateaus,
                    (vlo, vhi),
                )
            )

    notes = (f"trials={trials}", "hyperspace continuity not checked (out of scope)")
    return AxiomReport("gpg-functional", G.name(), not ces, tuple(ces), 0, notes)
