"""Parameterized operators on the unit interval and grid-based axiom checkers.

Binary families cover the certified t-overlap operators (min, product,
lukasiewicz, power_product, min_power), two deliberately non-conforming
negative controls (mean, asym_test), and an escape hatch for custom
callables.  The axiom checkers sample uniform grids and report the first
counterexample per axiom; a grid check certifies grid points only, never
the continuum claim.

Unary distortions (power family) and kernels (tilt family) used by
distorted capacities and kernel grouping functionals live here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import _kernels as K
from .errors import ConfigurationError, ConstructionError

__all__ = [
    "BinaryOperator",
    "AxiomReport",
    "Counterexample",
    "binary_operator",
    "eval_binary",
    "check_t_overlap",
    "check_t_norm",
    "is_t_overlap",
    "is_t_norm",
    "PowerDistortion",
    "TiltKernel",
    "validate_distortion",
    "BUILTIN_OVERLAPS",
    "BUILTIN_T_NORMS",
]

EQ_TOL = 1e-12

_FAMILY_CODES = {
    "min": K.MIN,
    "product": K.PRODUCT,
    "lukasiewicz": K.LUKASIEWICZ,
    "power_product": K.POWER_PRODUCT,
    "min_power": K.MIN_POWER,
    "mean": K.MEAN,
    "asym_test": K.ASYM_TEST,
}
_PARAMETRIC = {"power_product", "min_power"}

# Families whose zero set matches the strict overlap condition O(l,s)=0 iff ls=0.
_STRICT_ZERO_FAMILIES = {"min", "product", "power_product", "min_power"}


@dataclass(frozen=True)
class BinaryOperator:
    """A binary operator family on [0,1]^2, evaluated in closed form.

    `family` is one of min, product, lukasiewicz, power_product, min_power,
    mean, asym_test, or custom; parametric families carry an exponent p > 0.
    Custom operators wrap a callable that must accept numpy arrays.
    """

    family: str
    p: float | None = None
    fn: Callable | None = field(default=None, compare=False)
    label: str | None = None

    def __post_init__(self) -> None:
        if self.family == "custom":
            if self.fn is None:
                raise ConstructionError("custom operator needs a callable")
            if self.label is None:
                object.__setattr__(self, "label", getattr(self.fn, "__name__", "custom"))
            return
        if self.family not in _FAMILY_CODES:
            raise ConstructionError(f"unknown operator family {self.family!r}")
        if self.family in _PARAMETRIC:
            if self.p is None or not self.p > 0.0:
                raise ConstructionError(f"{self.family} requires parameter p > 0, got {self.p!r}")
            object.__setattr__(self, "p", float(self.p))
        elif self.p is not None:
            raise ConstructionError(f"{self.family} takes no parameter")

    @property
    def code(self) -> int:
        return -1 if self.family == "custom" else _FAMILY_CODES[self.family]

    def name(self) -> str:
        if self.family == "custom":
            return f"custom[{self.label}]"
        if self.p is not None:
            return f"{self.family}[p={self.p:.12g}]"
        return self.family

    def __call__(self, l: float, s: float) -> float:
        if self.family == "custom":
            return float(self.fn(l, s))
        return K.op_eval(self.code, self.p or 0.0, l, s)

    def eval_many(self, ls, ss) -> np.ndarray:
        if self.family == "custom":
            out = np.asarray(self.fn(np.asarray(ls, float), np.asarray(ss, float)), float)
            return out
        return K.op_eval_many(self.code, self.p or 0.0, ls, ss)

    def to_dict(self) -> dict:
        if self.family == "custom":
            raise ConstructionError("custom operators have no serialized form")
        doc: dict = {"name": self.family}
        if self.p is not None:
            doc["p"] = self.p
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "BinaryOperator":
        return binary_operator(doc.get("name", ""), p=doc.get("p"))


def binary_operator(name: str, p: float | None = None) -> BinaryOperator:
    """Factory by family name; parameter p only for power families."""
    return BinaryOperator(name, p=p)


def eval_binary(op: BinaryOperator, l: float, s: float) -> float:
    """O(l, s) with domain validation."""
    if not (0.0 <= l <= 1.0 and 0.0 <= s <= 1.0):
        raise ValueError(f"arguments ({l!r}, {s!r}) outside [0,1]^2")
    return op(l, s)


# Default certified operator sets, used by the property and acceptance suites.
BUILTIN_OVERLAPS: tuple[BinaryOperator, ...] = (
    BinaryOperator("min"),
    BinaryOperator("product"),
    BinaryOperator("lukasiewicz"),
    BinaryOperator("power_product", p=0.5),
    BinaryOperator("power_product", p=2.0),
    BinaryOperator("min_power", p=2.0),
)
BUILTIN_T_NORMS: tuple[BinaryOperator, ...] = (
    BinaryOperator("min"),
    BinaryOperator("product"),
    BinaryOperator("lukasiewicz"),
)


@dataclass(frozen=True)
class Counterexample:
    axiom: str
    inputs: tuple[float, ...]
    observed: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "inputs": list(self.inputs),
            "observed": list(self.observed),
        }


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of a grid axiom check; passes iff no counterexamples."""

    name: str
    operator: str
    passed: bool
    counterexamples: tuple[Counterexample, ...]
    grid_n: int
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        assert self.passed == (not self.counterexamples)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "operator": self.operator,
            "passed": self.passed,
            "grid_n": self.grid_n,
            "counterexamples": [c.to_dict() for c in self.counterexamples],
            "notes": list(self.notes),
        }


def _grid_values(op: BinaryOperator, grid: np.ndarray) -> np.ndarray:
    n = grid.shape[0]
    ll, ss = np.meshgrid(grid, grid, indexing="ij")
    return op.eval_many(ll.ravel(), ss.ravel()).reshape(n, n)


def _first_where(mask: np.ndarray) -> tuple[int, ...] | None:
    hits = np.argwhere(mask)
    if hits.size == 0:
        return None
    return tuple(int(x) for x in hits[0])


def _monotonicity_witness(v: np.ndarray, grid: np.ndarray) -> Counterexample | None:
    """First grid point where the operator decreases along either axis."""
    bad = _first_where(np.diff(v, axis=0) < -EQ_TOL)
    if bad:
        i, j = bad
        return Counterexample(
            "monotonicity", (grid[i], grid[j], grid[i + 1], grid[j]),
            (float(v[i, j]), float(v[i + 1, j])),
        )
    bad = _first_where(np.diff(v, axis=1) < -EQ_TOL)
    if bad:
        i, j = bad
        return Counterexample(
            "monotonicity", (grid[i], grid[j], grid[i], grid[j + 1]),
            (float(v[i, j]), float(v[i, j + 1])),
        )
    return None


def check_t_overlap(op: BinaryOperator, grid_n: int = 100) -> AxiomReport:
    """Grid check of the four t-overlap axioms plus a range guard.

    Checks, on the uniform (grid_n+1)^2 grid: symmetry within 1e-12;
    O(l,s)=0 on the grid edges where ls=0; O(1,1)=1 exactly with O<1
    strictly at every other grid point; nondecreasingness along both grid
    axes.  The first violation of each axiom is recorded as a witness.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    grid = np.linspace(0.0, 1.0, grid_n + 1)
    v = _grid_values(op, grid)
    ces: list[Counterexample] = []

    bad = _first_where((v < -EQ_TOL) | (v > 1.0 + EQ_TOL))
    if bad:
        i, j = bad
        ces.append(Counterexample("range", (grid[i], grid[j]), (float(v[i, j]),)))

    bad = _first_where(np.abs(v - v.T) > EQ_TOL)
    if bad:
        i, j = bad
        ces.append(Counterexample("symmetry", (grid[i], grid[j]), (float(v[i, j]), float(v[j, i]))))

    edge = np.zeros_like(v, dtype=bool)
    edge[0, :] = True
    edge[:, 0] = True
    bad = _first_where(edge & (np.abs(v) > EQ_TOL))
    if bad:
        i, j = bad
        ces.append(Counterexample("boundary-zero", (grid[i], grid[j]), (float(v[i, j]),)))

    if v[-1, -1] != 1.0:
        ces.append(Counterexample("boundary-one", (1.0, 1.0), (float(v[-1, -1]),)))
    interior = np.ones_like(v, dtype=bool)
    interior[-1, -1] = False
    bad = _first_where(interior & (v >= 1.0))
    if bad:
        i, j = bad
        ces.append(Counterexample("boundary-one", (grid[i], grid[j]), (float(v[i, j]),)))

    mono = _monotonicity_witness(v, grid)
    if mono:
        ces.append(mono)

    notes = []
    if op.family in _STRICT_ZERO_FAMILIES:
        notes.append("zero set also satisfies the strict overlap condition (O=0 iff ls=0)")
    elif op.family == "lukasiewicz":
        notes.append("zero set is wider than the strict overlap condition (O=0 on l+s<=1)")
    notes.append("grid check: certifies grid points only")

    return AxiomReport("t-overlap", op.name(), not ces, tuple(ces), grid_n, tuple(notes))


_ASSOC_GRID_CAP = 64


def check_t_norm(op: BinaryOperator, grid_n: int = 100) -> AxiomReport:
    """Grid check of the t-norm axioms.

    Commutativity, monotonicity and the unit law s*1=s run on the
    (grid_n+1)^2 grid; associativity runs on a (min(grid_n,64)+1)^3 grid,
    with the cap recorded in the report notes.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    grid = np.linspace(0.0, 1.0, grid_n + 1)
    v = _grid_values(op, grid)
    ces: list[Counterexample] = []

    bad = _first_where(np.abs(v - v.T) > EQ_TOL)
    if bad:
        i, j = bad
        ces.append(Counterexample("commutativity", (grid[i], grid[j]), (float(v[i, j]), float(v[j, i]))))

    mono = _monotonicity_witness(v, grid)
    if mono:
        ces.append(mono)

    unit = op.eval_many(grid, np.ones_like(grid))
    bad = _first_where(np.abs(unit - grid) > EQ_TOL)
    if bad:
        (i,) = bad
        ces.append(Counterexample("unit", (grid[i], 1.0), (float(unit[i]),)))

    assoc_n = min(grid_n, _ASSOC_GRID_CAP)
    agrid = np.linspace(0.0, 1.0, assoc_n + 1)
    aa, bb, cc = (x.ravel() for x in np.meshgrid(agrid, agrid, agrid, indexing="ij"))
    left = op.eval_many(op.eval_many(aa, bb), cc)
    right = op.eval_many(aa, op.eval_many(bb, cc))
    bad = _first_where(np.abs(left - right) > EQ_TOL)
    if bad:
        (i,) = bad
        ces.append(
            Counterexample(
                "associativity", (float(aa[i]), float(bb[i]), float(cc[i])),
                (float(left[i]), float(right[i])),
            )
        )

    notes = [f"associativity grid: {assoc_n}"]
    if assoc_n < grid_n:
        notes.append(f"associativity pass capped at grid {_ASSOC_GRID_CAP} (requested {grid_n})")

    return AxiomReport("t-norm", op.name(), not ces, tuple(ces), grid_n, tuple(notes))


@lru_cache(maxsize=None)
def is_t_overlap(op: BinaryOperator, grid_n: int = 100) -> bool:
    """Memoized grid certification; checked once per operator instance."""
    return check_t_overlap(op, grid_n).passed


@lru_cache(maxsize=None)
def is_t_norm(op: BinaryOperator, grid_n: int = 100) -> bool:
    return check_t_norm(op, grid_n).passed


def require_t_overlap(op: BinaryOperator) -> None:
    if not is_t_overlap(op):
        raise ConfigurationError(f"{op.name()} fails the t-overlap axioms")


def require_t_norm(op: BinaryOperator) -> None:
    if not is_t_norm(op):
        raise ConfigurationError(f"{op.name()} fails the t-norm axioms")


@dataclass(frozen=True)
class PowerDistortion:
    """h(x) = x**p, the named nondecreasing distortion family (p > 0)."""

    p: float

    def __post_init__(self) -> None:
        if not self.p > 0.0:
            raise ConstructionError(f"power distortion requires p > 0, got {self.p!r}")
        object.__setattr__(self, "p", float(self.p))

    def __call__(self, x):
        return x**self.p

    def name(self) -> str:
        return f"power[p={self.p:.12g}]"


@dataclass(frozen=True)
class TiltKernel:
    """g(t, a) = a**(1 + beta*t): continuous, nondecreasing in a, g(t,0)=0, g(t,1)=1."""

    beta: float

    def __post_init__(self) -> None:
        if not self.beta >= 0.0:
            raise ConstructionError(f"tilt kernel requires beta >= 0, got {self.beta!r}")
        object.__setattr__(self, "beta", float(self.beta))

    def __call__(self, ts, ms):
        return np.asarray(ms, float) ** (1.0 + self.beta * np.asarray(ts, float))

    def name(self) -> str:
        return f"tilt[beta={self.beta:.12g}]"


def validate_distortion(h: Callable, grid_points: int = 101) -> None:
    """Reject distortions without h(0)=0, h(1)=1, nondecreasing on a grid."""
    xs = np.linspace(0.0, 1.0, grid_points)
    try:
        ys = np.asarray([float(h(x)) for x in xs])
    except Exception as exc:
        raise ConstructionError(f"distortion is not evaluable on [0,1]: {exc}") from exc
    if abs(ys[0]) > EQ_TOL:
        raise ConstructionError(f"distortion must satisfy h(0)=0, got {ys[0]!r}")
    if abs(ys[-1] - 1.0) > EQ_TOL:
        raise ConstructionError(f"distortion must satisfy h(1)=1, got {ys[-1]!r}")
    if np.any(np.diff(ys) < -EQ_TOL):
        i = int(np.argmax(np.diff(ys) < -EQ_TOL))
        raise ConstructionError(
            f"distortion must be nondecreasing: h({xs[i]:.6g})={ys[i]:.6g} > h({xs[i + 1]:.6g})={ys[i + 1]:.6g}"
        )
