"""Pure-Python kernel backend (numpy-vectorized).

Mirrors the compiled backend in `_fastcore` function for function.  Both
backends must agree bit for bit: they use the same operation order and the
same libm entry points (numpy's pow/min/max reduce to the C library calls
the compiled core makes directly).
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

# Family codes shared with the compiled backend.
MIN = 0
PRODUCT = 1
LUKASIEWICZ = 2
POWER_PRODUCT = 3
MIN_POWER = 4
MEAN = 5
ASYM_TEST = 6


def op_eval(code: int, p: float, l: float, s: float) -> float:
    """Scalar binary-operator evaluation."""
    if code == MIN:
        return l if l < s else s
    if code == PRODUCT:
        return l * s
    if code == LUKASIEWICZ:
        v = l + s - 1.0
        return v if v > 0.0 else 0.0
    if code == POWER_PRODUCT:
        return (l * s) ** p
    if code == MIN_POWER:
        return (l if l < s else s) ** p
    if code == MEAN:
        return 0.5 * (l + s)
    if code == ASYM_TEST:
        return (l * s) * s
    raise ValueError(f"unknown operator code {code}")


def op_eval_many(code: int, p: float, ls, ss) -> np.ndarray:
    """Elementwise binary-operator evaluation over equal-shape arrays."""
    ls = np.ascontiguousarray(ls, dtype=np.float64)
    ss = np.ascontiguousarray(ss, dtype=np.float64)
    if code == MIN:
        return np.minimum(ls, ss)
    if code == PRODUCT:
        return ls * ss
    if code == LUKASIEWICZ:
        return np.maximum(ls + ss - 1.0, 0.0)
    if code == POWER_PRODUCT:
        return np.power(ls * ss, p)
    if code == MIN_POWER:
        return np.power(np.minimum(ls, ss), p)
    if code == MEAN:
        return 0.5 * (ls + ss)
    if code == ASYM_TEST:
        return (ls * ss) * ss
    raise ValueError(f"unknown operator code {code}")


def segment_capacities(w, c, ts) -> np.ndarray:
    """Plateau capacity governing each threshold t.

    t = 0 sees the full space (capacity 1); t in (w[i-1], w[i]] sees
    plateau c[i]; t past the last breakpoint sees the empty set (0).
    """
    w = np.ascontiguousarray(w, dtype=np.float64)
    c = np.ascontiguousarray(c, dtype=np.float64)
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    k = w.shape[0]
    if k == 0:
        cc = np.zeros_like(ts)
    else:
        idx = np.searchsorted(w, ts, side="left")
        cc = np.where(idx < k, c[np.minimum(idx, k - 1)], 0.0)
    return np.where(ts == 0.0, 1.0, cc)


def profile_eval_many(code: int, p: float, w, c, ts) -> np.ndarray:
    """m(t) = O(capacity at level t, t) for an array of thresholds."""
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    return op_eval_many(code, p, segment_capacities(w, c, ts), ts)


def profile_max(code: int, p: float, w, c) -> float:
    """max over breakpoints of O(c_i, w_i); 0 for an empty profile."""
    best = 0.0
    for wi, ci in zip(w, c):
        v = op_eval(code, p, ci, wi)
        if v > best:
            best = v
    return best
