# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend.

Same contract as `_purepy`; fused C loops instead of numpy temporaries.
Binary operators are evaluated through libm's pow/fmin/fmax, matching the
calls the numpy fallback reduces to.
"""

from libc.math cimport fmax, fmin, pow

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"

MIN = 0
PRODUCT = 1
LUKASIEWICZ = 2
POWER_PRODUCT = 3
MIN_POWER = 4
MEAN = 5
ASYM_TEST = 6


cdef inline double _op(int code, double p, double l, double s) noexcept nogil:
    if code == 0:
        return fmin(l, s)
    elif code == 1:
        return l * s
    elif code == 2:
        return fmax(l + s - 1.0, 0.0)
    elif code == 3:
        return pow(l * s, p)
    elif code == 4:
        return pow(fmin(l, s), p)
    elif code == 5:
        return 0.5 * (l + s)
    elif code == 6:
        return (l * s) * s
    return -1.0


def op_eval(int code, double p, double l, double s):
    if code < 0 or code > 6:
        raise ValueError(f"unknown operator code {code}")
    return _op(code, p, l, s)


def op_eval_many(int code, double p, ls, ss):
    if code < 0 or code > 6:
        raise ValueError(f"unknown operator code {code}")
    cdef cnp.ndarray[double, ndim=1] la = np.ascontiguousarray(ls, dtype=np.float64).ravel()
    cdef cnp.ndarray[double, ndim=1] sa = np.ascontiguousarray(ss, dtype=np.float64).ravel()
    if la.shape[0] != sa.shape[0]:
        raise ValueError("argument arrays must have equal length")
    cdef Py_ssize_t n = la.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _op(code, p, la[i], sa[i])
    return out.reshape(np.shape(ls))


cdef inline Py_ssize_t _bisect_left(const double[::1] w, double t, Py_ssize_t k) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = k, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if w[mid] < t:
            lo = mid + 1
        else:
            hi = mid
    return lo


def segment_capacities(w, c, ts):
    cdef cnp.ndarray[double, ndim=1] wa = np.ascontiguousarray(w, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ca = np.ascontiguousarray(c, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ta = np.ascontiguousarray(ts, dtype=np.float64).ravel()
    cdef Py_ssize_t k = wa.shape[0]
    cdef Py_ssize_t n = ta.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double t
    with nogil:
        for i in range(n):
            t = ta[i]
            if t == 0.0:
                out[i] = 1.0
                continue
            j = _bisect_left(wa, t, k)
            out[i] = ca[j] if j < k else 0.0
    return out.reshape(np.shape(ts))


def profile_eval_many(int code, double p, w, c, ts):
    if code < 0 or code > 6:
        raise ValueError(f"unknown operator code {code}")
    cdef cnp.ndarray[double, ndim=1] wa = np.ascontiguousarray(w, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ca = np.ascontiguousarray(c, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ta = np.ascontiguousarray(ts, dtype=np.float64).ravel()
    cdef Py_ssize_t k = wa.shape[0]
    cdef Py_ssize_t n = ta.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double t, cc
    with nogil:
        for i in range(n):
            t = ta[i]
            if t == 0.0:
                cc = 1.0
            else:
                j = _bisect_left(wa, t, k)
                cc = ca[j] if j < k else 0.0
            out[i] = _op(code, p, cc, t)
    return out.reshape(np.shape(ts))


def profile_max(int code, double p, w, c):
    if code < 0 or code > 6:
        raise ValueError(f"unknown operator code {code}")
    cdef cnp.ndarray[double, ndim=1] wa = np.ascontiguousarray(w, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ca = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t k = wa.shape[0]
    cdef double best = 0.0, v
    cdef Py_ssize_t i
    with nogil:
        for i in range(k):
            v = _op(code, p, ca[i], wa[i])
            if v > best:
                best = v
    return best
