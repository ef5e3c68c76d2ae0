# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""float64 versions of the kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef enum:
    VCG = 0


def total_waiting(double[::1] t, double[::1] w, long[::1] order):
    cdef Py_ssize_t i, p, n = order.shape[0]
    cdef double elapsed = 0.0, total = 0.0
    for i in range(n):
        p = order[i]
        total += w[p] * elapsed
        elapsed += t[p]
    return total


cdef void _dfs(int depth, int n, double elapsed, double cost,
               double[::1] t, double[::1] w, int* used, long* stack,
               double* best, long* best_order, int* have, double eps) noexcept nogil:
    cdef int p, i
    cdef double thresh
    if depth == n:
        if have[0] == 0:
            thresh = cost + 1.0
        else:
            thresh = best[0] - eps * (fabs(best[0]) if fabs(best[0]) > 1.0 else 1.0)
        if have[0] == 0 or cost < thresh:
            have[0] = 1
            best[0] = cost
            for i in range(n):
                best_order[i] = stack[i]
        return
    for p in range(n):
        if used[p] == 0:
            used[p] = 1
            stack[depth] = p
            _dfs(depth + 1, n, elapsed + t[p], cost + w[p] * elapsed,
                 t, w, used, stack, best, best_order, have, eps)
            used[p] = 0


def exhaustive_min_waiting(double[::1] t, double[::1] w, double eps=0.0):
    cdef int n = t.shape[0]
    cdef cnp.ndarray[int, ndim=1] used = np.zeros(n, dtype=np.intc)
    cdef cnp.ndarray[long, ndim=1] stack = np.zeros(n, dtype=np.int_)
    cdef cnp.ndarray[long, ndim=1] best_order = np.zeros(n, dtype=np.int_)
    cdef double best = 0.0
    cdef int have = 0
    cdef int* up = <int*> used.data
    cdef long* sp = <long*> stack.data
    cdef long* bp = <long*> best_order.data
    with nogil:
        _dfs(0, n, 0.0, 0.0, t, w, up, sp, &best, bp, &have, eps)
    return best, tuple(best_order.tolist())


cdef void _losses(double[::1] t, double[::1] w, double[::1] bids, long[::1] order,
                  Py_ssize_t k, int kind, long* others, double* losses) noexcept nogil:
    cdef Py_ssize_t n = order.shape[0], j, m = 0
    cdef long p = order[k], q
    cdef double ahead = 0.0, behind = 0.0, nxt
    for j in range(n):
        if j != k:
            others[m] = order[j]
            m += 1
    if kind == VCG:
        for j in range(n - 1):
            q = others[j]
            behind += t[q] * bids[q]
        for j in range(n):
            losses[j] = w[p] * ahead + t[p] * behind
            if j < n - 1:
                q = others[j]
                ahead += t[q]
                behind -= t[q] * bids[q]
    else:
        for j in range(n):
            nxt = bids[others[j]] if j < n - 1 else 0.0
            losses[j] = w[p] * ahead + t[p] * nxt
            if j < n - 1:
                ahead += t[others[j]]


def deviation_gains(double[::1] t, double[::1] w, double[::1] bids, long[::1] order, int kind):
    cdef Py_ssize_t n = order.shape[0], k, j
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] g = out
    cdef cnp.ndarray[long, ndim=1] others = np.empty(max(n, 1), dtype=np.int_)
    cdef cnp.ndarray[double, ndim=1] losses = np.empty(max(n, 1), dtype=np.float64)
    cdef long* op = <long*> others.data
    cdef double* ls = <double*> losses.data
    with nogil:
        for k in range(n):
            _losses(t, w, bids, order, k, kind, op, ls)
            for j in range(n):
                g[k, j] = ls[k] - ls[j]
    return out


cdef double _max_gain(double[::1] t, double[::1] w, double[::1] bids, long[::1] order,
                      int kind, bint use_stop, double stop, long* others, double* ls) noexcept nogil:
    cdef Py_ssize_t n = order.shape[0], k, j
    cdef double best = 0.0, gain, cur
    for k in range(n):
        _losses(t, w, bids, order, k, kind, others, ls)
        cur = ls[k]
        for j in range(n):
            gain = cur - ls[j]
            if gain > best:
                best = gain
                if use_stop and best > stop:
                    return best
    return best


def max_deviation_gain(double[::1] t, double[::1] w, double[::1] bids, long[::1] order,
                       int kind, stop_above=None):
    cdef Py_ssize_t n = order.shape[0]
    cdef bint use_stop = stop_above is not None
    cdef double stop = stop_above if use_stop else 0.0
    cdef double best
    cdef cnp.ndarray[long, ndim=1] others = np.empty(max(n, 1), dtype=np.int_)
    cdef cnp.ndarray[double, ndim=1] losses = np.empty(max(n, 1), dtype=np.float64)
    cdef long* op = <long*> others.data
    cdef double* ls = <double*> losses.data
    with nogil:
        best = _max_gain(t, w, bids, order, kind, use_stop, stop, op, ls)
    return best
