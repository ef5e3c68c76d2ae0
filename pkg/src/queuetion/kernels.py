"""Kernel dispatch.

Exact inputs always run through the pure-Python kernels. Float inputs use
the compiled ``_ckernels`` extension when it was built, unless the
environment variable ``QUEUECTION_PURE_PYTHON`` is set to a non-empty value.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

import numpy as np

from . import _pykernels

VCG = _pykernels.VCG
GSP = _pykernels.GSP

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

if os.environ.get("QUEUECTION_PURE_PYTHON"):
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"


def _f64(xs):
    return np.ascontiguousarray(xs, dtype=np.float64)


def _idx(order):
    return np.ascontiguousarray(order, dtype=np.int_)


def _compiled(exact: bool) -> bool:
    return _ckernels is not None and not exact


def total_waiting(t, w, order, exact: bool):
    if _compiled(exact):
        return _ckernels.total_waiting(_f64(t), _f64(w), _idx(order))
    return _pykernels.total_waiting(t, w, order)


def _integerize(xs):
    scale = math.lcm(*(Fraction(x).denominator for x in xs))
    return [int(Fraction(x) * scale) for x in xs], scale


def exhaustive_min_waiting(t, w, exact: bool, eps: float = 0.0):
    """``(cost, order)`` minimizing total waiting over all n! orders."""
    if exact:
        # integer arithmetic is an order of magnitude faster than Fraction
        ti, st = _integerize(t)
        wi, sw = _integerize(w)
        cost, order = _pykernels.exhaustive_min_waiting(ti, wi)
        return Fraction(cost, st * sw), order
    if _ckernels is not None:
        return _ckernels.exhaustive_min_waiting(_f64(t), _f64(w), eps)
    return _pykernels.exhaustive_min_waiting([float(x) for x in t], [float(x) for x in w], eps)


def deviation_gains(t, w, bids, order, kind: int, exact: bool):
    """Matrix of gains, rows = current position, columns = target (0-based)."""
    if _compiled(exact):
        return _ckernels.deviation_gains(_f64(t), _f64(w), _f64(bids), _idx(order), kind).tolist()
    return _pykernels.deviation_gains(t, w, bids, order, kind)


def max_deviation_gain(t, w, bids, order, kind: int, exact: bool, stop_above=None):
    if _compiled(exact):
        return _ckernels.max_deviation_gain(
            _f64(t), _f64(w), _f64(bids), _idx(order), kind, stop_above
        )
    return _pykernels.max_deviation_gain(t, w, bids, order, kind, stop_above)
