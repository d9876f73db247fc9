"""Richardson extrapolation over nested grids."""
from __future__ import annotations

import warnings

import numpy as np


class OrderWarning(UserWarning):
    """Observed convergence order differs from the nominal one."""


def apparent_order(values, ratio: float = 2.0):
    """``log_r(|v1 - v2| / |v2 - v3|)`` from the three finest levels (nan if undefined)."""
    v = [np.asarray(x, dtype=float) for x in values[-3:]]
    if len(v) < 3:
        return np.full_like(v[-1], np.nan)
    d1 = np.abs(v[0] - v[1])
    d2 = np.abs(v[1] - v[2])
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(d1 / d2) / np.log(ratio)


def richardson(values, ratio: float = 2.0, order: int = 2, tolerance: float = 0.3, warn: bool = True):
    """Extrapolate a sequence ordered coarse to fine.

    Each level removes the next even power of ``h``.  Returns
    ``(extrapolated, error_estimate, apparent_order)``.  The error estimate is
    the largest gap between the last two extrapolants at the final two levels
    of the table.
    """
    table = [np.asarray(v, dtype=float) for v in values]
    if len(table) < 2:
        raise ValueError("need at least two levels")
    p = order
    while len(table) > 1:
        factor = ratio ** p - 1.0
        table = [table[i + 1] + (table[i + 1] - table[i]) / factor for i in range(len(table) - 1)]
        p += order
    extrapolated = table[0]
    # gaps between successive extrapolants; the larger one is reported so
    # that a non-integer error exponent is not hidden by the final level
    raw = [np.asarray(v, dtype=float) for v in values]
    factor = ratio ** order - 1.0
    first = [raw[i + 1] + (raw[i + 1] - raw[i]) / factor for i in range(len(raw) - 1)]
    if len(first) >= 2:
        error = np.maximum(np.abs(extrapolated - first[-1]), np.abs(first[-1] - first[-2]))
    else:
        error = np.abs(extrapolated - raw[-1])
    q = apparent_order(values, ratio)
    if warn and len(values) >= 3:
        v = [np.asarray(x, dtype=float) for x in values[-2:]]
        noise = 1e3 * np.finfo(float).eps * np.maximum(np.abs(v[1]), 1.0)
        meaningful = np.abs(v[0] - v[1]) > noise
        bad = meaningful & ~(np.abs(q - order) <= tolerance * order)
        if np.any(bad):
            warnings.warn(f"apparent order {np.nanmin(q[bad]) if np.ndim(q) else q:.2f} "
                          f"deviates from nominal {order}", OrderWarning, stacklevel=2)
    return extrapolated, error, q
