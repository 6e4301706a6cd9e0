"""Hot inner loops for M-spline evaluation.

Each kernel exists twice: a vectorised numpy version (``*_np``) and a
scalar-loop version compiled with numba (``*_nb``).  The public names
(``cox_de_boor``, ``truncated_power``) point at the numba versions unless
``ORBPROJ_DISABLE_NUMBA`` is set or numba is missing.

All kernels take a 1-D float64 array of strictly increasing knots and a 1-D
float64 array of evaluation points and return the unit-mass M-spline values.
Knots are half-open on the right: the value at the last knot is 0.
"""

import numpy as np

from ._jit import USE_NUMBA, njit


def cox_de_boor_np(knots, ts):
    n = knots.shape[0]
    tt = ts[:, None]
    basis = ((knots[:-1] <= tt) & (tt < knots[1:])).astype(np.float64)
    for r in range(1, n - 1):
        lo = knots[: n - 1 - r]
        left = (tt - lo) / (knots[r : n - 1] - lo) * basis[:, :-1]
        hi = knots[r + 1 : n]
        right = (hi - tt) / (hi - knots[1 : n - r]) * basis[:, 1:]
        basis = left + right
    return basis[:, 0] * ((n - 1) / (knots[-1] - knots[0]))


def truncated_power_np(knots, ts):
    n = knots.shape[0]
    deg = n - 2
    diff = knots[None, :] - ts[:, None]
    if deg == 0:
        table = (diff > 0).astype(np.float64)
        sign = np.ones(ts.shape[0])
    else:
        # left of the midpoint use (t - s)_+^d; the two truncated powers differ
        # by a degree-d polynomial, whose divided difference over d+2 knots is 0
        left = ts < 0.5 * (knots[0] + knots[-1])
        diff = np.where(left[:, None], -diff, diff)
        table = np.where(diff > 0, diff, 0.0) ** deg
        sign = np.where(left, -((-1.0) ** deg), 1.0)
    for r in range(1, n):
        table = (table[:, 1:] - table[:, :-1]) / (knots[r:] - knots[:-r])
    out = (n - 1) * sign * table[:, 0]
    inside = (ts >= knots[0]) & (ts < knots[-1])
    return np.where(inside, out, 0.0)


@njit
def cox_de_boor_nb(knots, ts):
    n = knots.shape[0]
    m = ts.shape[0]
    out = np.zeros(m)
    scale = (n - 1) / (knots[n - 1] - knots[0])
    basis = np.empty(n - 1)
    for a in range(m):
        t = ts[a]
        if t < knots[0] or t >= knots[n - 1]:
            continue
        for i in range(n - 1):
            basis[i] = 1.0 if (knots[i] <= t and t < knots[i + 1]) else 0.0
        for r in range(1, n - 1):
            for i in range(n - 1 - r):
                lo = knots[i]
                hi = knots[i + r + 1]
                basis[i] = (t - lo) / (knots[i + r] - lo) * basis[i] + (hi - t) / (
                    hi - knots[i + 1]
                ) * basis[i + 1]
        out[a] = basis[0] * scale
    return out


@njit
def truncated_power_nb(knots, ts):
    n = knots.shape[0]
    deg = n - 2
    m = ts.shape[0]
    mid = 0.5 * (knots[0] + knots[n - 1])
    out = np.zeros(m)
    table = np.empty(n)
    for a in range(m):
        t = ts[a]
        if t < knots[0] or t >= knots[n - 1]:
            continue
        flip = deg > 0 and t < mid
        for i in range(n):
            d = t - knots[i] if flip else knots[i] - t
            if d > 0.0:
                table[i] = d**deg
            else:
                table[i] = 0.0
        for r in range(1, n):
            for i in range(n - r):
                table[i] = (table[i + 1] - table[i]) / (knots[i + r] - knots[i])
        sign = 1.0
        if flip and deg % 2 == 0:
            sign = -1.0
        out[a] = (n - 1) * sign * table[0]
    return out


if USE_NUMBA:
    cox_de_boor = cox_de_boor_nb
    truncated_power = truncated_power_nb
else:
    cox_de_boor = cox_de_boor_np
    truncated_power = truncated_power_np
