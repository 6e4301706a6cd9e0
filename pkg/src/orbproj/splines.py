"""Curry-Schoenberg M-splines with simple knots.

``M_n(t_1, ..., t_n; t)`` is the piecewise polynomial of degree n-2 supported
on [t_1, t_n] with unit integral.  Two evaluators are provided: the
truncated-power divided difference (reference) and the Cox-de Boor recurrence
(production).  Both are right-continuous at knots and vanish at t_n.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np

from . import _kernels
from .numerics import composite_nodes, divided_difference

MAX_ORDER = 18


@dataclass(frozen=True)
class KnotVector:
    """Strictly increasing knots of one M-spline; order = number of knots."""

    knots: tuple

    def __post_init__(self):
        kn = tuple(float(v) for v in self.knots)
        if len(kn) < 2:
            raise ValueError("a knot vector needs at least 2 knots")
        if not np.all(np.isfinite(kn)):
            raise ValueError("knots must be finite")
        if any(b <= a for a, b in zip(kn[:-1], kn[1:])):
            raise ValueError("knots must be strictly increasing (coincident knots unsupported)")
        if len(kn) > MAX_ORDER:
            raise ValueError(f"spline order {len(kn)} exceeds supported maximum {MAX_ORDER}")
        object.__setattr__(self, "knots", kn)

    @property
    def order(self):
        return len(self.knots)

    @property
    def array(self):
        return np.array(self.knots)

    @property
    def support(self):
        return self.knots[0], self.knots[-1]

    def drop_last(self):
        return KnotVector(self.knots[:-1])

    def drop_first(self):
        return KnotVector(self.knots[1:])


def symmetric_knots(x, j, m):
    """Knots (-x_{j+m}, ..., -x_j, x_j, ..., x_{j+m}); ``j`` is 1-based."""
    x = [float(v) for v in x]
    if j < 1 or m < 0 or j + m > len(x):
        raise ValueError(f"window j={j}, m={m} does not fit {len(x)} coordinates")
    window = x[j - 1 : j + m]
    if window[0] <= 0.0:
        raise ValueError("zero or negative knot collides under reflection")
    return KnotVector(tuple(-v for v in reversed(window)) + tuple(window))


def _as_points(t):
    arr = np.asarray(t, dtype=float)
    return arr, np.ascontiguousarray(arr.ravel())


def _restore(arr, flat_values):
    if arr.ndim == 0:
        return float(flat_values[0])
    return flat_values.reshape(arr.shape)


def mspline_eval(kv, t):
    """M-spline value from the truncated-power divided difference
    ``(n-1) * (s -> (s-t)_+^{n-2})[t_1, ..., t_n]``.

    Reference evaluator; loses precision for high orders or wide knot spans.
    Accepts a scalar or an array of points.
    """
    arr, flat = _as_points(t)
    return _restore(arr, _kernels.truncated_power(kv.array, flat))


def mspline_eval_stable(kv, t):
    """M-spline value from the Cox-de Boor recurrence, rescaled to unit mass."""
    arr, flat = _as_points(t)
    return _restore(arr, _kernels.cox_de_boor(kv.array, flat))


def mspline_derivative(kv, t):
    """d/dt M_m(t_1..t_m; t) as a difference of two order-(m-1) splines.

    For order 3 the result is the one-sided (right) derivative at knots.
    """
    m = kv.order
    if m < 3:
        raise ValueError("derivative of order-2 spline is distributional")
    scale = (m - 1) / (kv.knots[-1] - kv.knots[0])
    lower = mspline_eval_stable(kv.drop_last(), t)
    upper = mspline_eval_stable(kv.drop_first(), t)
    return scale * (lower - upper)

def integrate_against(g, kv, npts=20):
    """Integral of ``g(t) * M(kv; t)`` by Gauss-Legendre between consecutive knots."""
    lo, hi = kv.support
    nodes, weights = composite_nodes(lo, hi, npts, kv.knots[1:-1])
    return float(np.dot(weights, np.asarray(g(nodes), dtype=float) * mspline_eval_stable(kv, nodes)))


def hermite_genocchi_residual(f, dfn, kv, npts=20):
    """f[t_1..t_n] - (1/(n-1)!) * integral of f^{(n-1)} M_n.

    ``dfn`` must be the (n-1)-th derivative of ``f``; it is called with an
    array of quadrature nodes.
    """
    n = kv.order
    lhs = divided_difference(f, kv.knots)
    rhs = integrate_against(dfn, kv, npts) / factorial(n - 1)
    return lhs - rhs
