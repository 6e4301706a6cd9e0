"""Scalar and small-matrix primitives: divided differences, combinatorial
constants, determinants and Gauss-Legendre quadrature."""

from functools import lru_cache
from math import comb, prod

import numpy as np


def _check_distinct(knots):
    srt = np.sort(knots)
    if srt.size > 1 and np.any(np.diff(srt) == 0.0):
        raise ValueError("coincident knots unsupported")


def divided_difference_values(values, knots):
    """Divided difference from precomputed values ``values[i] = f(knots[i])``.

    Uses the triangular Newton table.  Trailing axes of ``values`` beyond the
    first are carried along, so several functions can share one knot set.
    """
    knots = np.asarray(knots, dtype=float)
    table = np.asarray(values, dtype=float)
    if knots.ndim != 1 or knots.size < 1:
        raise ValueError("need at least one knot")
    if table.shape[0] != knots.size:
        raise ValueError("values and knots differ in length")
    _check_distinct(knots)
    extra = (slice(None),) + (None,) * (table.ndim - 1)
    for r in range(1, knots.size):
        table = (table[1:] - table[:-1]) / (knots[r:] - knots[:-r])[extra]
    return table[0]


def divided_difference(f, knots):
    """f[t_1, ..., t_n] for pairwise distinct knots.

    Parameters:
        f (callable): real function, called once on the knot array
        knots (sequence of float): pairwise distinct points, any order

    Returns:
        float: the divided difference; ``f(t_1)`` for a single knot
    """
    knots = np.asarray(knots, dtype=float)
    if knots.ndim != 1 or knots.size < 1:
        raise ValueError("need at least one knot")
    _check_distinct(knots)
    return float(divided_difference_values(np.asarray(f(knots), dtype=float), knots))


def pochhammer(a, m):
    """Rising factorial (a)_m = a (a+1) ... (a+m-1); (a)_0 = 1."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return float(prod((a + i for i in range(m)), start=1.0))


@lru_cache(maxsize=None)
def double_factorial(m):
    if m < -1:
        raise ValueError("double factorial undefined below -1")
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def binomial(a, b):
    if b < 0 or a < 0:
        return 0
    return comb(a, b)


def determinant(matrix):
    """Determinant via LU with partial pivoting (LAPACK getrf).

    Stacked input ``(..., k, k)`` returns an array of determinants.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2] or m.shape[-1] < 1:
        raise ValueError("expected a square matrix of order >= 1")
    det = np.linalg.det(m)
    return float(det) if np.ndim(det) == 0 else det


@lru_cache(maxsize=64)
def _leggauss(npts):
    x, w = np.polynomial.legendre.leggauss(npts)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_nodes(a, b, npts):
    """Nodes and weights of the ``npts``-point rule mapped to [a, b]."""
    if npts < 1:
        raise ValueError("npts must be positive")
    x, w = _leggauss(npts)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


def gauss_legendre(f, a, b, npts):
    """Integrate ``f`` over [a, b]; exact for polynomials of degree 2*npts-1.

    ``f`` is called once with the array of nodes.
    """
    if not a < b:
        raise ValueError("need a < b")
    nodes, weights = gauss_legendre_nodes(a, b, npts)
    return float(np.dot(weights, np.asarray(f(nodes), dtype=float)))


def composite_nodes(a, b, npts, breaks=None):
    """Gauss-Legendre nodes/weights on [a, b], split at interior ``breaks``.

    Integrands that are polynomial between breakpoints are then integrated
    exactly once ``npts`` is large enough for the piece degree.
    """
    edges = [a]
    if breaks is not None:
        edges += sorted(float(c) for c in breaks if a < c < b)
    edges.append(b)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            x, w = gauss_legendre_nodes(lo, hi, npts)
            xs.append(x)
            ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def cube_integrate(f, box, npts_per_axis, breaks=None, chunk=200_000):
    """Tensor-product Gauss-Legendre integral over a box in R^k.

    Parameters:
        f (callable): maps an ``(m, k)`` array of points to ``(m,)`` values
        box (sequence of (lo, hi)): one interval per axis
        npts_per_axis (int): Gauss points per axis (per piece if ``breaks``)
        breaks (sequence, optional): interior breakpoints applied on every axis
        chunk (int): maximum number of points passed to ``f`` per call

    Returns:
        float
    """
    box = [(float(lo), float(hi)) for lo, hi in box]
    if not box:
        raise ValueError("box must have at least one axis")
    axes = [composite_nodes(lo, hi, npts_per_axis, breaks) for lo, hi in box]
    k = len(axes)
    sizes = [ax[0].size for ax in axes]
    total = 0.0
    n_points = int(np.prod(sizes))
    # enumerate the grid in flat index chunks to bound memory
    for start in range(0, n_points, chunk):
        flat = np.arange(start, min(start + chunk, n_points))
        idx = np.unravel_index(flat, sizes)
        pts = np.empty((flat.size, k))
        wts = np.ones(flat.size)
        for ax, (x, w) in enumerate(axes):
            pts[:, ax] = x[idx[ax]]
            wts *= w[idx[ax]]
        total += float(np.dot(wts, np.asarray(f(pts), dtype=float)))
    return total
