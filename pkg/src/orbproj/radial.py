"""Radial part of the projection of an orbital measure.

For 1 <= k < n and p = n - k the projected radial part has, on the chamber
0 <= y_1 <= ... <= y_k, the Lebesgue density

    rho(Y) = 2^k c(n,k) / prod_{j-i>=p+1}(x_j^2 - x_i^2)
             * det[Delta M_{2p+2}(+-x|_j^{j+p}; y_i)]_{i,j=1..k}
             * prod_{i<j}(y_j^2 - y_i^2),

with Delta = -y d/dy + kappa.  The factor 2^k folds the even extension of
each spline onto y >= 0.  rho extends to a symmetric function on the cube
[0, x_n]^k, which is what the quadrature routines integrate.
"""

from dataclasses import dataclass
from math import factorial, prod

import numpy as np

from .laplace import OrbitSpec, Series, as_series, f_alpha, laplace_prefactor, lemma1_reduced
from .numerics import binomial, composite_nodes, cube_integrate, double_factorial
from .splines import KnotVector, mspline_derivative, mspline_eval_stable, symmetric_knots

MAX_CODIMENSION = 8


@dataclass(frozen=True)
class SeriesParams:
    series: Series
    n: int
    k: int
    kappa: float
    c: float

    @property
    def alpha(self):
        return self.series.alpha


def make_params(series, n, k):
    series = as_series(series)
    if not 1 <= k < n:
        raise ValueError("projection index must satisfy k < n")
    p = n - k
    if series is Series.D:
        kappa = 2.0 * p
        c = double_factorial(2 * p - 1) / double_factorial(2 * n - 1)
        c *= prod(binomial(2 * p + 2 * i + 1, 2 * i) for i in range(k))
    else:
        kappa = 0.0
        c = double_factorial(2 * p) / double_factorial(2 * n)
        c *= prod(binomial(2 * p + 2 * i + 2, 2 * i + 1) for i in range(k))
    return SeriesParams(series, n, k, kappa, float(c))


@dataclass(frozen=True)
class RadialDensity:
    spec: OrbitSpec
    k: int
    params: SeriesParams
    windows: tuple
    denom: float

    @property
    def n(self):
        return self.spec.n

    @property
    def scale(self):
        """Overall constant 2^k c / denom in front of the determinant."""
        return 2.0**self.k * self.params.c / self.denom


def radial_density(spec, k):
    """Precompute the density of the radial part for projecting ``spec`` to rank ``k``."""
    params = make_params(spec.series, spec.n, k)
    p = spec.n - k
    if p > MAX_CODIMENSION:
        raise ValueError(f"n - k <= {MAX_CODIMENSION} supported (spline order <= {2 * MAX_CODIMENSION + 2})")
    windows = tuple(symmetric_knots(spec.X, j, p) for j in range(1, k + 1))
    y = np.asarray(spec.X) ** 2
    ii, jj = np.triu_indices(spec.n, 1)
    far = (jj - ii) >= p + 1
    denom = float(np.prod(y[jj[far]] - y[ii[far]]))
    if denom == 0.0:
        raise ValueError("degenerate orbit coordinates")
    return RadialDensity(spec, k, params, windows, denom)


def delta_M(kv, y, kappa):
    """(-y d/dy + kappa) applied to the M-spline ``kv`` at ``y``."""
    if kv.order < 4 or kv.order % 2:
        raise ValueError("Delta is applied to even-order splines of order >= 4")
    y = np.asarray(y, dtype=float)
    out = -y * mspline_derivative(kv, y)
    if kappa:
        out = out + kappa * mspline_eval_stable(kv, y)
    return float(out) if np.ndim(out) == 0 else out


def _delta_table(rd, ys):
    """``H[..., j] = Delta M_j(ys)`` for every window j."""
    kappa = rd.params.kappa
    return np.stack([delta_M(w, ys, kappa) for w in rd.windows], axis=-1)


def _ascending_vandermonde(vals):
    i, j = np.triu_indices(vals.shape[-1], 1)
    return np.prod(vals[..., j] - vals[..., i], axis=-1)


def _delta_det(rd, pts):
    # pts: (m, k); returns det[Delta M_j(y_i)] row i <-> point coordinate i
    H = _delta_table(rd, pts)  # (m, k, k): [a, i, j]
    if rd.k == 1:
        return H[:, 0, 0]
    return np.linalg.det(H)


def _symmetric_density(rd, pts):
    pts = np.asarray(pts, dtype=float)
    vals = rd.scale * _delta_det(rd, pts) * _ascending_vandermonde(pts**2)
    outside = np.any((pts < 0.0) | (pts > rd.spec.X[-1]), axis=-1)
    return np.where(outside, 0.0, vals) + 0.0  # no signed zeros in output


def density_eval(rd, Y):
    """Lebesgue density of the radial part on the chamber.

    ``Y`` is one k-tuple or an ``(m, k)`` array; each tuple is sorted first.
    """
    pts = np.sort(np.atleast_2d(np.asarray(Y, dtype=float)), axis=-1)
    if pts.shape[-1] != rd.k:
        raise ValueError(f"expected {rd.k} coordinates per point")
    out = _symmetric_density(rd, pts)
    return float(out[0]) if np.ndim(Y) == 1 or np.ndim(Y) == 0 else out


def density_vk(rd, Y):
    """Density relative to v_k(dY) = V_k(Y^2) dY, V_k(S) = prod_{i<j}(s_i - s_j)."""
    pts = np.sort(np.atleast_2d(np.asarray(Y, dtype=float)), axis=-1)
    sign = -1.0 if (rd.k * (rd.k - 1) // 2) % 2 else 1.0
    out = sign * rd.scale * _delta_det(rd, pts)
    outside = np.any((pts < 0.0) | (pts > rd.spec.X[-1]), axis=-1)
    out = np.where(outside, 0.0, out)
    return float(out[0]) if np.ndim(Y) <= 1 else out


def support_box(rd):
    return [(0.0, rd.spec.X[-1])] * rd.k


def _default_npts(rd):
    # per-piece polynomial degree in each variable is 2p + 2(k-1)
    return rd.n + 1


def normalization(rd, npts_per_axis=None):
    """Total mass of the radial part; should be 1.

    Integrates the symmetric extension over [0, x_n]^k with Gauss-Legendre
    pieces split at the orbit coordinates, then divides by k!.
    """
    npts = npts_per_axis or _default_npts(rd)
    total = cube_integrate(
        lambda pts: _symmetric_density(rd, pts), support_box(rd), npts, breaks=rd.spec.X[:-1]
    )
    return total / factorial(rd.k)


def radial_cdf(rd, y, npts=None):
    """CDF of the radial part for k = 1, exact up to round-off."""
    if rd.k != 1:
        raise ValueError("the CDF is only provided for k = 1")
    npts = npts or _default_npts(rd)
    y = np.asarray(y, dtype=float)
    flat = np.clip(y.ravel(), 0.0, rd.spec.X[-1])
    edges = np.concatenate([[0.0], rd.spec.X])
    cum = np.zeros(edges.size)
    for c in range(edges.size - 1):
        nodes, weights = composite_nodes(edges[c], edges[c + 1], npts)
        cum[c + 1] = cum[c] + np.dot(weights, _symmetric_density(rd, nodes[:, None]))
    cell = np.clip(np.searchsorted(edges, flat, side="right") - 1, 0, edges.size - 2)
    lo = edges[cell]
    x, w = np.polynomial.legendre.leggauss(npts)
    half = 0.5 * (flat - lo)
    nodes = lo[:, None] + half[:, None] * (x + 1.0)
    vals = _symmetric_density(rd, nodes.reshape(-1, 1)).reshape(nodes.shape)
    out = cum[cell] + half * (vals @ w)
    return float(out[0]) if y.ndim == 0 else out.reshape(y.shape)


def _projected_laplace_integrand(rd, Tk, pts):
    # L_k(Y; T) * rho(Y); the Vandermondes in Y cancel, leaving a smooth function
    Tk = np.asarray(Tk, dtype=float)
    F = f_alpha(rd.spec.series, Tk[None, :, None] * pts[:, None, :])  # [a, i, l]
    detF = F[:, 0, 0] if rd.k == 1 else np.linalg.det(F)
    const = laplace_prefactor(rd.spec.series, rd.k) / _ascending_vandermonde(Tk**2)
    return const * rd.scale * detF * _delta_det(rd, pts)


def projection_identity_sides(rd, Tk, npts_per_axis=16):
    """Both sides of the restriction identity for the Laplace transform.

    Returns ``(lhs, rhs)``: the rank-n transform at (Tk, 0, ..., 0) and the
    integral of rank-k transforms against the radial part.
    """
    Tk = np.asarray(Tk, dtype=float)
    if Tk.shape != (rd.k,):
        raise ValueError(f"Tk must have {rd.k} entries")
    lhs = laplace_prefactor(rd.spec.series, rd.n) * lemma1_reduced(rd.spec, Tk)
    rhs = cube_integrate(
        lambda pts: _projected_laplace_integrand(rd, Tk, pts),
        support_box(rd),
        npts_per_axis,
        breaks=rd.spec.X[:-1],
    ) / factorial(rd.k)
    return float(lhs), float(rhs)


def projection_identity_residual(rd, Tk, npts_per_axis=16):
    lhs, rhs = projection_identity_sides(rd, Tk, npts_per_axis)
    return abs(lhs - rhs)
