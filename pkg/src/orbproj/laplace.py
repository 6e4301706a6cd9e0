"""Harish-Chandra Laplace transforms of orbital measures for B, C, D.

For an orbit with coordinates X and a generic evaluation point T,

    L(T) = prefactor(n) * det[f(t_i x_j)] / (V(X^2) V(T^2)),

where V(S) = prod_{i<j} (s_i - s_j) and f is the even entire function
sinh(z)/z (B, C) or cosh(z) (D).  Restricting T to (t_1..t_k, 0..0) gives
the reduced divided-difference form in :func:`lemma1_reduced`.
"""

import enum
from dataclasses import dataclass
from math import factorial

import numpy as np

from .numerics import determinant, divided_difference, pochhammer

MAX_RANK = 8


class Series(str, enum.Enum):
    B = "B"  # SO(2n+1)
    C = "C"  # Sp(2n), compact form
    D = "D"  # O(2n)

    @property
    def alpha(self):
        return 0.5 if self is not Series.D else -0.5

    @property
    def group(self):
        return {"B": "SO(2n+1)", "C": "Sp(2n)", "D": "O(2n)"}[self.value]


def as_series(value):
    try:
        return value if isinstance(value, Series) else Series(str(value).upper())
    except ValueError:
        raise ValueError(f"unknown series {value!r}; expected one of B, C, D") from None


@dataclass(frozen=True)
class OrbitSpec:
    """Adjoint orbit through the canonical form with coordinates X."""

    series: Series
    X: tuple

    def __post_init__(self):
        object.__setattr__(self, "series", as_series(self.series))
        x = tuple(float(v) for v in self.X)
        if len(x) < 1:
            raise ValueError("X must have at least one coordinate")
        if not all(np.isfinite(x)):
            raise ValueError("X must be finite")
        if x[0] <= 0.0 or any(b <= a for a, b in zip(x[:-1], x[1:])):
            raise ValueError(
                "X must satisfy 0 < x_1 < ... < x_n; perturb degenerate coordinates "
                "by a small epsilon explicitly"
            )
        object.__setattr__(self, "X", x)

    @property
    def n(self):
        return len(self.X)


def vandermonde(s):
    """prod_{i<j} (s_i - s_j); 1 for fewer than two entries."""
    s = np.asarray(s, dtype=float)
    i, j = np.triu_indices(s.shape[-1], 1)
    return np.prod(s[..., i] - s[..., j], axis=-1)


def f_alpha(series, z):
    """sum_m z^{2m} / (4^m m! (alpha+1)_m) in closed form."""
    series = as_series(series)
    z = np.asarray(z, dtype=float)
    if series is Series.D:
        out = np.cosh(z)
    else:
        safe = np.where(z == 0.0, 1.0, z)
        out = np.where(z == 0.0, 1.0, np.sinh(safe) / safe)
    return float(out) if out.ndim == 0 else out


def _shi(z):
    # sinh-integral by its Taylor series; all terms share the sign of z
    z = np.asarray(z, dtype=float)
    term = z.copy()
    total = z.copy()
    z2 = z * z
    m = 0
    while True:
        m += 1
        term = term * z2 / ((2 * m) * (2 * m + 1))
        contrib = term / (2 * m + 1)
        total = total + contrib
        if np.all(np.abs(contrib) <= 1e-17 * np.abs(total)) or m > 2000:
            return total


def f_alpha_primitive(series, z):
    """Antiderivative of :func:`f_alpha` vanishing at 0."""
    series = as_series(series)
    z = np.asarray(z, dtype=float)
    out = np.sinh(z) if series is Series.D else _shi(z)
    return float(out) if out.ndim == 0 else out


def laplace_prefactor(series, n):
    """(2n-1)!(2n-3)!...1! for B/C, (2n-2)!...2! for D."""
    series = as_series(series)
    start = 1 if series is not Series.D else 0
    out = 1.0
    for m in range(start, 2 * n, 2):
        out *= factorial(m)
    return out


def a_coeff(series, m):
    """Product of the first ``m`` even Taylor coefficients of f_alpha."""
    series = as_series(series)
    alpha = series.alpha
    out = 1.0
    for j in range(m):
        out /= 4.0**j * factorial(j) * pochhammer(alpha + 1.0, j)
    return out


def _distinct_squares(values, what):
    sq = np.sort(np.asarray(values, dtype=float) ** 2)
    if sq.size > 1 and np.any(np.diff(sq) == 0.0):
        raise ValueError(f"degenerate {what}: squared entries must be pairwise distinct")


def _complete_homogeneous(s, R):
    """H[i, r] = h_r(s_1, ..., s_{i+1}) for r = 0..R."""
    n = s.size
    H = np.empty((n, R + 1))
    H[0] = s[0] ** np.arange(R + 1)
    for i in range(1, n):
        H[i, 0] = 1.0
        for r in range(1, R + 1):
            H[i, r] = H[i - 1, r] + s[i] * H[i, r - 1]
    return H


def _shifted(H):
    # A[i, m] = H[i, m - i], zero for m < i
    n, width = H.shape
    A = np.zeros((n, width))
    for i in range(n):
        A[i, i:] = H[i, : width - i]
    return A


def _dn_series(series, T, X):
    # Divide det[f(t_i x_j)] by both Vandermondes analytically: entry (i, j)
    # becomes sum_m c_m h_{m-i}(t_1^2..t_{i+1}^2) h_{m-j}(x_1^2..x_{j+1}^2),
    # a sum of nonnegative terms, so clustered or small T lose no precision.
    n = T.size
    zmax = float(np.max(np.abs(T)) * np.max(np.abs(X)))
    R = n + 40 + int(2 * zmax)
    alpha = as_series(series).alpha
    c = np.empty(R + 1)
    c[0] = 1.0
    for m in range(1, R + 1):
        c[m] = c[m - 1] / (4.0 * m * (alpha + m))
    A = _shifted(_complete_homogeneous(T**2, R))
    B = _shifted(_complete_homogeneous(X**2, R))
    return determinant((A * c) @ B.T)


SERIES_ZMAX = 30.0


def dn_ratio(series, T, X, method="auto"):
    """det[f(t_i x_j)] / (V(T^2) V(X^2)) for square T, X.

    ``method="determinant"`` evaluates the ratio literally.  ``"series"``
    uses the expansion in complete homogeneous polynomials of T^2 and X^2,
    which stays accurate when entries of T^2 nearly coincide or T is small.
    ``"auto"`` picks the series while max|t| max|x| <= 30.
    """
    T = np.asarray(T, dtype=float)
    X = np.asarray(X, dtype=float)
    if T.shape != X.shape or T.ndim != 1:
        raise ValueError("T and X must be 1-D of equal length")
    _distinct_squares(T, "evaluation point")
    _distinct_squares(X, "orbit coordinates")
    if method == "auto":
        small = np.max(np.abs(T)) * np.max(np.abs(X)) <= SERIES_ZMAX
        method = "series" if small else "determinant"
    if method == "series":
        return _dn_series(series, T, X)
    if method != "determinant":
        raise ValueError(f"unknown method {method!r}")
    mat = f_alpha(series, np.outer(T, X))
    num = determinant(np.atleast_2d(mat))
    return num / (vandermonde(T**2) * vandermonde(X**2))


def orbital_laplace(spec, T):
    """Closed-form orbital integral of exp<T, Ad_g X> over the group.

    ``<., .>`` is the invariant pairing under which canonical forms pair as
    sum_i t_i x_i.
    """
    T = np.asarray(T, dtype=float)
    if T.shape != (spec.n,):
        raise ValueError(f"T must have {spec.n} entries")
    if spec.n > MAX_RANK:
        raise ValueError(f"rank n <= {MAX_RANK} supported")
    if np.any(T == 0.0) or np.unique(np.abs(T)).size < T.size:
        raise ValueError("degenerate evaluation point")
    return laplace_prefactor(spec.series, spec.n) * float(dn_ratio(spec.series, T, spec.X))


def lemma2_doubled(f, zpoints):
    """g[-z_m, ..., -z_1, z_1, ..., z_m] with g(z) = z f(z).

    Equals phi[z_1^2, ..., z_m^2] for phi(y) = f(sqrt(y)) when f is even.
    """
    z = np.asarray(zpoints, dtype=float)
    if z.ndim != 1 or z.size < 1:
        raise ValueError("need at least one point")
    if z[0] <= 0.0 or np.any(np.diff(z) <= 0.0):
        raise ValueError("points must be positive and strictly increasing")
    knots = np.concatenate([-z[::-1], z])
    return divided_difference(lambda s: s * np.asarray(f(s), dtype=float), knots)


def lemma1_sign(n, k):
    """Sign making the reduced form agree with the limit of :func:`dn_ratio`.

    The reduced form is stated with V_n(X^2) against the ascending product
    prod(x_j^2 - x_i^2); the two conventions differ by this sign.
    """
    return -1.0 if (n * (n - 1) // 2 + k * (k - 1) // 2) % 2 else 1.0


def lemma1_reduced(spec, Tk):
    """D_n(f; t_1..t_k, 0..0; X) through divided differences over windows of X^2."""
    Tk = np.asarray(Tk, dtype=float)
    n, k = spec.n, Tk.size
    if Tk.ndim != 1 or not 1 <= k < n:
        raise ValueError("need 1 <= k < n evaluation coordinates")
    if np.any(Tk == 0.0):
        raise ValueError("evaluation coordinates must be nonzero")
    _distinct_squares(Tk, "evaluation point")
    p = n - k
    x = np.asarray(spec.X)
    y = x**2
    mat = np.empty((k, k))
    for i, t in enumerate(Tk):
        fi = lambda s, t=t: f_alpha(spec.series, t * s)
        for j in range(k):
            mat[i, j] = lemma2_doubled(fi, x[j : j + p + 1])
    ii, jj = np.triu_indices(n, 1)
    near = (jj - ii) <= p
    band = np.prod(y[jj[near]] - y[ii[near]])
    denom = vandermonde(y) * vandermonde(Tk**2) * np.prod(Tk) ** (2 * p)
    return lemma1_sign(n, k) * a_coeff(spec.series, p) * band * determinant(mat) / denom


def padded_limit(spec, Tk, eps=(1e-3, 1e-4)):
    """dn_ratio at (Tk, e, 2e, ..., (n-k)e) extrapolated to e -> 0.

    The ratio is even in every coordinate, so the error is O(e^2) and one
    Richardson step on the two step sizes removes it.
    """
    Tk = np.asarray(Tk, dtype=float)
    p = spec.n - Tk.size
    e1, e2 = eps
    pad = np.arange(1, p + 1, dtype=float)
    d1 = dn_ratio(spec.series, np.concatenate([Tk, e1 * pad]), spec.X)
    d2 = dn_ratio(spec.series, np.concatenate([Tk, e2 * pad]), spec.X)
    return float((d2 * e1**2 - d1 * e2**2) / (e1**2 - e2**2))
