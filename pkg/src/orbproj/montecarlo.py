"""Monte Carlo oracle: Haar conjugation of canonical forms, corner projection
and spectral extraction.

Matrix realisations
    B: real antisymmetric (2n+1) x (2n+1), conjugated by SO(2n+1)
    D: real antisymmetric 2n x 2n, conjugated by O(2n)
    C: complex 2n x 2n anti-Hermitian A with A J = J conj(A), conjugated by
       unitaries Q with Q^T J Q = J, where J = [[0, I], [-I, 0]]

Canonical forms pair through <T, A> = -tr(T A) / 2, so that canonical
coordinates pair as sum_i t_i x_i.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .laplace import OrbitSpec, Series, as_series

STRUCTURE_TOL = 1e-8
PAIRING_TOL = 1e-9
CHUNK = 10_000


def _dim(series, n):
    return 2 * n + 1 if series is Series.B else 2 * n


def _rank(series, m):
    return (m - 1) // 2 if series is Series.B else m // 2


def canonical_from_coords(series, coords):
    """Canonical-form matrix for arbitrary real coordinates (no ordering check)."""
    series = as_series(series)
    x = np.asarray(coords, dtype=float)
    n = x.size
    if series is Series.C:
        return np.diag(np.concatenate([1j * x, -1j * x]))
    A = np.zeros((_dim(series, n),) * 2)
    idx = 2 * np.arange(n)
    A[idx, idx + 1] = x
    A[idx + 1, idx] = -x
    return A


def canonical_matrix(spec):
    return canonical_from_coords(spec.series, spec.X)


def haar_orthogonal(m, rng, size=None, special=False):
    """Haar-distributed O(m) (or SO(m) with ``special``) via QR of a Gaussian matrix.

    Returns ``(m, m)`` or ``(size, m, m)``.
    """
    shape = (m, m) if size is None else (size, m, m)
    Z = rng.standard_normal(shape)
    Q, R = np.linalg.qr(Z)
    d = np.sign(np.diagonal(R, axis1=-2, axis2=-1))
    d[d == 0] = 1.0
    Q = Q * d[..., None, :]
    if special:
        neg = np.linalg.det(Q) < 0
        Q[..., :, 0] = np.where(neg[..., None], -Q[..., :, 0], Q[..., :, 0])
    return Q


def _sigma(v, n):
    # quaternionic structure v -> J conj(v) on C^{2n}, acting on the second-to-last axis
    c = np.conj(v)
    return np.concatenate([c[..., n:, :], -c[..., :n, :]], axis=-2)


def haar_symplectic(n, rng, size=None):
    """Haar-distributed compact symplectic group element as a 2n x 2n unitary.

    Quaternionic Gram-Schmidt on complex Gaussian columns: column i is
    orthogonalised against columns 1..i-1 and their images under v -> J conj(v);
    column n+i is -J conj(column i).  The result satisfies Q^T J Q = J.
    """
    batch = (1 if size is None else size,)
    m = 2 * n
    Q = np.zeros(batch + (m, m), dtype=complex)
    for i in range(n):
        v = (rng.standard_normal(batch + (m, 1)) + 1j * rng.standard_normal(batch + (m, 1))) / np.sqrt(2)
        for _ in range(2):  # reorthogonalise once for stability
            for j in range(i):
                for u in (Q[..., :, j : j + 1], -Q[..., :, n + j : n + j + 1]):
                    v = v - u * np.sum(np.conj(u) * v, axis=-2, keepdims=True)
        v = v / np.linalg.norm(v, axis=-2, keepdims=True)
        Q[..., :, i : i + 1] = v
        Q[..., :, n + i : n + i + 1] = -_sigma(v, n)
    return Q[0] if size is None else Q


def haar_element(series, n, rng, size=None):
    series = as_series(series)
    if series is Series.C:
        return haar_symplectic(n, rng, size)
    return haar_orthogonal(_dim(series, n), rng, size, special=series is Series.B)


def corner_indices(series, n, k, position="top-left"):
    series = as_series(series)
    if not 1 <= k <= n:
        raise ValueError("corner rank must satisfy 1 <= k <= n")
    if position not in ("top-left", "bottom-right"):
        raise ValueError(f"unknown corner position {position!r}")
    if series is Series.C:
        block = np.arange(k) if position == "top-left" else np.arange(n - k, n)
        return np.concatenate([block, block + n])
    m, size = _dim(series, n), _dim(series, k)
    return np.arange(size) if position == "top-left" else np.arange(m - size, m)


def corner(series, M, k, position="top-left"):
    """Principal submatrix realising the projection onto the rank-k subalgebra."""
    series = as_series(series)
    M = np.asarray(M)
    n = _rank(series, M.shape[-1])
    idx = corner_indices(series, n, k, position)
    return M[..., idx[:, None], idx[None, :]]


def _check_structure(series, A):
    scale = 1.0
    if series is Series.C:
        m = A.shape[-1]
        n = m // 2
        J = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
        bad = max(
            np.max(np.abs(A + np.conj(np.swapaxes(A, -1, -2))), initial=0.0),
            np.max(np.abs(A @ J - J @ np.conj(A)), initial=0.0),
        )
    else:
        if np.iscomplexobj(A):
            bad = np.max(np.abs(A.imag), initial=0.0)
            A = A.real
        else:
            bad = 0.0
        bad = max(bad, np.max(np.abs(A + np.swapaxes(A, -1, -2)), initial=0.0))
    if bad > STRUCTURE_TOL * scale:
        raise ValueError("input not in expected algebra")


def spectrum_nonneg(series, A, check=True):
    """Nonnegative spectral coordinates (y_1 <= ... <= y_r) of A.

    The eigenvalues of A are +-i y_j (plus 0 in odd dimension).  They are
    computed from the Hermitian matrix iA.  Accepts stacked ``(..., m, m)``.
    """
    series = as_series(series)
    A = np.asarray(A)
    if check:
        _check_structure(series, A)
    m = A.shape[-1]
    r = _rank(series, m)
    lam = np.linalg.eigvalsh(1j * A)
    mirror = np.abs(lam + lam[..., ::-1])
    tol = PAIRING_TOL * max(1.0, float(np.max(np.abs(lam), initial=0.0)))
    if np.max(mirror, initial=0.0) > tol:
        raise ValueError("spectrum is not symmetric under y -> -y")
    return np.maximum(lam[..., m - r :], 0.0)


@dataclass(frozen=True)
class SampleBatch:
    """Sorted projected spectra, one row per Haar draw."""

    spec: OrbitSpec
    k: int
    samples: np.ndarray
    seed: int

    @property
    def N(self):
        return self.samples.shape[0]

    def metadata(self):
        return {
            "series": self.spec.series.value,
            "n": self.spec.n,
            "k": self.k,
            "X": list(self.spec.X),
            "N": self.N,
            "seed": self.seed,
        }

    def to_csv(self, path):
        """Write ``path`` (columns y_1..y_k) and the JSON sidecar next to it."""
        path = Path(path)
        header = ",".join(f"y_{i + 1}" for i in range(self.k))
        np.savetxt(path, self.samples, fmt="%.17g", delimiter=",", header=header, comments="")
        sidecar = sidecar_path(path)
        sidecar.write_text(json.dumps(self.metadata(), indent=2) + "\n")
        return path, sidecar

    @classmethod
    def from_csv(cls, path):
        path = Path(path)
        meta = json.loads(sidecar_path(path).read_text())
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        spec = OrbitSpec(meta["series"], tuple(meta["X"]))
        return cls(spec, int(meta["k"]), data, int(meta["seed"]))


def sidecar_path(path):
    return Path(path).with_suffix(".json")


def _chunk_sizes(N, chunk):
    return [min(chunk, N - s) for s in range(0, N, chunk)]


def _draw_chunk(spec, k, size, seed_seq, position):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    g = haar_element(spec.series, spec.n, rng, size)
    idx = corner_indices(spec.series, spec.n, k, position)
    rows = g[:, idx, :]
    A = canonical_matrix(spec)
    sub = rows @ A @ np.conj(np.swapaxes(rows, -1, -2))
    return spectrum_nonneg(spec.series, sub)


def sample_projected_spectrum(spec, k, N, seed, position="top-left", workers=1, chunk=CHUNK):
    """N Haar draws of the rank-k corner spectrum of g X g^{-1}.

    The draws are split into fixed-size chunks, each with its own child of
    ``SeedSequence(seed)``, so output depends only on (seed, N, chunk) and
    not on ``workers``.
    """
    if not 1 <= k < spec.n:
        raise ValueError("projection index must satisfy k < n")
    sizes = _chunk_sizes(int(N), chunk)
    children = np.random.SeedSequence(int(seed)).spawn(len(sizes))
    jobs = list(zip(sizes, children))
    run = lambda job: _draw_chunk(spec, k, job[0], job[1], position)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(job) for job in jobs]
    return SampleBatch(spec, k, np.concatenate(parts, axis=0), int(seed))


def mc_orbital_laplace(spec, T, N, seed, chunk=CHUNK):
    """Monte Carlo estimate of the integral of exp<T, g X g^{-1}> over Haar g.

    Returns ``(estimate, stderr)``.
    """
    T = np.asarray(T, dtype=float)
    if T.shape != (spec.n,):
        raise ValueError(f"T must have {spec.n} entries")
    Tm = canonical_from_coords(spec.series, T)
    A = canonical_matrix(spec)
    sizes = _chunk_sizes(int(N), chunk)
    children = np.random.SeedSequence(int(seed)).spawn(len(sizes))
    vals = []
    for size, child in zip(sizes, children):
        rng = np.random.Generator(np.random.PCG64(child))
        g = haar_element(spec.series, spec.n, rng, size)
        conj = g @ A @ np.conj(np.swapaxes(g, -1, -2))
        pairing = -0.5 * np.real(np.einsum("ij,aji->a", Tm, conj))
        vals.append(np.exp(pairing))
    vals = np.concatenate(vals)
    if vals.size < 2:
        return float(vals.mean()), 0.0
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(vals.size))


def ks_statistic(samples, cdf):
    """Kolmogorov-Smirnov distance between the sample EDF and ``cdf``."""
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    N = x.size
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, N + 1)
    return float(max(np.max(i / N - F), np.max(F - (i - 1) / N)))
