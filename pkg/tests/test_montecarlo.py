import numpy as np
import pytest

from orbproj.laplace import OrbitSpec, Series, orbital_laplace
from orbproj.montecarlo import (
    SampleBatch,
    canonical_matrix,
    corner,
    haar_element,
    haar_orthogonal,
    haar_symplectic,
    ks_statistic,
    mc_orbital_laplace,
    sample_projected_spectrum,
    spectrum_nonneg,
)
from orbproj.radial import radial_cdf, radial_density


def J(n):
    return np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])


def test_canonical_examples():
    np.testing.assert_array_equal(canonical_matrix(OrbitSpec("B", (1.5,))), [[0, 1.5, 0], [-1.5, 0, 0], [0, 0, 0]])
    np.testing.assert_array_equal(canonical_matrix(OrbitSpec("D", (1.5,))), [[0, 1.5], [-1.5, 0]])
    A = canonical_matrix(OrbitSpec("C", (1.0, 2.0)))
    np.testing.assert_allclose(A @ J(2), J(2) @ np.conj(A))
    np.testing.assert_allclose(A, -A.conj().T)


@pytest.mark.parametrize("series", list(Series))
def test_canonical_spectrum(series):
    X = (0.4, 1.1, 2.5)
    A = canonical_matrix(OrbitSpec(series, X))
    eig = np.sort(np.linalg.eigvals(A).imag)
    expected = sorted([*X, *(-v for v in X)] + ([0.0] if series is Series.B else []))
    np.testing.assert_allclose(eig, expected, atol=1e-14)


@pytest.mark.parametrize("m", [1, 2, 5])
def test_haar_orthogonal(rng, m):
    Q = haar_orthogonal(m, rng, size=50)
    np.testing.assert_allclose(Q @ np.swapaxes(Q, 1, 2), np.broadcast_to(np.eye(m), Q.shape), atol=1e-12)
    np.testing.assert_allclose(np.abs(np.linalg.det(Q)), 1.0, atol=1e-12)
    S = haar_orthogonal(m, rng, size=50, special=True)
    np.testing.assert_allclose(np.linalg.det(S), 1.0, atol=1e-12)


def test_haar_orthogonal_mean_entry(rng):
    m, N = 4, 10_000
    q11 = haar_orthogonal(m, rng, size=N)[:, 0, 0]
    # E q11 = 0, Var q11 = 1/m
    assert abs(q11.mean()) <= 3 * np.sqrt(1 / m / N)
    assert q11.var() == pytest.approx(1 / m, rel=0.05)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_haar_symplectic_structure(rng, n):
    Q = haar_symplectic(n, rng, size=50)
    eye = np.broadcast_to(np.eye(2 * n), Q.shape)
    np.testing.assert_allclose(Q @ np.conj(np.swapaxes(Q, 1, 2)), eye, atol=1e-12)
    np.testing.assert_allclose(np.swapaxes(Q, 1, 2) @ J(n) @ Q, np.broadcast_to(J(n), Q.shape), atol=1e-12)
    single = haar_symplectic(n, rng)
    assert single.shape == (2 * n, 2 * n)


def test_haar_symplectic_trace_mean(rng):
    N = 10_000
    tr = np.trace(haar_symplectic(2, rng, size=N), axis1=1, axis2=2)
    # trace is real with E tr = 0 and E tr^2 = 1
    assert np.max(np.abs(tr.imag)) <= 1e-12
    assert abs(tr.real.mean()) <= 3 / np.sqrt(N)
    assert np.mean(tr.real**2) == pytest.approx(1.0, rel=0.06)


def test_corner_examples():
    A = canonical_matrix(OrbitSpec("B", (1.0, 2.0)))
    np.testing.assert_array_equal(corner("B", A, 1), [[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    assert corner("B", A, 1).shape == (3, 3)
    C = canonical_matrix(OrbitSpec("C", (1.0, 2.0, 3.0)))
    np.testing.assert_array_equal(corner("C", C, 2), np.diag([1j, 2j, -1j, -2j]))
    np.testing.assert_array_equal(corner("C", C, 1, position="bottom-right"), np.diag([3j, -3j]))


@pytest.mark.parametrize("series", list(Series))
def test_corner_preserves_structure(rng, series):
    spec = OrbitSpec(series, (0.5, 1.0, 2.0))
    g = haar_element(series, 3, rng)
    A = g @ canonical_matrix(spec) @ np.conj(g.T)
    for k in (1, 2):
        sub = corner(series, A, k)
        np.testing.assert_allclose(sub, -np.conj(sub.T), atol=1e-12)
        if series is Series.C:
            np.testing.assert_allclose(sub @ J(k), J(k) @ np.conj(sub), atol=1e-12)
        spectrum_nonneg(series, sub)
    assert corner("B", canonical_matrix(OrbitSpec("B", (1, 2, 3))), 2).shape == (5, 5)


@pytest.mark.parametrize("series", list(Series))
def test_spectrum_round_trip_and_conjugation(rng, series):
    X = (1.0, 2.0)
    A = canonical_matrix(OrbitSpec(series, X))
    np.testing.assert_allclose(spectrum_nonneg(series, A), X, atol=1e-14)
    g = haar_element(series, 2, rng, size=100)
    conj = g @ A @ np.conj(np.swapaxes(g, 1, 2))
    np.testing.assert_allclose(spectrum_nonneg(series, conj), np.broadcast_to(X, (100, 2)), atol=1e-10)
    np.testing.assert_array_equal(spectrum_nonneg(series, np.zeros_like(A)), [0.0, 0.0])


def test_spectrum_rejects_wrong_algebra():
    with pytest.raises(ValueError, match="expected algebra"):
        spectrum_nonneg("D", np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ValueError, match="expected algebra"):
        spectrum_nonneg("C", np.diag([1j, 1j]))


@pytest.mark.parametrize("series", list(Series))
def test_sample_rows_in_box_and_deterministic(series):
    spec = OrbitSpec(series, (0.5, 1.2, 2.0))
    a = sample_projected_spectrum(spec, 2, 3000, seed=99, chunk=1000)
    b = sample_projected_spectrum(spec, 2, 3000, seed=99, chunk=1000, workers=3)
    np.testing.assert_array_equal(a.samples, b.samples)
    assert a.samples.shape == (3000, 2)
    assert np.all(a.samples >= 0) and np.all(a.samples <= 2.0 + 1e-9)
    assert np.all(np.diff(a.samples, axis=1) >= 0)
    # the lower corner eigenvalue interlaces: y_1 <= x_2 for k = n - 1
    assert np.all(a.samples[:, 0] <= 1.2 + 1e-9)
    c = sample_projected_spectrum(spec, 2, 3000, seed=100, chunk=1000)
    assert not np.array_equal(a.samples, c.samples)


def test_sample_batch_csv_round_trip(tmp_path):
    spec = OrbitSpec("D", (1.0, 2.0, 3.0))
    batch = sample_projected_spectrum(spec, 2, 50, seed=7)
    csv_path, sidecar = batch.to_csv(tmp_path / "draws.csv")
    assert sidecar.name == "draws.json"
    again = SampleBatch.from_csv(csv_path)
    np.testing.assert_array_equal(again.samples, batch.samples)
    assert again.metadata() == batch.metadata() == {
        "series": "D", "n": 3, "k": 2, "X": [1.0, 2.0, 3.0], "N": 50, "seed": 7,
    }
    assert csv_path.read_text().splitlines()[0] == "y_1,y_2"


def test_mc_laplace_zero_point():
    est, err = mc_orbital_laplace(OrbitSpec("B", (1.0, 2.0)), [0.0, 0.0], 1000, seed=1)
    assert est == 1.0 and err == 0.0


@pytest.mark.parametrize(
    "spec, T, exact",
    [
        (OrbitSpec("D", (1.0,)), [1.0], np.cosh(1.0)),
        (OrbitSpec("B", (1.0,)), [1.0], np.sinh(1.0)),
        (OrbitSpec("C", (1.0,)), [1.0], np.sinh(1.0)),
    ],
)
def test_mc_laplace_rank_one(spec, T, exact):
    est, err = mc_orbital_laplace(spec, T, 100_000, seed=5)
    assert abs(est - exact) <= 3 * err


@pytest.mark.parametrize("series", list(Series))
def test_mc_laplace_rank_three(series):
    spec = OrbitSpec(series, (0.5, 1.0, 1.5))
    T = np.array([0.2, -0.5, 0.7])
    est, err = mc_orbital_laplace(spec, T, 50_000, seed=11)
    assert abs(est - orbital_laplace(spec, T)) <= 3 * err


def test_ks_statistic_examples(rng):
    assert ks_statistic([0.0], lambda x: np.full_like(x, 0.5)) == 0.5
    N = 10_000
    u = rng.uniform(size=N)
    assert ks_statistic(u, lambda x: np.clip(x, 0, 1)) < 1.63 / np.sqrt(N)
    assert ks_statistic(u**2, lambda x: np.clip(x, 0, 1)) > 0.2


@pytest.mark.parametrize("series", list(Series))
def test_bottom_right_corner_matches_density(series):
    spec = OrbitSpec(series, (1.0, 2.0, 3.0))
    rd = radial_density(spec, 1)
    N = 40_000
    crit = 1.63 / np.sqrt(N)
    for pos in ("top-left", "bottom-right"):
        batch = sample_projected_spectrum(spec, 1, N, seed=2024, position=pos)
        assert ks_statistic(batch.samples[:, 0], lambda y: radial_cdf(rd, y)) < crit
