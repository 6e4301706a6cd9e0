"""Exit criteria.  Each test records one PASS/FAIL line, printed in the
pytest terminal summary (and directly with ``pytest -s``)."""

import time
from contextlib import contextmanager
from math import factorial

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import dd_lagrange
from orbproj.cli import main
from orbproj.laplace import OrbitSpec, Series, lemma1_reduced, lemma2_doubled, orbital_laplace, padded_limit
from orbproj.montecarlo import ks_statistic, mc_orbital_laplace, sample_projected_spectrum
from orbproj.numerics import composite_nodes
from orbproj.radial import normalization, projection_identity_residual, radial_cdf, radial_density
from orbproj.splines import hermite_genocchi_residual, mspline_derivative, mspline_eval, mspline_eval_stable
from orbproj.verify import random_knots

SEED = 7_2016


@contextmanager
def criterion(number, title, budget):
    """Time the block, then record and enforce the runtime budget."""
    state = {"detail": ""}
    start = time.perf_counter()
    ok = False
    try:
        yield state
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < budget
        line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {state['detail']} ({elapsed:.2f}s / {budget:g}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert elapsed < budget, f"runtime {elapsed:.2f}s exceeds {budget}s"


def test_01_spline_axioms():
    rng = np.random.default_rng(SEED)
    with criterion(1, "spline axioms, 50 knot vectors", 5.0) as st:
        worst_mass = 0.0
        for _ in range(50):
            kv = random_knots(rng, int(rng.integers(2, 11)))
            nodes, w = composite_nodes(kv.knots[0], kv.knots[-1], 8, kv.knots[1:-1])
            for evaluate in (mspline_eval, mspline_eval_stable):
                worst_mass = max(worst_mass, abs(np.dot(w, evaluate(kv, nodes)) - 1.0))
                left = kv.knots[0] - rng.uniform(1e-9, 3.0, 50)
                right = kv.knots[-1] + rng.uniform(0.0, 3.0, 50)
                assert np.all(evaluate(kv, np.concatenate([left, right])) == 0.0)
                inside = np.linspace(kv.knots[0], kv.knots[-1], 101)[1:-1]
                assert np.all(evaluate(kv, inside) > 0.0)
        st["detail"] = f"max |mass - 1| = {worst_mass:.1e} (tol 1e-10)"
        assert worst_mass <= 1e-10


def test_02_hermite_genocchi():
    rng = np.random.default_rng(SEED + 2)
    sin_d = [np.sin, np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t)]
    with criterion(2, "Hermite-Genocchi, orders 2-8", 5.0) as st:
        worst = 0.0
        for order in range(2, 9):
            d = order - 1
            for _ in range(5):
                kv = random_knots(rng, order)
                p = np.polynomial.Polynomial(rng.uniform(-1, 1, int(rng.integers(1, 8))))
                for f, dfn in ((np.exp, np.exp), (np.sin, sin_d[d % 4]), (p, p.deriv(d))):
                    worst = max(worst, abs(hermite_genocchi_residual(f, dfn, kv)))
        st["detail"] = f"max residual = {worst:.1e} (tol 1e-9)"
        assert worst <= 1e-9


def test_03_derivative_recurrence():
    rng = np.random.default_rng(SEED + 3)
    h = 1e-5
    with criterion(3, "derivative recurrence vs central FD, 100 cases", 5.0) as st:
        worst = 0.0
        for _ in range(100):
            kv = random_knots(rng, int(rng.integers(3, 11)))
            while True:
                t = rng.uniform(kv.knots[0], kv.knots[-1])
                if np.min(np.abs(np.array(kv.knots) - t)) >= 1e-3:
                    break
            fd = (mspline_eval_stable(kv, t + h) - mspline_eval_stable(kv, t - h)) / (2 * h)
            worst = max(worst, abs(mspline_derivative(kv, t) - fd))
        st["detail"] = f"max |diff| = {worst:.1e} (tol 1e-6)"
        assert worst <= 1e-6


def test_04_lemma2():
    rng = np.random.default_rng(SEED + 4)
    funcs = [np.cosh, lambda z: np.sinh(z) / z, lambda z: np.exp(z**2), np.cos, lambda z: 1 + z**2 + z**4 / 3 + z**6 / 7]
    with criterion(4, "knot doubling, 100 cases", 2.0) as st:
        worst = 0.0
        for c in range(100):
            f = funcs[c % len(funcs)]
            m = int(rng.integers(1, 5))
            z = np.cumsum(rng.uniform(0.2, 0.8, m))
            direct = dd_lagrange(lambda y: f(np.sqrt(y)), list(z**2))
            worst = max(worst, abs(lemma2_doubled(f, z) - direct) / abs(direct))
        st["detail"] = f"max rel err = {worst:.1e} (tol 1e-10)"
        assert worst <= 1e-10


@pytest.mark.parametrize("series", list(Series))
def test_05_harish_chandra_vs_monte_carlo(series):
    rng = np.random.default_rng(SEED + 5)
    spec = OrbitSpec(series, (1.0, 2.0))
    T = rng.uniform(-1, 1, 2)
    T *= rng.uniform(0.2, 1.0) / np.linalg.norm(T)
    with criterion(5, f"Harish-Chandra vs MC, series {series.value}", 60.0) as st:
        est, err = mc_orbital_laplace(spec, T, 100_000, seed=SEED + ord(series.value))
        exact = orbital_laplace(spec, T)
        z = abs(est - exact) / err
        st["detail"] = f"|mc - exact| = {z:.2f} stderr (tol 3)"
        assert z <= 3.0


def test_06_lemma1_consistency():
    rng = np.random.default_rng(SEED + 6)
    with criterion(6, "reduced form vs padded limit, n <= 3", 10.0) as st:
        worst = 0.0
        for series in Series:
            for X in [(1.0, 2.0), (1.0, 2.0, 3.0), (0.6, 1.3, 2.4)]:
                for k in range(1, len(X)):
                    Tk = np.sort(rng.uniform(0.2, 1.5, k))
                    spec = OrbitSpec(series, X)
                    limit = padded_limit(spec, Tk)
                    worst = max(worst, abs(lemma1_reduced(spec, Tk) - limit) / abs(limit))
        st["detail"] = f"max rel err = {worst:.1e} (tol 1e-4)"
        assert worst <= 1e-4


def _separated_orbits(rng, n, count):
    out = [tuple(float(v) for v in range(1, n + 1))]
    while len(out) < count:
        x = np.sort(rng.uniform(0.3, 3.5, n))
        if np.min(np.diff(np.concatenate([[0.0], x**2]))) >= 0.5:
            out.append(tuple(x))
    return out


def test_07_normalization():
    rng = np.random.default_rng(SEED + 7)
    with criterion(7, "normalization, n <= 4, all k < n", 60.0) as st:
        worst, count = 0.0, 0
        for series in Series:
            for n in (2, 3, 4):
                for X in _separated_orbits(rng, n, 3):
                    for k in range(1, n):
                        worst = max(worst, abs(normalization(radial_density(OrbitSpec(series, X), k)) - 1.0))
                        count += 1
        st["detail"] = f"{count} specs, max |mass - 1| = {worst:.1e} (tol 1e-4)"
        assert worst <= 1e-4


def test_08_projection_identity():
    rng = np.random.default_rng(SEED + 8)
    with criterion(8, "projection identity, n <= 3", 60.0) as st:
        worst, count = 0.0, 0
        for series in Series:
            for X in [(1.0, 2.0), (1.0, 2.0, 3.0), (0.7, 1.5, 2.2)]:
                for k in range(1, len(X)):
                    rd = radial_density(OrbitSpec(series, X), k)
                    for _ in range(2):
                        while True:
                            Tk = np.sort(rng.uniform(0.2, 2.0 / np.sqrt(k), k))
                            if k == 1 or np.min(np.diff(Tk)) > 0.05:
                                break
                        worst = max(worst, projection_identity_residual(rd, Tk))
                        count += 1
        st["detail"] = f"{count} cases, max residual = {worst:.1e} (tol 1e-3)"
        assert worst <= 1e-3


@pytest.mark.parametrize("series", list(Series))
@pytest.mark.parametrize("X", [(1.0, 2.0), (1.0, 2.0, 3.0)])
def test_09_monte_carlo_law(series, X):
    N = 100_000
    crit = 1.63 / np.sqrt(N)
    spec = OrbitSpec(series, X)
    with criterion(9, f"KS vs radial cdf, {series.value} n={len(X)} k=1", 120.0) as st:
        rd = radial_density(spec, 1)
        batch = sample_projected_spectrum(spec, 1, N, seed=SEED)
        ks = ks_statistic(batch.samples[:, 0], lambda y: radial_cdf(rd, y))
        st["detail"] = f"KS = {ks:.5f} (crit {crit:.5f})"
        assert ks < crit


def test_10_determinism(tmp_path):
    with criterion(10, "sample command byte-identical across runs", 60.0) as st:
        paths = [tmp_path / "one.csv", tmp_path / "two.csv"]
        for p in paths:
            code = main(["sample", "--series", "C", "--x", "1,2,3", "--k", "2", "--N", "20000", "--seed", "123456789", "--out", str(p)])
            assert code == 0
        same = paths[0].read_bytes() == paths[1].read_bytes()
        same_meta = (tmp_path / "one.json").read_bytes() == (tmp_path / "two.json").read_bytes()
        st["detail"] = f"csv identical={same}, sidecar identical={same_meta}"
        assert same and same_meta
