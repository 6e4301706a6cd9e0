"""Named verification suites shared by the CLI.

Every suite returns a list of case dicts ``{name, residual, tolerance, pass}``.
"""

from math import factorial

import numpy as np

from .laplace import OrbitSpec, f_alpha, lemma1_reduced, lemma2_doubled, orbital_laplace, padded_limit
from .montecarlo import ks_statistic, mc_orbital_laplace, sample_projected_spectrum
from .numerics import divided_difference
from .radial import normalization, projection_identity_residual, radial_cdf, radial_density
from .splines import KnotVector, hermite_genocchi_residual

SUITES = ("splines", "lemma2", "lemma1", "normalization", "projection-identity", "montecarlo")
NEEDS_SPEC = {"lemma1", "normalization", "projection-identity", "montecarlo"}


def _case(name, residual, tolerance):
    residual = float(residual)
    return {"name": name, "residual": residual, "tolerance": tolerance, "pass": bool(residual <= tolerance)}


def random_knots(rng, order, lo=0.15, hi=0.8):
    gaps = rng.uniform(lo, hi, size=order - 1)
    kn = np.concatenate([[0.0], np.cumsum(gaps)])
    return KnotVector(tuple(kn - 0.5 * kn[-1]))


def _poly(coeffs):
    p = np.polynomial.Polynomial(coeffs)
    return p, p.deriv


def suite_splines(rng, **_):
    cases = []
    for order in range(2, 9):
        kv = random_knots(rng, order)
        d = order - 1
        sin_derivs = [np.sin, np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t)]
        p, deriv = _poly(rng.uniform(-1, 1, size=7))
        funcs = {
            "exp": (np.exp, np.exp),
            "sin": (np.sin, sin_derivs[d % 4]),
            "poly6": (p, deriv(d) if d <= 6 else (lambda t: np.zeros_like(t))),
        }
        for label, (f, dfn) in funcs.items():
            res = hermite_genocchi_residual(f, dfn, kv, npts=16)
            cases.append(_case(f"hermite-genocchi/{label}/order{order}", abs(res), 1e-9))
    return cases


def suite_lemma2(rng, ncases=20, **_):
    cases = []
    for c in range(ncases):
        m = int(rng.integers(1, 5))
        z = np.cumsum(rng.uniform(0.2, 0.8, size=m))
        # even polynomial of degree 2m in z: phi has degree m, so phi[...] != 0
        coef = np.zeros(2 * m + 1)
        coef[::2] = rng.uniform(0.5, 1.5, size=m + 1)
        funcs = {
            "cosh": np.cosh,
            "sinhc": lambda s: f_alpha("B", s),
            "poly": np.polynomial.Polynomial(coef),
        }
        for label, f in funcs.items():
            doubled = lemma2_doubled(f, z)
            direct = divided_difference(lambda y: f(np.sqrt(y)), z**2)
            rel = abs(doubled - direct) / max(abs(direct), 1e-300)
            cases.append(_case(f"lemma2/{label}/case{c}/m{m}", rel, 1e-10))
    return cases


def _tk(rng, k):
    while True:
        t = rng.uniform(0.2, 1.5, size=k)
        if k == 1 or np.min(np.diff(np.sort(t))) > 0.1:
            return np.sort(t)


def suite_lemma1(rng, spec, k, **_):
    cases = []
    for c in range(2):
        Tk = _tk(rng, k)
        exact = lemma1_reduced(spec, Tk)
        limit = padded_limit(spec, Tk)
        cases.append(_case(f"lemma1/T{c}", abs(exact - limit) / abs(limit), 1e-4))
    return cases


def suite_normalization(rng, spec, k, npts=None, **_):
    rd = radial_density(spec, k)
    return [_case("normalization", abs(normalization(rd, npts) - 1.0), 1e-4)]


def suite_projection(rng, spec, k, npts=None, **_):
    rd = radial_density(spec, k)
    cases = []
    for c in range(2):
        Tk = _tk(rng, k)
        res = projection_identity_residual(rd, Tk, npts or 16)
        cases.append(_case(f"projection-identity/T{c}", res, 1e-3))
    return cases


def suite_montecarlo(rng, spec, k, N=100_000, seed=0, **_):
    cases = []
    T = rng.uniform(-1, 1, size=spec.n)
    T *= rng.uniform(0.3, 1.0) / np.linalg.norm(T)
    est, err = mc_orbital_laplace(spec, T, N, seed)
    exact = orbital_laplace(spec, T)
    cases.append(_case("laplace-vs-mc/stderr-units", abs(est - exact) / err, 3.0))
    if k == 1:
        rd = radial_density(spec, 1)
        batch = sample_projected_spectrum(spec, 1, N, seed)
        ks = ks_statistic(batch.samples[:, 0], lambda y: radial_cdf(rd, y))
        cases.append(_case("ks-vs-analytic-cdf", ks, 1.63 / np.sqrt(N)))
    return cases


_RUNNERS = {
    "splines": suite_splines,
    "lemma2": suite_lemma2,
    "lemma1": suite_lemma1,
    "normalization": suite_normalization,
    "projection-identity": suite_projection,
    "montecarlo": suite_montecarlo,
}


def run_suite(name, seed=0, spec=None, k=None, **kwargs):
    if name not in _RUNNERS:
        raise KeyError(name)
    if name in NEEDS_SPEC and (spec is None or k is None):
        raise ValueError(f"suite {name!r} needs --series, --x and --k")
    rng = np.random.default_rng(seed)
    cases = _RUNNERS[name](rng, spec=spec, k=k, seed=seed, **kwargs)
    return {"suite": name, "cases": cases}
