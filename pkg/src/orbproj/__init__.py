"""Radial parts of projected orbital measures for SO(2n+1), Sp(2n) and O(2n)."""

from ._jit import USE_NUMBA
from .laplace import OrbitSpec, Series, dn_ratio, f_alpha, lemma1_reduced, orbital_laplace
from .montecarlo import SampleBatch, mc_orbital_laplace, sample_projected_spectrum
from .radial import (
    RadialDensity,
    density_eval,
    make_params,
    normalization,
    projection_identity_residual,
    radial_cdf,
    radial_density,
)
from .splines import KnotVector, mspline_derivative, mspline_eval, mspline_eval_stable

__version__ = "0.1.0"
