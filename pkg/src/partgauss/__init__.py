"""Stationary processes whose (k-1)-dimensional marginals are Gaussian but whose law is not.

Modules: ``dist`` (the perturbed Gaussian law), ``process`` (the moving-sum
sequence), ``exact`` (exact marginal characteristic functions and moments),
``stats`` (Monte Carlo checks), ``verify`` (suite runner), ``pathio`` and ``cli``.
"""
__version__ = "0.1.0"

from ._backend import BACKEND
from .dist import PerturbedGaussianParams, StreamState, cf_nu, density, log_density, moment_quadrature, sample_nu
from .exact import cf_block_convolution, cf_marginal, exact_mixed_moment, nongaussianity_gap
from .process import PathSegment, VectorStream, generate_segment, sliding_products, vector_at

__all__ = [
    "BACKEND",
    "PathSegment",
    "PerturbedGaussianParams",
    "StreamState",
    "VectorStream",
    "cf_block_convolution",
    "cf_marginal",
    "cf_nu",
    "density",
    "exact_mixed_moment",
    "generate_segment",
    "log_density",
    "moment_quadrature",
    "nongaussianity_gap",
    "sample_nu",
    "sliding_products",
    "vector_at",
]
