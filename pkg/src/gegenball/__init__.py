"""Orthogonal expansions for generalized Gegenbauer weights on ball and simplex.

The weight on the unit ball is prod|x_i|^{2 kappa_i} ||x||^{2 nu}
(1 - ||x||^2)^{mu - 1/2} for the coordinate sign-change reflection group; the
simplex counterpart is its image under coordinate squaring.  The package
constructs the orthogonal bases, reproducing kernels (closed-form sums and
concise integrals), summability operators (Cesaro, Poisson, convolution) and
the quadrature and Gram-Schmidt oracles that validate them.
"""

from . import ball, oracle, polyharmonics, quadrature, simplex, special
from .polyharmonics import (
    HarmonicBasis,
    Poly,
    WeightParams,
    addition_kernel,
    dunkl_apply,
    h_harmonic_basis,
    h_laplacian,
    intertwining_apply,
    x_dot_grad,
)
from .quadrature import Rule1D, RuleND, ball_rule, gauss_jacobi, simplex_rule, sphere_rule

__all__ = [
    "ball",
    "simplex",
    "special",
    "quadrature",
    "polyharmonics",
    "oracle",
    "Poly",
    "WeightParams",
    "HarmonicBasis",
    "Rule1D",
    "RuleND",
    "gauss_jacobi",
    "sphere_rule",
    "ball_rule",
    "simplex_rule",
    "h_harmonic_basis",
    "h_laplacian",
    "dunkl_apply",
    "x_dot_grad",
    "intertwining_apply",
    "addition_kernel",
]

__version__ = "0.1.0"
