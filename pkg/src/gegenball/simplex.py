"""Orthogonal structure on the standard simplex, transferred from the ball.

The coordinate-squaring map carries the sign-invariant part of the ball
theory to the simplex: the basis combines a radial Jacobi factor in 2|x| - 1
with fully even h-harmonics evaluated at the square roots of the coordinates,
the reproducing kernel folds the even-degree ball kernel over all sign
choices (or evaluates the concise integral with the even-kernel integrand),
and convolution is defined only through the pullback identity, never as a
native simplex integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from . import ball, quadrature, special
from .polyharmonics import (
    Poly,
    h_harmonic_basis,
    invariant_harmonic_dimension,
    poly_from_univariate,
)

__all__ = [
    "weight_eval",
    "SimplexBasisElement",
    "simplex_basis",
    "basis_element",
    "kernel_direct",
    "kernel_folded",
    "kernel_concise",
    "kernel_concise_pairs",
    "cesaro_kernel",
    "cesaro_kernel_grid",
    "cesaro_mean",
    "kernel_min_on_grid",
    "simplex_grid",
    "squaring_map",
    "pullback",
    "random_simplex_points",
]


def squaring_map(x):
    """The ball-to-simplex transfer map: coordinate-wise squaring."""
    x = np.asarray(x, dtype=float)
    return x * x


def pullback(f):
    """Compose a simplex function with the squaring map (function on the ball)."""
    return lambda x: f(squaring_map(x))


def _check_simplex_point(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < -1e-12) or np.sum(x) > 1 + 1e-12:
        raise ValueError(f"point is not in the closed simplex: {x}")
    return x


def weight_eval(params, x):
    """Weight prod x_i^{k_i - 1/2} |x|^nu (1 - |x|)^{mu - 1/2} at a simplex point."""
    x = _check_simplex_point(x)
    out = 1.0
    for xi, k in zip(x, params.kappa):
        e = k - 0.5
        if e != 0:
            out *= xi**e if xi > 0 else (0.0 if e > 0 else math.inf)
    s = float(np.sum(x))
    if params.nu != 0:
        out *= s**params.nu if s > 0 else (0.0 if params.nu > 0 else math.inf)
    e = params.mu - 0.5
    if e != 0:
        rest = 1 - min(s, 1.0)
        out *= rest**e if rest > 0 else (0.0 if e > 0 else math.inf)
    return out


# ---------------------------------------------------------------------------
# Basis through invariant h-harmonics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimplexBasisElement:
    """Degree-n element: radial Jacobi factor times an even h-harmonic at sqrt(x).

    ``poly`` is a genuine polynomial in the simplex coordinates (full even
    parity of the harmonic guarantees this); ``norm`` equals the squared norm
    of the degree-2n ball pullback.
    """

    degree: int
    radial_index: int
    harmonic_index: int
    poly: Poly
    norm: float


def _simplex_radial_argument(d):
    # 2(x_1 + ... + x_d) - 1, the image of the ball radial argument
    terms = {tuple(int(i == j) for j in range(d)): 2 for i in range(d)}
    p = Poly(d, terms)
    return p - 1


def _halve_exponents(poly):
    terms = {}
    for e, c in poly.terms.items():
        if any(v % 2 for v in e):
            raise ValueError("harmonic is not fully even")
        terms[tuple(v // 2 for v in e)] = c
    return Poly(poly.dim, terms)


@lru_cache(maxsize=None)
def simplex_basis(params, n):
    """All simplex basis elements of degree n, ordered by (j, harmonic index).

    Aborts if the count of fully even h-harmonics of degree 2(n-j) disagrees
    with the invariant-subspace dimension formula.
    """
    d = params.d
    elements = []
    for j in range(n + 1):
        mhalf = n - j
        hb = h_harmonic_basis(2 * mhalf, params.kappa)
        even = [
            (ell, harm)
            for ell, (harm, par) in enumerate(zip(hb.elements, hb.parities))
            if all(p == 0 for p in par)
        ]
        expected = invariant_harmonic_dimension(mhalf, d)
        if len(even) != expected:
            raise RuntimeError(
                f"invariant harmonic count {len(even)} at degree {2 * mhalf} "
                f"disagrees with the dimension formula {expected}"
            )
        alpha = Fraction(params.mu) - Fraction(1, 2)
        beta = (
            2 * mhalf
            + Fraction(params.nu)
            + sum(Fraction(k) for k in params.kappa)
            + Fraction(d - 2, 2)
        )
        coeffs = special.jacobi_coefficients(j, alpha, beta)
        radial = poly_from_univariate(coeffs, _simplex_radial_argument(d))
        norm = ball.basis_norm(params, 2 * n, j)
        for local, (ell, harm) in enumerate(even):
            poly = radial * _halve_exponents(harm)
            elements.append(SimplexBasisElement(n, j, local, poly, norm))
    return tuple(elements)


def basis_element(params, n, j, ell):
    if not 0 <= j <= n:
        raise ValueError(f"need 0 <= j <= n, got (n, j) = ({n}, {j})")
    dim = invariant_harmonic_dimension(n - j, params.d)
    if not 0 <= ell < dim:
        raise ValueError(f"harmonic index {ell} out of range [0, {dim})")
    for el in simplex_basis(params, n):
        if el.radial_index == j and el.harmonic_index == ell:
            return el
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# Reproducing kernels
# ---------------------------------------------------------------------------


def kernel_direct(params, n, x, y):
    """Degree-n simplex kernel as the orthonormal-basis sum."""
    x = _check_simplex_point(x)[None, :]
    y = _check_simplex_point(y)[None, :]
    out = 0.0
    for el in simplex_basis(params, n):
        out += float(el.poly.eval_many(x)[0] * el.poly.eval_many(y)[0]) / el.norm
    return out


def kernel_folded(params, n, x, y):
    """Degree-n simplex kernel by folding the degree-2n ball kernel.

    Averages the ball kernel at the square-root points over all coordinate
    sign choices of one argument; independent of which argument carries the
    signs.
    """
    x = _check_simplex_point(x)
    y = _check_simplex_point(y)
    sx = np.sqrt(x)
    sy = np.sqrt(y)
    d = params.d
    signs = np.array(list(product((1.0, -1.0), repeat=d)))
    X = np.broadcast_to(sx, (len(signs), d))
    Y = signs * sy
    vals = ball.kernel_direct_pairs(params, 2 * n, X, Y)
    return float(np.mean(vals))


@lru_cache(maxsize=None)
def _concise_grid_simplex(params, resolution):
    """Tensor grid for the simplex concise kernel (no odd sign factor)."""
    axes = []
    for k in params.kappa:
        if k == 0:
            axes.append((np.array([-1.0, 1.0]), np.array([0.5, 0.5])))
        else:
            r = quadrature.gauss_jacobi(resolution, k - 1, k - 1)
            axes.append((r.nodes, r.weights / r.mass))
    if params.mu == 0:
        axes.append((np.array([-1.0, 1.0]), np.array([0.5, 0.5])))
    else:
        r = quadrature.gauss_jacobi(resolution, params.mu - 1, params.mu - 1)
        axes.append((r.nodes, r.weights / r.mass))
    if params.nu == 0:
        axes.append((np.array([0.0]), np.array([1.0])))
        axes.append((np.array([0.0]), np.array([1.0])))
    else:
        lam0 = params.gamma_kappa + (params.d - 2) / 2
        ru = quadrature.gauss_jacobi_01(resolution, lam0, params.nu - 1)
        axes.append((ru.nodes, ru.weights / ru.mass))
        rv = quadrature.gauss_jacobi(resolution, params.nu - 0.5, params.nu - 0.5)
        axes.append((rv.nodes, rv.weights / rv.mass))
    grids = np.meshgrid(*[a[0] for a in axes], indexing="ij")
    wgrids = np.meshgrid(*[a[1] for a in axes], indexing="ij")
    flat = [g.ravel() for g in grids]
    weights = np.prod(np.stack([g.ravel() for g in wgrids]), axis=0)
    if abs(weights.sum() - 1.0) > 1e-8:
        raise RuntimeError(
            "simplex kernel normalization failed the constant check: "
            f"total mass {weights.sum()!r}"
        )
    d = params.d
    S = np.stack(flat[:d])
    return S, flat[d], flat[d + 1], flat[d + 2], weights


def kernel_concise(params, n, x, y, resolution=None):
    """Degree-n simplex kernel by the concise multi-integral.

    The integrand is the even-degree Gegenbauer kernel (through its quadratic
    transform) composed with the square-root mixing function; limit paths for
    zero exponents mirror the ball kernel.
    """
    x = _check_simplex_point(x)
    y = _check_simplex_point(y)
    return float(kernel_concise_pairs(params, n, x[None, :], y[None, :], resolution)[0])


def kernel_concise_pairs(params, n, X, Y, resolution=None):
    """Concise simplex kernel values for paired rows of X and Y."""
    if params.nu < 0:
        raise ValueError("the concise kernel requires nu >= 0")
    min_res = max(1, math.ceil((2 * n + 3) / 2))
    if resolution is None:
        resolution = min_res + 2
    elif resolution < min_res:
        raise ValueError(
            f"resolution {resolution} is below the exactness bound {min_res} "
            f"for degree {n}"
        )
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    S, T, U, V, W = _concise_grid_simplex(params, resolution)
    if n == 0:
        return np.full(len(X), float(np.sum(W)))
    sx = np.sum(X, axis=1)
    sy = np.sum(Y, axis=1)
    dot = np.sqrt(X * Y) @ S
    bx = np.sqrt(np.clip(1 - sx, 0.0, None))
    by = np.sqrt(np.clip(1 - sy, 0.0, None))
    zeta = (
        np.sqrt(sx * sy)[:, None] * (U * V)[None, :]
        + (1 - U)[None, :] * dot
        + (bx * by)[:, None] * T[None, :]
    )
    vals = special.gegenbauer_even_kernel(n, params.lambda_total, 2 * zeta * zeta - 1)
    return vals @ W


# ---------------------------------------------------------------------------
# Cesaro means by pullback
# ---------------------------------------------------------------------------


def cesaro_kernel(params, n, delta, x, y):
    """Cesaro (C, delta) kernel on the simplex (direct kernel sums)."""
    w = special.cesaro_weights(n, delta)
    return float(sum(w[k] * kernel_direct(params, k, x, y) for k in range(n + 1)))


def _basis_stack(params, nmax):
    els = []
    for n in range(nmax + 1):
        els.extend(simplex_basis(params, n))
    degrees = np.array([el.degree for el in els])
    inv_norm = np.array([1.0 / el.norm for el in els])
    return els, degrees, inv_norm


def cesaro_kernel_grid(params, n, delta, X, Y):
    """Matrix of simplex Cesaro kernel values over two point sets."""
    els, degrees, inv_norm = _basis_stack(params, n)
    w = special.cesaro_weights(n, delta)
    scale = w[degrees] * inv_norm
    BX = np.column_stack([el.poly.eval_many(np.atleast_2d(X)) for el in els])
    BY = np.column_stack([el.poly.eval_many(np.atleast_2d(Y)) for el in els])
    return (BX * scale) @ BY.T


def kernel_min_on_grid(params, n, delta, grid=None):
    if grid is None:
        grid = simplex_grid(params.d)
    K = cesaro_kernel_grid(params, n, delta, grid, grid)
    return float(K.min())


def simplex_grid(d, radial=30, angular=30):
    """Deterministic grid on the simplex: squared ball polar grid."""
    pts = ball.polar_grid(d, radial, angular)
    return np.unique(np.round(pts * pts, 15), axis=0)


def cesaro_mean(params, f, n, delta, rule, resolution=None):
    """Cesaro (C, delta) mean on the simplex through the pullback convolution.

    ``rule`` is a ball rule for the inner integral of the pulled-back
    convolution; the returned evaluable acts on simplex points.
    """
    if delta < 0:
        raise ValueError("Cesaro order must be nonnegative")
    lam = params.lambda_total
    g = lambda t: special.cesaro_kernel_jacobi(n, delta, lam - 0.5, -0.5,
                                               2 * t * t - 1)
    if resolution is None:
        resolution = max(1, math.ceil((2 * n + 3) / 2)) + 1
    conv = ball.convolve(params, pullback(f), g, rule, resolution)
    return lambda x: conv(np.sqrt(_check_simplex_point(x)))


def random_simplex_points(d, count, seed=0):
    """Deterministic interior simplex points (squared ball points)."""
    pts = ball.random_ball_points(d, count, seed=seed)
    return pts * pts
