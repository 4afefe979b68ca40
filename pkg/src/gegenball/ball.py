"""Orthogonal structure on the unit ball for the generalized Gegenbauer weight.

Provides the weight, the closed-form mutually orthogonal basis (radial Jacobi
factor times h-harmonic), Fourier projections and expansions, the reproducing
kernel both as an orthonormal-basis sum and as the concise multi-integral,
the translation operator and convolution built on it, Cesaro means, Poisson
integrals, and residual checks for the differential-difference equations and
the contiguous relations in the radial-singularity parameter.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import quadrature, special
from .polyharmonics import (
    Poly,
    WeightParams,
    h_harmonic_basis,
    h_laplacian,
    harmonic_dimension,
    poly_from_univariate,
    radial_argument,
    x_dot_grad,
)

__all__ = [
    "weight_eval",
    "BallBasisElement",
    "ball_basis",
    "basis_element",
    "basis_norm",
    "ProjectionResult",
    "project",
    "ExpansionCoefficients",
    "expand",
    "kernel_direct",
    "kernel_direct_pairs",
    "kernel_concise",
    "kernel_concise_pairs",
    "translation",
    "translation_pairs",
    "convolve",
    "convolve_on_points",
    "gegenbauer_coefficient",
    "cesaro_mean",
    "cesaro_kernel",
    "cesaro_kernel_grid",
    "lebesgue_estimate",
    "kernel_min_on_grid",
    "polar_grid",
    "poisson_kernel",
    "poisson_integral",
    "de_residual",
    "contiguous_residual",
    "random_ball_points",
]


def weight_eval(params, x):
    """Weight prod|x_i|^{2 k_i} ||x||^{2 nu} (1-||x||^2)^{mu-1/2} at a ball point.

    Boundary values follow the exponents (0 or inf on the measure-zero sets
    where a factor degenerates); points outside the closed ball are rejected.
    """
    x = np.asarray(x, dtype=float)
    r2 = float(x @ x)
    if r2 > 1 + 1e-12:
        raise ValueError(f"point lies outside the closed unit ball: {x}")
    out = 1.0
    for xi, k in zip(x, params.kappa):
        if k > 0:
            out *= abs(xi) ** (2 * k)
    if params.nu != 0:
        out *= r2**params.nu if r2 > 0 else (0.0 if params.nu > 0 else math.inf)
    e = params.mu - 0.5
    if e != 0:
        rest = 1 - min(r2, 1.0)
        out *= rest**e if rest > 0 else (0.0 if e > 0 else math.inf)
    return out


# ---------------------------------------------------------------------------
# Closed-form basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BallBasisElement:
    """One element of the mutually orthogonal basis of fixed total degree.

    ``poly`` is the radial Jacobi factor (degree ``radial_index`` in the
    squared radius) times the h-harmonic of degree
    ``degree - 2*radial_index``; ``norm`` is its closed-form squared norm
    under the probability-normalized weight.
    """

    degree: int
    radial_index: int
    harmonic_index: int
    harmonic_degree: int
    parity: tuple
    poly: Poly
    norm: float


def basis_norm(params, n, j):
    """Closed-form squared norm of the (n, j) basis elements."""
    if not 0 <= 2 * j <= n:
        raise ValueError(f"need 0 <= 2j <= n, got (n, j) = ({n}, {j})")
    lt = params.lambda_total
    base = params.nu + params.gamma_kappa + params.d / 2
    num = (
        special.pochhammer(base, n - j)
        * special.pochhammer(params.mu + 0.5, j)
        * (n - j + lt)
    )
    den = math.factorial(j) * special.pochhammer(lt + 1.0, n - j) * (n + lt)
    return num / den


def _lambda_kappa_fraction(params):
    return sum(Fraction(k) for k in params.kappa) + Fraction(params.d - 2, 2)


def _radial_poly(params, j, harmonic_degree, nu_frac=None):
    """Exact radial factor: Jacobi(j) at 2||x||^2 - 1 with the matched exponent."""
    alpha = Fraction(params.mu) - Fraction(1, 2)
    nu = Fraction(params.nu) if nu_frac is None else nu_frac
    beta = harmonic_degree + nu + _lambda_kappa_fraction(params)
    coeffs = special.jacobi_coefficients(j, alpha, beta)
    return poly_from_univariate(coeffs, radial_argument(params.d))


@lru_cache(maxsize=None)
def ball_basis(params, n):
    """All basis elements of total degree n, ordered by (j, harmonic index)."""
    elements = []
    for j in range(n // 2 + 1):
        m = n - 2 * j
        hb = h_harmonic_basis(m, params.kappa)
        radial = _radial_poly(params, j, m)
        norm = basis_norm(params, n, j)
        for ell, (harm, par) in enumerate(zip(hb.elements, hb.parities)):
            elements.append(
                BallBasisElement(n, j, ell, m, par, radial * harm, norm)
            )
    return tuple(elements)


def basis_element(params, n, j, ell):
    """Single basis element; indices are 0-based and range-checked."""
    if not 0 <= 2 * j <= n:
        raise ValueError(f"need 0 <= 2j <= n, got (n, j) = ({n}, {j})")
    sigma = harmonic_dimension(n - 2 * j, params.d)
    if not 0 <= ell < sigma:
        raise ValueError(f"harmonic index {ell} out of range [0, {sigma})")
    for el in ball_basis(params, n):
        if el.radial_index == j and el.harmonic_index == ell:
            return el
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# Projections and expansions
# ---------------------------------------------------------------------------


def _values_on(f, points):
    return np.array([float(f(p)) for p in points])


@dataclass
class ProjectionResult:
    """Fourier coefficients of one degree plus the evaluable component."""

    degree: int
    coeffs: dict

    def __post_init__(self):
        self._params = None
        self._elements = None

    def evaluate(self, x):
        vals = 0.0
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros(len(pts))
        for el in self._elements:
            c = self.coeffs[(el.radial_index, el.harmonic_index)]
            out += (c / el.norm) * el.poly.eval_many(pts)
        return float(out[0]) if np.ndim(x) == 1 else out


def project(params, f, n, rule):
    """Orthogonal projection of f onto the degree-n polynomial subspace.

    Coefficients are quadrature inner products against the closed-form basis;
    the rule's exactness degree is the caller's declared approximation level.
    """
    els = ball_basis(params, n)
    fv = _values_on(f, rule.points)
    coeffs = {}
    for el in els:
        vals = el.poly.eval_many(rule.points)
        coeffs[(el.radial_index, el.harmonic_index)] = float(
            np.dot(rule.weights, fv * vals)
        )
    res = ProjectionResult(n, coeffs)
    res._params = params
    res._elements = els
    return res


@dataclass
class ExpansionCoefficients:
    """Fourier coefficients (n, j, ell) -> value up to a maximum degree."""

    max_degree: int
    coeffs: dict

    def __post_init__(self):
        self._params = None

    def projection_eval(self, n, x):
        els = ball_basis(self._params, n)
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros(len(pts))
        for el in els:
            c = self.coeffs[(n, el.radial_index, el.harmonic_index)]
            out += (c / el.norm) * el.poly.eval_many(pts)
        return float(out[0]) if np.ndim(x) == 1 else out

    def partial_sum_eval(self, x, degree=None, degree_weights=None):
        """Evaluate sum_n w_n proj_n at x (w_n = 1 if not supplied)."""
        nmax = self.max_degree if degree is None else degree
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros(len(pts))
        for n in range(nmax + 1):
            w = 1.0 if degree_weights is None else degree_weights[n]
            if w != 0.0:
                out += w * self.projection_eval(n, pts)
        return float(out[0]) if np.ndim(x) == 1 else out

    def poisson_eval(self, r, x):
        """Truncated Poisson series sum_n r^n proj_n at x."""
        return self.partial_sum_eval(
            x, degree_weights=[r**n for n in range(self.max_degree + 1)]
        )

    def parseval_sums(self):
        """Cumulative sums of coefficient energy; nondecreasing in the degree."""
        acc, out = 0.0, []
        for n in range(self.max_degree + 1):
            for el in ball_basis(self._params, n):
                c = self.coeffs[(n, el.radial_index, el.harmonic_index)]
                acc += c * c / el.norm
            out.append(acc)
        return out

    def to_json(self):
        return json.dumps(
            {
                "max_degree": self.max_degree,
                "coeffs": [[list(k), v] for k, v in sorted(self.coeffs.items())],
            }
        )


def expand(params, f, max_degree, rule):
    """Fourier coefficients of f through the given maximum degree."""
    fv = _values_on(f, rule.points)
    coeffs = {}
    for n in range(max_degree + 1):
        for el in ball_basis(params, n):
            vals = el.poly.eval_many(rule.points)
            coeffs[(n, el.radial_index, el.harmonic_index)] = float(
                np.dot(rule.weights, fv * vals)
            )
    exp = ExpansionCoefficients(max_degree, coeffs)
    exp._params = params
    return exp


# ---------------------------------------------------------------------------
# Reproducing kernels
# ---------------------------------------------------------------------------


def kernel_direct(params, n, x, y):
    """Degree-n reproducing kernel as the orthonormal-basis sum."""
    return float(
        kernel_direct_pairs(
            params, n, np.asarray(x, float)[None, :], np.asarray(y, float)[None, :]
        )[0]
    )


def kernel_direct_pairs(params, n, X, Y):
    """Kernel values for paired rows of X and Y."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    out = np.zeros(len(X))
    for el in ball_basis(params, n):
        out += el.poly.eval_many(X) * el.poly.eval_many(Y) / el.norm
    return out


def _min_resolution(degree):
    # tensor Gauss factors must be exact for the per-variable degree of the
    # integrand, which is the kernel degree
    return max(1, math.ceil((degree + 3) / 2))


@lru_cache(maxsize=None)
def _concise_grid(params, resolution):
    """Flattened tensor grid for the concise-kernel integral, weights mass 1.

    Factor order: one sign-variable per coordinate, then the boundary,
    radial-mixing and radial-sign variables.  Zero exponents are routed to
    the point-mass limit rules.
    """
    axes = []
    for k in params.kappa:
        if k == 0:
            axes.append((np.array([1.0]), np.array([1.0])))
        else:
            r = quadrature.gauss_jacobi(resolution, k - 1, k)
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
            "concise-kernel normalization failed the constant check: "
            f"total mass {weights.sum()!r}"
        )
    d = params.d
    S = np.stack(flat[:d])
    T, U, V = flat[d], flat[d + 1], flat[d + 2]
    return S, T, U, V, weights


def _zeta_pairs(params, X, Y, grid):
    S, T, U, V, _ = grid
    nx = np.sqrt(np.sum(X * X, axis=1))
    ny = np.sqrt(np.sum(Y * Y, axis=1))
    if np.any(nx > 1 + 1e-12) or np.any(ny > 1 + 1e-12):
        raise ValueError("kernel points must lie in the closed unit ball")
    dot = (X * Y) @ S
    bx = np.sqrt(np.clip(1 - nx * nx, 0.0, None))
    by = np.sqrt(np.clip(1 - ny * ny, 0.0, None))
    return (
        (nx * ny)[:, None] * (U * V)[None, :]
        + (1 - U)[None, :] * dot
        + (bx * by)[:, None] * T[None, :]
    )


def kernel_concise(params, n, x, y, resolution=None):
    """Degree-n reproducing kernel by the concise multi-integral.

    Tensor Gauss-Jacobi evaluation of the Gegenbauer kernel term composed
    with the mixing function of the two points; exponents mu = 0, nu = 0 or
    kappa_i = 0 are realized by their point-mass limit rules.  The stated
    resolution (nodes per Gauss factor) must meet the polynomial-exactness
    bound for degree n.
    """
    return float(
        kernel_concise_pairs(
            params,
            n,
            np.asarray(x, float)[None, :],
            np.asarray(y, float)[None, :],
            resolution,
        )[0]
    )


def kernel_concise_pairs(params, n, X, Y, resolution=None):
    """Concise kernel values for paired rows of X and Y (one tensor pass)."""
    if params.nu < 0:
        raise ValueError("the concise kernel requires nu >= 0")
    min_res = _min_resolution(n)
    if resolution is None:
        resolution = min_res + 2
    elif resolution < min_res:
        raise ValueError(
            f"resolution {resolution} is below the exactness bound {min_res} "
            f"for degree {n}"
        )
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    grid = _concise_grid(params, resolution)
    if n == 0:
        return np.full(len(X), float(np.sum(grid[4])))
    zeta = _zeta_pairs(params, X, Y, grid)
    vals = special.gegenbauer_kernel(n, params.lambda_total, zeta)
    return vals @ grid[4]


def translation(params, g, x, y, resolution=12):
    """Generalized translation of a one-variable profile, evaluated at (x, y).

    Same multi-integral as the concise kernel with the Gegenbauer kernel term
    replaced by ``g``; applying it to the degree-n kernel term recovers the
    degree-n reproducing kernel.
    """
    return float(
        translation_pairs(
            params,
            g,
            np.asarray(x, float)[None, :],
            np.asarray(y, float)[None, :],
            resolution,
        )[0]
    )


def translation_pairs(params, g, X, Y, resolution=12, chunk=128):
    """Translation values for paired rows of X and Y (chunked tensor sums)."""
    if params.nu < 0:
        raise ValueError("the translation operator requires nu >= 0")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    grid = _concise_grid(params, resolution)
    w = grid[4]
    out = np.empty(len(X))
    for lo in range(0, len(X), chunk):
        hi = min(lo + chunk, len(X))
        zeta = _zeta_pairs(params, X[lo:hi], Y[lo:hi], grid)
        out[lo:hi] = np.asarray(g(zeta), dtype=float) @ w
    return out


def gegenbauer_coefficient(g, n, lam, nodes=60):
    """Fourier-Gegenbauer coefficient of g against the degree-n kernel term.

    Quadrature of g(t) C_n(t)/C_n(1) against the normalized symmetric weight
    of index lam; for the translation operator this is the multiplier the
    convolution applies to the degree-n component.
    """
    rule = quadrature.gauss_jacobi(nodes, lam - 0.5, lam - 0.5)
    weights = rule.weights / rule.mass
    if n == 0:
        ratio = np.ones_like(rule.nodes)
    else:
        ratio = special.gegenbauer_eval(n, lam, rule.nodes) / special.gegenbauer_eval(
            n, lam, 1.0
        )
    return float(np.dot(weights, np.asarray(g(rule.nodes), dtype=float) * ratio))


def convolve(params, f, g, rule, resolution=12):
    """Convolution of f on the ball with a one-variable profile g.

    Returns an evaluable: x -> weighted quadrature of f(y) times the
    translated profile at (x, y) over the supplied ball rule.
    """
    pts = rule.points
    w = rule.weights
    fv = _values_on(f, pts)

    def conv(x):
        X = np.broadcast_to(np.asarray(x, dtype=float), pts.shape)
        L = translation_pairs(params, g, X, pts, resolution)
        return float(np.dot(w, fv * L))

    return conv


def convolve_on_points(params, f, g, rule, X, resolution=12):
    """Convolution values at many points (vectorized over the pair grid)."""
    pts = rule.points
    w = rule.weights
    fv = _values_on(f, pts)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    ny = len(pts)
    out = np.empty(len(X))
    for i, x in enumerate(X):
        XX = np.broadcast_to(x, pts.shape)
        L = translation_pairs(params, g, XX, pts, resolution)
        out[i] = float(np.dot(w, fv * L))
    return out


# ---------------------------------------------------------------------------
# Cesaro means and Lebesgue constants
# ---------------------------------------------------------------------------


def cesaro_mean(params, f, n, delta, rule, resolution=None):
    """Cesaro (C, delta) mean of the expansion of f, as an evaluable.

    Realized as the convolution of f with the one-variable Cesaro kernel of
    the Gegenbauer series at the total index.
    """
    if delta < 0:
        raise ValueError("Cesaro order must be nonnegative")
    lam = params.lambda_total
    g = lambda t: special.cesaro_kernel_gegenbauer(n, delta, lam, t)
    if resolution is None:
        resolution = _min_resolution(n) + 1
    return convolve(params, f, g, rule, resolution)


def cesaro_kernel(params, n, delta, x, y, method="direct", resolution=None):
    """Cesaro (C, delta) kernel at (x, y).

    ``direct`` sums the reproducing kernels with the Cesaro weights;
    ``translation`` applies the translation operator to the one-variable
    Cesaro kernel (the two agree; equality is part of the test suite).
    """
    w = special.cesaro_weights(n, delta)
    if method == "direct":
        return float(
            sum(w[k] * kernel_direct(params, k, x, y) for k in range(n + 1))
        )
    if method == "translation":
        lam = params.lambda_total
        g = lambda t: special.cesaro_kernel_gegenbauer(n, delta, lam, t)
        if resolution is None:
            resolution = _min_resolution(n) + 1
        return translation(params, g, x, y, resolution)
    raise ValueError(f"unknown method {method!r}")


def _basis_stack(params, nmax):
    els = []
    for n in range(nmax + 1):
        els.extend(ball_basis(params, n))
    degrees = np.array([el.degree for el in els])
    inv_norm = np.array([1.0 / el.norm for el in els])
    return els, degrees, inv_norm


def cesaro_kernel_grid(params, n, delta, X, Y):
    """Matrix of Cesaro kernel values over two point sets (direct sums)."""
    els, degrees, inv_norm = _basis_stack(params, n)
    w = special.cesaro_weights(n, delta)
    scale = w[degrees] * inv_norm
    BX = np.column_stack([el.poly.eval_many(np.atleast_2d(X)) for el in els])
    BY = np.column_stack([el.poly.eval_many(np.atleast_2d(Y)) for el in els])
    return (BX * scale) @ BY.T


def polar_grid(d, radial=40, angular=40):
    """Deterministic tensor polar grid on the closed ball (for maximization)."""
    r = (np.arange(radial) + 1.0) / radial
    if d == 2:
        theta = 2 * np.pi * np.arange(angular) / angular
        circ = np.column_stack([np.cos(theta), np.sin(theta)])
    elif d == 3:
        na = max(angular // 4, 3)
        theta = np.pi * (np.arange(na) + 0.5) / na
        phi = 2 * np.pi * np.arange(2 * na) / (2 * na)
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        circ = np.column_stack(
            [
                (np.sin(tt) * np.cos(pp)).ravel(),
                (np.sin(tt) * np.sin(pp)).ravel(),
                np.cos(tt).ravel(),
            ]
        )
    else:
        raise ValueError("polar grids are implemented for d in (2, 3)")
    return (r[:, None, None] * circ[None, :, :]).reshape(-1, d)


def lebesgue_estimate(params, n, delta, rule=None, grid=None):
    """Estimated operator norm of the Cesaro mean on the sup-norm side.

    Maximizes the weighted absolute-kernel integral over a fixed point grid;
    the inner integral uses the supplied (or a default) ball rule.  This is a
    deterministic estimate, not a certified maximization.
    """
    if rule is None:
        rule = quadrature.ball_rule(params, 2 * n + 6)
    if grid is None:
        grid = polar_grid(params.d)
    K = cesaro_kernel_grid(params, n, delta, grid, rule.points)
    return float(np.max(np.abs(K) @ rule.weights))


def kernel_min_on_grid(params, n, delta, grid=None):
    """Minimum Cesaro kernel value over the grid-by-grid point pairs."""
    if grid is None:
        grid = polar_grid(params.d)
    K = cesaro_kernel_grid(params, n, delta, grid, grid)
    return float(K.min())


# ---------------------------------------------------------------------------
# Poisson integrals
# ---------------------------------------------------------------------------


def poisson_kernel(params, r, x, y, method="translation", resolution=24,
                   series_degree=None):
    """Poisson kernel at (x, y): translation of the one-variable profile.

    ``series`` sums r^n times the degree-n reproducing kernels instead
    (truncated at ``series_degree``); the two agree as the truncation grows.
    """
    if not 0 < r < 1:
        raise ValueError(f"radius must lie in (0, 1), got {r}")
    lam = params.lambda_total
    if method == "translation":
        g = lambda t: special.poisson_profile(r, lam, t)
        return translation(params, g, x, y, resolution)
    if method == "series":
        nmax = series_degree if series_degree is not None else 30
        return float(
            sum(r**n * kernel_direct(params, n, x, y) for n in range(nmax + 1))
        )
    raise ValueError(f"unknown method {method!r}")


def poisson_integral(params, f, r, rule, resolution=24):
    """Poisson integral of f: convolution with the Poisson profile."""
    if not 0 < r < 1:
        raise ValueError(f"radius must lie in (0, 1), got {r}")
    lam = params.lambda_total
    g = lambda t: special.poisson_profile(r, lam, t)
    return convolve(params, f, g, rule, resolution)


# ---------------------------------------------------------------------------
# Differential-difference residuals and contiguous relations
# ---------------------------------------------------------------------------


def de_residual(params, n, j, ell, x, include_singular_term=True):
    """Residual of the second-order differential-difference equation.

    For nu = 0 the basis elements are eigenfunctions of the pure operator
    (h-Laplacian minus Euler terms); for nu != 0 the equation needs the
    radial-index-dependent singular correction 2 nu/||x||^2 (E - m).
    Setting ``include_singular_term=False`` ablates that correction (a
    negative control away from j = 0).
    """
    el = basis_element(params, n, j, ell)
    x = np.asarray(x, dtype=float)
    r2 = float(x @ x)
    if not 0 < r2 < 1:
        raise ValueError("evaluation point must be interior and nonzero")
    P = el.poly
    m = el.harmonic_degree
    A = 2 * params.lambda_kappa + 2 * params.mu + 2 * params.nu + 1
    e1 = x_dot_grad(P)
    e2 = x_dot_grad(e1)
    lap = h_laplacian(P, params.kappa)
    val = lap.eval_many(x) - e2.eval_many(x) - A * e1.eval_many(x)
    if include_singular_term and params.nu != 0:
        val += (2 * params.nu / r2) * (e1.eval_many(x) - m * P.eval_many(x))
    return float(val + n * (n + A) * P.eval_many(x))


def contiguous_residual(params, n, j, ell):
    """Coefficient residuals of the two relations linking nu and nu + 1 bases.

    Both sides are assembled exactly (Fraction arithmetic on the shared
    h-harmonic factor), so the returned relative max-norm residuals are zero
    up to the float conversion of the result.  The first relation expresses
    the nu-element through two nu+1 elements; the second multiplies a nu+1
    element by the squared radius.
    """
    m = n - 2 * j
    hb = h_harmonic_basis(m, params.kappa)
    if not 0 <= ell < len(hb.elements):
        raise ValueError(f"harmonic index {ell} out of range")
    Y = hb.elements[ell]
    mu_f, nu_f = Fraction(params.mu), Fraction(params.nu)
    lamk = _lambda_kappa_fraction(params)
    lt = nu_f + mu_f + lamk + Fraction(1, 2)

    def rad(jj, nu_shift):
        return _radial_poly(params, jj, m, nu_frac=nu_f + nu_shift)

    # relation 1
    lhs = (n + lt) * rad(j, 0) * Y
    rhs = (n - j + lt) * rad(j, 1) * Y
    if j >= 1:
        rhs = rhs + (j + mu_f - Fraction(1, 2)) * rad(j - 1, 1) * Y
    res1 = _relative_coeff_residual(lhs - rhs, lhs)

    # relation 2
    lhs2 = (n + lt + 1) * Poly.norm_sq(params.d) * rad(j, 1) * Y
    rhs2 = (j + 1) * rad(j + 1, 0) * Y + (n - j + lamk + nu_f + 1) * rad(j, 0) * Y
    res2 = _relative_coeff_residual(lhs2 - rhs2, lhs2)
    return res1, res2


def _relative_coeff_residual(diff, reference):
    scale = float(reference.max_abs_coeff()) or 1.0
    return float(diff.max_abs_coeff()) / scale


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def random_ball_points(d, count, seed=0, radius=0.95):
    """Deterministic quasi-random interior points for spot checks."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((count, d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    r = radius * rng.random(count) ** (1.0 / d)
    return x * r[:, None]
