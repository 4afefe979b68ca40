"""Multivariate polynomial algebra, Dunkl operators and h-harmonics for sign flips.

The reflection group throughout is the group of coordinate sign changes, for
which the Dunkl operators, the h-Laplacian and the intertwining operator all
have fully explicit forms.  Polynomials are sparse coefficient maps; all
difference-differential operators act exactly on coefficients (never by
pointwise division), so harmonicity of computed bases holds at the
coefficient level when the inputs are rational.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from . import quadrature

__all__ = [
    "Poly",
    "poly_from_univariate",
    "radial_argument",
    "x_dot_grad",
    "dunkl_apply",
    "h_laplacian",
    "spherical_h_laplacian",
    "WeightParams",
    "HarmonicBasis",
    "h_harmonic_basis",
    "harmonic_dimension",
    "invariant_harmonic_dimension",
    "intertwining_apply",
    "addition_kernel",
]


def _is_exact(c):
    return isinstance(c, (int, Fraction))


class Poly:
    """Sparse multivariate polynomial: exponent tuple -> coefficient.

    Coefficients may be int, Fraction or float; arithmetic follows the
    coefficient types, so a polynomial built from Fractions stays exact
    through add/mul/diff and the Dunkl operators.  Instances are treated as
    immutable.
    """

    __slots__ = ("dim", "terms", "_compiled")

    def __init__(self, dim, terms=None):
        self.dim = int(dim)
        clean = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != self.dim:
                    raise ValueError("exponent tuple length does not match dimension")
                if c == 0:
                    continue
                clean[tuple(int(e) for e in exps)] = c
        self.terms = clean
        self._compiled = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, dim):
        return cls(dim)

    @classmethod
    def constant(cls, dim, c):
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def monomial(cls, dim, exps, c=1):
        return cls(dim, {tuple(exps): c})

    @classmethod
    def variable(cls, dim, i):
        e = [0] * dim
        e[i] = 1
        return cls(dim, {tuple(e): 1})

    @classmethod
    def norm_sq(cls, dim):
        """x_1^2 + ... + x_d^2."""
        return cls(dim, {tuple(2 * (i == j) for j in range(dim)): 1 for i in range(dim)})

    # -- basic queries -----------------------------------------------------
    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self):
        return not self.terms

    def is_exact(self):
        return all(_is_exact(c) for c in self.terms.values())

    def max_abs_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=0)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __repr__(self):
        parts = [f"{c}*x^{e}" for e, c in sorted(self.terms.items())]
        return "Poly(" + (" + ".join(parts) if parts else "0") + ")"

    # -- arithmetic ---------------------------------------------------------
    def _check_dim(self, other):
        if self.dim != other.dim:
            raise ValueError("polynomial dimensions do not match")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.dim, other)
        self._check_dim(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Poly(self.dim, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.dim, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if other == 0:
                return Poly.zero(self.dim)
            return Poly(self.dim, {e: c * other for e, c in self.terms.items()})
        self._check_dim(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Poly(self.dim, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        out = Poly.constant(self.dim, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- calculus ------------------------------------------------------------
    def diff(self, i):
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = e[:i] + (e[i] - 1,) + e[i + 1:]
            terms[ne] = terms.get(ne, 0) + c * e[i]
        return Poly(self.dim, terms)

    # -- evaluation ------------------------------------------------------------
    def eval(self, x):
        """Evaluate with Python arithmetic (exact for exact coefficients/points)."""
        total = 0
        for e, c in self.terms.items():
            v = c
            for xi, ei in zip(x, e):
                for _ in range(ei):
                    v = v * xi
            total = total + v
        return total

    def _compile(self):
        if self._compiled is None:
            if self.terms:
                exps = np.array(sorted(self.terms), dtype=np.int64)
                coeffs = np.array([float(self.terms[tuple(e)]) for e in exps])
            else:
                exps = np.zeros((1, self.dim), dtype=np.int64)
                coeffs = np.zeros(1)
            self._compiled = (exps, coeffs)
        return self._compiled

    def eval_many(self, points):
        """Vectorized float evaluation at an (npoints, dim) array."""
        points = np.asarray(points, dtype=float)
        single = points.ndim == 1
        if single:
            points = points[None, :]
        exps, coeffs = self._compile()
        vals = np.prod(points[:, None, :] ** exps[None, :, :], axis=2) @ coeffs
        return float(vals[0]) if single else vals

    def to_float(self):
        return Poly(self.dim, {e: float(c) for e, c in self.terms.items()})

    # -- serialization -----------------------------------------------------------
    def to_json_obj(self):
        return {"dim": self.dim,
                "terms": [[list(e), float(c)] for e, c in sorted(self.terms.items())]}

    @classmethod
    def from_json_obj(cls, obj):
        return cls(obj["dim"], {tuple(e): c for e, c in obj["terms"]})

    def to_json(self):
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, s):
        return cls.from_json_obj(json.loads(s))


def poly_from_univariate(coeffs, inner):
    """Compose a one-variable coefficient list with an inner polynomial.

    Returns sum_k coeffs[k] * inner**k by Horner's scheme; exact when both
    the coefficients and the inner polynomial are exact.
    """
    out = Poly.constant(inner.dim, coeffs[-1])
    for c in reversed(coeffs[:-1]):
        out = out * inner + c
    return out


def radial_argument(dim):
    """The polynomial 2(x_1^2+...+x_d^2) - 1 feeding the radial Jacobi factor."""
    return Poly.norm_sq(dim) * 2 - 1


def x_dot_grad(p):
    """Euler operator sum_i x_i d/dx_i; multiplies each term by its degree."""
    return Poly(p.dim, {e: c * sum(e) for e, c in p.terms.items()})


def _exact_multiplicity(p, kappa):
    if p.is_exact():
        return tuple(Fraction(k) for k in kappa)
    return tuple(kappa)


def dunkl_apply(p, i, kappa):
    """Dunkl derivative in direction i for the sign-change group.

    Acts as d/dx_i plus kappa_i times the divided difference
    (f(x)-f(x with x_i negated))/x_i, computed on coefficients: terms odd in
    x_i contribute 2 kappa_i x^(a - e_i), even terms contribute nothing.
    Degree drops by exactly one on homogeneous input (when nonzero).
    """
    kex = _exact_multiplicity(p, kappa)
    ki = kex[i]
    terms = {}
    for e, c in p.terms.items():
        ai = e[i]
        if ai == 0:
            continue
        factor = ai + (2 * ki if ai % 2 == 1 else 0)
        ne = e[:i] + (ai - 1,) + e[i + 1:]
        terms[ne] = terms.get(ne, 0) + c * factor
    return Poly(p.dim, terms)


def h_laplacian(p, kappa):
    """Sum of squared Dunkl derivatives."""
    out = Poly.zero(p.dim)
    for i in range(p.dim):
        out = out + dunkl_apply(dunkl_apply(p, i, kappa), i, kappa)
    return out


def spherical_h_laplacian(p, kappa):
    """Spherical part of the h-Laplacian, via the polar decomposition.

    For the full operator L = d^2/dr^2 + (2 lam + 1)/r d/dr + r^{-2} L_0 one
    has L_0 = r^2 L - (E^2 + 2 lam E) with E the Euler operator; h-harmonics
    of degree n are eigenfunctions of L_0 with eigenvalue -n(n + 2 lam).
    """
    lam2 = 2 * float(sum(kappa)) + p.dim - 2
    if p.is_exact():
        lam2 = 2 * sum(Fraction(k) for k in kappa) + p.dim - 2
    e1 = x_dot_grad(p)
    return Poly.norm_sq(p.dim) * h_laplacian(p, kappa) - x_dot_grad(e1) - lam2 * e1


# ---------------------------------------------------------------------------
# Weight parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightParams:
    """Parameters of the weight prod|x_i|^{2k_i} ||x||^{2 nu} (1-||x||^2)^{mu-1/2}.

    Derived exponents are recomputed properties, never stored.
    """

    d: int
    kappa: tuple
    mu: float
    nu: float

    def __post_init__(self):
        object.__setattr__(self, "kappa", tuple(float(k) for k in self.kappa))
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "nu", float(self.nu))
        if self.d not in (2, 3):
            raise ValueError(f"dimension must be 2 or 3, got {self.d}")
        if len(self.kappa) != self.d:
            raise ValueError("kappa must have one entry per coordinate")
        if any(k < 0 for k in self.kappa):
            raise ValueError("reflection exponents must be nonnegative")
        if self.mu <= -0.5:
            raise ValueError(f"mu must exceed -1/2, got {self.mu}")
        if self.nu + self.gamma_kappa + self.d / 2 <= 0:
            raise ValueError("nu + gamma_kappa + d/2 must be positive")

    @property
    def gamma_kappa(self):
        return float(sum(self.kappa))

    @property
    def lambda_kappa(self):
        return self.gamma_kappa + (self.d - 2) / 2

    @property
    def lambda_total(self):
        return self.nu + self.mu + self.gamma_kappa + (self.d - 1) / 2

    def with_nu(self, nu):
        return WeightParams(self.d, self.kappa, self.mu, nu)


# ---------------------------------------------------------------------------
# h-harmonic bases
# ---------------------------------------------------------------------------


def harmonic_dimension(n, d):
    """Dimension of the space of degree-n h-harmonics in d variables."""
    if n == 0:
        return 1
    lower = math.comb(n + d - 3, d - 1) if n >= 2 else 0
    return math.comb(n + d - 1, d - 1) - lower


def invariant_harmonic_dimension(m, d):
    """Dimension of the fully even (sign-invariant) h-harmonics of degree 2m."""
    return math.comb(m + d - 2, m)


@dataclass(frozen=True)
class HarmonicBasis:
    """Orthonormal h-harmonics of one degree, grouped by sign parity.

    Elements are exact-rational combinations of exact null-space vectors of
    the h-Laplacian, so each satisfies the harmonicity equation exactly at
    the coefficient level; orthonormality is with respect to the quadrature
    sphere rule and holds to roughly 1e-12.
    """

    degree: int
    kappa: tuple
    elements: tuple
    parities: tuple

    def __len__(self):
        return len(self.elements)


def _monomials_by_parity(n, d):
    groups = {}
    for exps in _exponents_of_degree(n, d):
        par = tuple(e % 2 for e in exps)
        groups.setdefault(par, []).append(exps)
    # deterministic ordering: sort parity keys and monomials
    return {p: sorted(groups[p], reverse=True) for p in sorted(groups)}


def _exponents_of_degree(n, d):
    if d == 1:
        yield (n,)
        return
    for k in range(n + 1):
        for rest in _exponents_of_degree(n - k, d - 1):
            yield (k,) + rest


def _laplacian_coefficient(e, i, kex):
    # coefficient of x^(e - 2 e_i) in Delta_h x^e
    ai = e[i]
    f1 = ai + (2 * kex[i] if ai % 2 == 1 else 0)
    f2 = (ai - 1) + (2 * kex[i] if (ai - 1) % 2 == 1 else 0)
    return f1 * f2


def _fraction_nullspace(rows, ncols):
    """Null-space basis of a matrix with Fraction entries (Gauss elimination)."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for rr in range(r, nrows):
            if mat[rr][c] != 0:
                pivot = rr
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for rr in range(nrows):
            if rr != r and mat[rr][c] != 0:
                f = mat[rr][c]
                mat[rr] = [v - f * w for v, w in zip(mat[rr], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -mat[ri][fc]
        basis.append(vec)
    return basis


@lru_cache(maxsize=None)
def h_harmonic_basis(degree, kappa, quad_nodes=None):
    """Orthonormal basis of degree-``degree`` h-harmonics for the given kappa.

    The null space of the h-Laplacian on homogeneous polynomials is computed
    exactly (Fraction arithmetic) per sign-parity class, then orthonormalized
    under the sphere quadrature rule by Cholesky of the Gram matrix.  Fails
    loudly if the null-space dimension disagrees with the dimension formula
    or if the Gram matrix is numerically singular.
    """
    kappa = tuple(float(k) for k in kappa)
    d = len(kappa)
    n = int(degree)
    if n == 0:
        return HarmonicBasis(0, kappa, (Poly.constant(d, Fraction(1)),), ((0,) * d,))
    kex = tuple(Fraction(k) for k in kappa)
    rule = quadrature.sphere_rule(kappa, 2 * n + (quad_nodes or 0))
    elements, parities = [], []
    total = 0
    for par, monos in _monomials_by_parity(n, d).items():
        img = sorted({e[:i] + (e[i] - 2,) + e[i + 1:]
                      for e in monos for i in range(d) if e[i] >= 2}, reverse=True)
        img_index = {e: r for r, e in enumerate(img)}
        rows = [[Fraction(0)] * len(monos) for _ in img]
        for ci, e in enumerate(monos):
            for i in range(d):
                if e[i] >= 2:
                    ne = e[:i] + (e[i] - 2,) + e[i + 1:]
                    rows[img_index[ne]][ci] += _laplacian_coefficient(e, i, kex)
        null = _fraction_nullspace(rows, len(monos))
        if not null:
            continue
        polys = []
        for vec in null:
            scale = max(abs(v) for v in vec if v != 0)
            p = Poly(d, {m: v / scale for m, v in zip(monos, vec)})
            polys.append(p)
        # orthonormalize the class under the quadrature inner product
        vals = np.vstack([p.eval_many(rule.points) for p in polys])
        gram = (vals * rule.weights) @ vals.T
        if np.linalg.cond(gram) > 1e12:
            raise RuntimeError(
                f"harmonic Gram matrix ill-conditioned at degree {n}, parity {par}: "
                f"cond={np.linalg.cond(gram):.3e}"
            )
        chol = np.linalg.cholesky(gram)
        mix = np.linalg.inv(chol)
        for row in mix:
            combo = Poly.zero(d)
            for coef, p in zip(row, polys):
                if coef != 0.0:
                    combo = combo + p * Fraction(coef)
            elements.append(combo)
            parities.append(par)
        total += len(null)
    expected = harmonic_dimension(n, d)
    if total != expected:
        raise RuntimeError(
            f"h-harmonic null space at degree {n} has dimension {total}, "
            f"expected {expected}"
        )
    return HarmonicBasis(n, kappa, tuple(elements), tuple(parities))


# ---------------------------------------------------------------------------
# Intertwining operator and the addition kernel
# ---------------------------------------------------------------------------


def _check_on_sphere(x, name):
    x = np.asarray(x, dtype=float)
    if abs(float(x @ x) - 1.0) > 1e-10:
        raise ValueError(f"{name} must lie on the unit sphere")
    return x


@lru_cache(maxsize=None)
def _intertwining_grid(kappa, nodes):
    axes_nodes, axes_weights = [], []
    for k in kappa:
        if k == 0:
            # (1+t) factor absorbed: the endpoint limit keeps only t = 1
            axes_nodes.append(np.array([1.0]))
            axes_weights.append(np.array([1.0]))
        else:
            r = quadrature.gauss_jacobi(nodes, k - 1, k)
            axes_nodes.append(r.nodes)
            axes_weights.append(r.weights / r.mass)
    grids = np.meshgrid(*axes_nodes, indexing="ij")
    wgrids = np.meshgrid(*axes_weights, indexing="ij")
    pts = np.stack([g.ravel() for g in grids])
    w = np.prod(np.stack([g.ravel() for g in wgrids]), axis=0)
    return pts, w


def intertwining_apply(kappa, g, x, y, nodes=None, degree_hint=None):
    """Apply the explicit intertwining integral to g(<., y>) at the point x.

    Averages g(sum_i x_i y_i t_i) over the product measure with density
    proportional to (1+t_i)(1-t_i^2)^(kappa_i - 1) per coordinate; a zero
    exponent collapses that coordinate's factor to the point mass at 1 (the
    identity operator).  Exact for polynomial g up to the node budget.
    """
    kappa = tuple(float(k) for k in kappa)
    if any(k < 0 for k in kappa):
        raise ValueError("reflection exponents must be nonnegative")
    if nodes is None:
        nodes = max(8, ((degree_hint or 8) + 3) // 2 + 1)
    pts, w = _intertwining_grid(kappa, nodes)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    arg = (x * y) @ pts
    return float(np.dot(w, np.asarray(g(arg), dtype=float)))


def addition_kernel(n, kappa, x, y, nodes=None):
    """Degree-n reproducing kernel of the h-harmonics at two sphere points.

    Computed through the intertwining integral applied to the Gegenbauer
    kernel term of index gamma_kappa + (d-2)/2; equals the orthonormal-basis
    sum over the degree-n h-harmonics.  The kernel normalization needs a
    positive index; the only excluded case (d = 2 with kappa = 0) is the
    ordinary circle, handled by the explicit cosine kernel.
    """
    from . import special

    kappa = tuple(float(k) for k in kappa)
    d = len(kappa)
    x = _check_on_sphere(x, "x")
    y = _check_on_sphere(y, "y")
    lam = sum(kappa) + (d - 2) / 2
    if lam <= 0:
        if any(k > 0 for k in kappa) or d != 2:
            raise ValueError("kernel index must be positive")
        if n == 0:
            return 1.0
        dtheta = math.atan2(x[1], x[0]) - math.atan2(y[1], y[0])
        return 2.0 * math.cos(n * dtheta)
    if n == 0:
        return 1.0
    g = lambda t: special.gegenbauer_kernel(n, lam, t)
    return intertwining_apply(kappa, g, x, y, nodes=nodes, degree_hint=n)
