"""Gauss-Jacobi rules, point-mass limit rules and tensor rules on ball/sphere/simplex.

One-dimensional Gauss nodes come from the Golub-Welsch eigenvalue problem for
the Jacobi recurrence coefficients.  The multivariate rules factor the weight
in (squared) polar coordinates:

* sphere: iterated cos^2-substitutions, one shifted Gauss-Jacobi factor per
  angle, assembled over all sign quadrants/octants;
* ball: a shifted Gauss-Jacobi rule in the squared radius times a sphere rule;
* simplex: the push-forward of the ball rule under the coordinate-squaring map.

Weights of the multivariate rules are normalized so that each rule integrates
the constant 1 to exactly 1 (the normalization constants are analytic, from
``special``, never fitted numerically).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln

from . import special

__all__ = [
    "Rule1D",
    "RuleND",
    "gauss_jacobi",
    "gauss_jacobi_01",
    "limit_rule",
    "point_mass_rule",
    "sphere_rule",
    "ball_rule",
    "simplex_rule",
    "integrate",
    "rule_to_csv",
]

#: exact degree reported for point-mass limit rules (exact for the limit
#: measure at any polynomial degree)
_POINT_MASS_DEGREE = 10**6


@dataclass(frozen=True)
class Rule1D:
    """Nodes/weights with a declared polynomial exactness degree."""

    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    weight_kind: str

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def mass(self):
        return float(np.sum(self.weights))


@dataclass(frozen=True)
class RuleND:
    """Multidimensional rule; ``points`` has shape (npoints, d)."""

    points: np.ndarray
    weights: np.ndarray
    domain: str
    exact_degree: int

    def __post_init__(self):
        object.__setattr__(self, "points", np.asarray(self.points, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        self.points.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def mass(self):
        return float(np.sum(self.weights))


def _jacobi_recurrence(m, alpha, beta):
    """Diagonal and off-diagonal of the m-point Jacobi recurrence matrix."""
    ab = alpha + beta
    diag = np.empty(m)
    diag[0] = (beta - alpha) / (ab + 2)
    for k in range(1, m):
        diag[k] = (beta * beta - alpha * alpha) / ((2 * k + ab) * (2 * k + ab + 2))
    off = np.empty(max(m - 1, 0))
    for k in range(1, m):
        num = 4 * k * (k + alpha) * (k + beta)
        den = (2 * k + ab) ** 2 * (2 * k + ab + 1)
        if k == 1 and abs(ab + 1) < 1e-13:
            # (k+ab)/(2k+ab-1) -> 1 as ab -> -1
            off[0] = math.sqrt(num / den)
        else:
            off[k - 1] = math.sqrt(num * (k + ab) / (den * (2 * k + ab - 1)))
    return diag, off


def gauss_jacobi(m, alpha, beta):
    """m-node Gauss rule for the weight (1-t)^alpha (1+t)^beta on [-1, 1].

    Weights are raw (they sum to the full mass of the weight), and the rule is
    exact through polynomial degree 2m-1.  Exponents <= -1 are rejected;
    callers needing the a -> 0 endpoint limit must route to ``limit_rule``.
    """
    if m < 1:
        raise ValueError("node count must be at least 1")
    if alpha <= -1 or beta <= -1:
        raise ValueError(
            f"Gauss-Jacobi needs exponents > -1, got ({alpha}, {beta}); "
            "use limit_rule for the point-mass limit"
        )
    if m == 1:
        nodes = np.array([(beta - alpha) / (alpha + beta + 2)])
        weights = np.array([special.jacobi_mass(alpha, beta)])
    else:
        diag, off = _jacobi_recurrence(m, alpha, beta)
        nodes, vecs = eigh_tridiagonal(diag, off)
        weights = special.jacobi_mass(alpha, beta) * vecs[0] ** 2
    return Rule1D(nodes, weights, 2 * m - 1, f"jacobi({alpha},{beta})")


def gauss_jacobi_01(m, alpha, beta):
    """m-node Gauss rule on [0, 1] for the weight u^beta (1-u)^alpha."""
    base = gauss_jacobi(m, alpha, beta)
    nodes = (1 + base.nodes) / 2
    weights = base.weights * 2.0 ** (-(alpha + beta + 1))
    return Rule1D(nodes, weights, base.exact_degree, f"shifted-jacobi({alpha},{beta})")


def limit_rule(side="both_endpoints"):
    """Point-mass rule realizing the a -> 0+ limit of c_a (1-t^2)^(a-1) dt.

    ``both_endpoints`` places mass 1/2 at each of t = -1 and t = 1 (the limit
    of the normalized symmetric weight).  ``right_endpoint`` places mass 1 at
    t = 1 and is the correct limit once the (1+t) factor of the intertwining
    weight is absorbed, since that factor kills the mass at t = -1.
    """
    if side == "both_endpoints":
        return point_mass_rule([-1.0, 1.0], [0.5, 0.5])
    if side == "right_endpoint":
        return point_mass_rule([1.0], [1.0])
    raise ValueError(f"unknown limit rule side {side!r}")


def point_mass_rule(nodes, weights):
    return Rule1D(np.asarray(nodes, float), np.asarray(weights, float),
                  _POINT_MASS_DEGREE, "point-mass-limit")


def _factor_nodes(exact_degree):
    # smallest m with 2(2m-1) >= exact_degree for squared-variable factors
    return max((exact_degree + 5) // 4, 1)


def sphere_rule(kappa, exact_degree):
    """Rule on the unit sphere for prod |x_i|^{2 kappa_i} dsigma, mass 1.

    Exact (to roundoff) for every monomial of total degree <= exact_degree
    against the normalized measure.  Closed-form construction is limited to
    d = 2 and d = 3.
    """
    kappa = tuple(float(k) for k in kappa)
    if any(k < 0 for k in kappa):
        raise ValueError("reflection exponents must be nonnegative")
    d = len(kappa)
    if d not in (2, 3):
        raise ValueError(f"sphere rules are implemented for d in (2, 3), got d={d}")
    m = _factor_nodes(exact_degree)
    if d == 2:
        k1, k2 = kappa
        # quadrant substitution w = cos^2(theta)
        wrule = gauss_jacobi_01(m, k2 - 0.5, k1 - 0.5)
        w = wrule.nodes
        c, s = np.sqrt(w), np.sqrt(1 - w)
        pts, wts = [], []
        for e1 in (1.0, -1.0):
            for e2 in (1.0, -1.0):
                pts.append(np.column_stack([e1 * c, e2 * s]))
                wts.append(0.5 * wrule.weights)
        points = np.vstack(pts)
        weights = np.concatenate(wts) * special.norm_const_sphere(kappa)
    else:
        k1, k2, k3 = kappa
        w1rule = gauss_jacobi_01(m, k2 + k3, k1 - 0.5)
        w2rule = gauss_jacobi_01(m, k3 - 0.5, k2 - 0.5)
        w1 = w1rule.nodes[:, None]
        w2 = w2rule.nodes[None, :]
        ww = (0.25 * w1rule.weights[:, None] * w2rule.weights[None, :]).ravel()
        x1 = np.broadcast_to(np.sqrt(w1), (m, m)).ravel()
        x2 = np.sqrt((1 - w1) * w2).ravel()
        x3 = np.sqrt((1 - w1) * (1 - w2)).ravel()
        pts, wts = [], []
        for e1 in (1.0, -1.0):
            for e2 in (1.0, -1.0):
                for e3 in (1.0, -1.0):
                    pts.append(np.column_stack([e1 * x1, e2 * x2, e3 * x3]))
                    wts.append(ww)
        points = np.vstack(pts)
        weights = np.concatenate(wts) * special.norm_const_sphere(kappa)
    return RuleND(points, weights, "sphere", 2 * (2 * m - 1) + 1)


def ball_rule(params, exact_degree):
    """Rule on the unit ball for the normalized generalized Gegenbauer weight.

    ``params`` carries d, kappa, mu, nu (see ``polyharmonics.WeightParams``).
    The radial factor is a shifted Gauss-Jacobi rule in the squared radius;
    the angular factor is ``sphere_rule``.  Weights sum to 1.
    """
    d, kappa, mu, nu = params.d, params.kappa, params.mu, params.nu
    gamma_k = float(sum(kappa))
    sph = sphere_rule(kappa, exact_degree)
    mr = _factor_nodes(exact_degree)
    alpha, beta = mu - 0.5, nu + gamma_k + d / 2 - 1
    radial = gauss_jacobi_01(mr, alpha, beta)
    rw = radial.weights / math.exp(betaln(beta + 1, alpha + 1))
    r = np.sqrt(radial.nodes)
    points = (r[:, None, None] * sph.points[None, :, :]).reshape(-1, d)
    weights = (rw[:, None] * sph.weights[None, :]).ravel()
    ed = min(2 * (2 * mr - 1) + 1, sph.exact_degree)
    return RuleND(points, weights, "ball", ed)


def simplex_rule(params, exact_degree):
    """Rule on the simplex for the normalized weight prod x_i^{k_i-1/2} |x|^nu (1-|x|)^{mu-1/2}.

    Push-forward of the ball rule under the coordinate-squaring map; the
    Jacobian relation between the two weights makes the weights carry over
    unchanged.
    """
    ball = ball_rule(params, 2 * exact_degree)
    return RuleND(ball.points**2, ball.weights, "simplex", ball.exact_degree // 2)


def integrate(rule, f):
    """Sum of weight * f(node); f is called once per node.

    Raises ValueError with the offending node attached if f returns a
    non-finite value.
    """
    if isinstance(rule, Rule1D):
        pts = rule.nodes
    else:
        pts = rule.points
    total = 0.0
    vals = np.empty(len(pts))
    for i, p in enumerate(pts):
        v = f(p)
        if not np.isfinite(v):
            raise ValueError(f"integrand returned non-finite value {v} at node {p}")
        vals[i] = v
    total = float(np.dot(rule.weights, vals))
    return total


def rule_to_csv(rule, path):
    """Write node coordinates and weights as CSV (header row, '.' decimals)."""
    with open(path, "w", newline="") as fh:
        if isinstance(rule, Rule1D):
            fh.write("node,weight\n")
            for x, w in zip(rule.nodes, rule.weights):
                fh.write(f"{x!r},{w!r}\n")
        else:
            d = rule.dim
            fh.write(",".join(f"x{i+1}" for i in range(d)) + ",weight\n")
            for p, w in zip(rule.points, rule.weights):
                fh.write(",".join(repr(c) for c in p) + f",{w!r}\n")
