"""Univariate orthogonal polynomials, kernel profiles and normalization constants.

Jacobi, Gegenbauer and generalized Gegenbauer families are evaluated by
three-term recurrence (explicit series only appear in the test suite as slow
oracles).  The module also houses the one-variable Cesaro and Poisson kernel
profiles and every gamma-function constant used to normalize the weights on
the interval, the sphere, the ball and the simplex.

All evaluation routines accept a scalar or an ndarray for the argument ``t``
and broadcast accordingly.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.special import betaln, gammaln

__all__ = [
    "pochhammer",
    "jacobi_eval",
    "jacobi_table",
    "jacobi_deriv",
    "jacobi_norm",
    "jacobi_orthonormal_eval",
    "jacobi_projection_kernel",
    "jacobi_coefficients",
    "jacobi_mass",
    "gegenbauer_eval",
    "gegenbauer_kernel",
    "gegenbauer_kernel_table",
    "gegenbauer_even_kernel",
    "gen_gegenbauer_eval",
    "gen_gegenbauer_ode_residual",
    "cesaro_weights",
    "cesaro_kernel_gegenbauer",
    "cesaro_kernel_jacobi",
    "poisson_profile",
    "norm_const_symmetric",
    "norm_const_gegenbauer",
    "gamma_ratio",
    "norm_const_sphere",
    "norm_const_ball",
    "norm_const_kernel",
]

_SQRT_PI = math.sqrt(math.pi)


def pochhammer(a, n):
    """Rising factorial a(a+1)...(a+n-1); 1 for n = 0.

    Computed multiplicatively (no gamma ratios), so the result is exact for
    int/Fraction input and free of cancellation for float input.
    """
    if n < 0:
        raise ValueError("pochhammer order must be nonnegative")
    out = 1
    for k in range(int(n)):
        out = out * (a + k)
    return out


def _check_jacobi_exponents(alpha, beta):
    if alpha <= -1 or beta <= -1:
        raise ValueError(f"Jacobi exponents must exceed -1, got ({alpha}, {beta})")


def jacobi_eval(n, alpha, beta, t):
    """Jacobi polynomial of degree n for exponents (alpha, beta) at t.

    Uses the standard three-term recurrence, which is numerically stable for
    the degree range used here (n <= 200).
    """
    _check_jacobi_exponents(alpha, beta)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    t = np.asarray(t, dtype=float)
    p_prev = np.ones_like(t)
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = (alpha - beta) / 2 + (alpha + beta + 2) / 2 * t
    ab = alpha + beta
    for k in range(2, n + 1):
        c1 = 2 * k * (k + ab) * (2 * k + ab - 2)
        c2 = (2 * k + ab - 1) * (alpha * alpha - beta * beta)
        c3 = (2 * k + ab - 2) * (2 * k + ab - 1) * (2 * k + ab)
        c4 = 2 * (k + alpha - 1) * (k + beta - 1) * (2 * k + ab)
        p, p_prev = ((c2 + c3 * t) * p - c4 * p_prev) / c1, p
    return p if p.ndim else float(p)


def jacobi_table(nmax, alpha, beta, t):
    """All Jacobi values of degree 0..nmax at t, stacked along axis 0."""
    _check_jacobi_exponents(alpha, beta)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((nmax + 1,) + t.shape)
    out[0] = 1.0
    if nmax == 0:
        return out
    out[1] = (alpha - beta) / 2 + (alpha + beta + 2) / 2 * t
    ab = alpha + beta
    for k in range(2, nmax + 1):
        c1 = 2 * k * (k + ab) * (2 * k + ab - 2)
        c2 = (2 * k + ab - 1) * (alpha * alpha - beta * beta)
        c3 = (2 * k + ab - 2) * (2 * k + ab - 1) * (2 * k + ab)
        c4 = 2 * (k + alpha - 1) * (k + beta - 1) * (2 * k + ab)
        out[k] = ((c2 + c3 * t) * out[k - 1] - c4 * out[k - 2]) / c1
    return out


def jacobi_deriv(n, alpha, beta, t, order=1):
    """Derivative of the Jacobi polynomial via the parameter-shift identity."""
    if order < 0:
        raise ValueError("derivative order must be nonnegative")
    if order > n:
        t = np.asarray(t, dtype=float)
        z = np.zeros_like(t)
        return z if z.ndim else 0.0
    scale = 1.0
    for i in range(order):
        scale *= (n + alpha + beta + 1 + i) / 2
    return scale * jacobi_eval(n - order, alpha + order, beta + order, t)


def jacobi_mass(alpha, beta):
    """Total integral of (1-t)^alpha (1+t)^beta over [-1, 1]."""
    _check_jacobi_exponents(alpha, beta)
    return math.exp((alpha + beta + 1) * math.log(2.0) + betaln(alpha + 1, beta + 1))


def jacobi_norm(n, alpha, beta):
    """Squared norm of the degree-n Jacobi polynomial.

    The underlying weight (1-t)^alpha (1+t)^beta is normalized to a
    probability measure, so the degree-0 norm is 1.
    """
    _check_jacobi_exponents(alpha, beta)
    if n == 0:
        return 1.0
    ab = alpha + beta
    logv = (
        gammaln(n + alpha + 1)
        + gammaln(n + beta + 1)
        + gammaln(ab + 2)
        - gammaln(n + ab + 1)
        - gammaln(n + 1)
        - gammaln(alpha + 1)
        - gammaln(beta + 1)
    )
    return math.exp(logv) / (2 * n + ab + 1)


def jacobi_orthonormal_eval(n, alpha, beta, t):
    """Orthonormal Jacobi value (probability-normalized weight)."""
    return jacobi_eval(n, alpha, beta, t) / math.sqrt(jacobi_norm(n, alpha, beta))


def jacobi_projection_kernel(n, alpha, beta, s):
    """Degree-n term of the Jacobi reproducing kernel at (s, 1).

    Equals p_n(1) p_n(s) for the orthonormal family; summing over degrees
    gives the partial-sum (Dirichlet) kernel of the Jacobi series.
    """
    h = jacobi_norm(n, alpha, beta)
    return jacobi_eval(n, alpha, beta, 1.0) * jacobi_eval(n, alpha, beta, s) / h


def jacobi_coefficients(n, alpha, beta):
    """Monomial coefficients [c_0, ..., c_n] of the degree-n Jacobi polynomial.

    Runs the recurrence on coefficient lists, so the result is exact when
    alpha and beta are Fractions (used to assemble exact multivariate bases).
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    prev = [1]
    if n == 0:
        return prev
    cur = [(alpha - beta) / 2, (alpha + beta + 2) / 2]
    ab = alpha + beta
    for k in range(2, n + 1):
        c1 = 2 * k * (k + ab) * (2 * k + ab - 2)
        c2 = (2 * k + ab - 1) * (alpha * alpha - beta * beta)
        c3 = (2 * k + ab - 2) * (2 * k + ab - 1) * (2 * k + ab)
        c4 = 2 * (k + alpha - 1) * (k + beta - 1) * (2 * k + ab)
        nxt = [c2 * c for c in cur] + [0 * cur[0]]
        for i, c in enumerate(cur):
            nxt[i + 1] = nxt[i + 1] + c3 * c
        for i, c in enumerate(prev):
            nxt[i] = nxt[i] - c4 * c
        prev, cur = cur, [c / c1 for c in nxt]
    return cur


def gegenbauer_eval(n, lam, t):
    """Gegenbauer polynomial of degree n and index lam > -1/2 at t."""
    if lam <= -0.5:
        raise ValueError(f"Gegenbauer index must exceed -1/2, got {lam}")
    if n < 0:
        raise ValueError("degree must be nonnegative")
    t = np.asarray(t, dtype=float)
    c_prev = np.ones_like(t)
    if n == 0:
        return c_prev if c_prev.ndim else float(c_prev)
    c = 2 * lam * t
    for k in range(2, n + 1):
        c, c_prev = (2 * t * (k + lam - 1) * c - (k + 2 * lam - 2) * c_prev) / k, c
    return c if c.ndim else float(c)


def gegenbauer_kernel(n, lam, t):
    """Degree-n Gegenbauer reproducing-kernel term ((n+lam)/lam) C_n at t.

    Requires lam > 0; the lam -> 0 Chebyshev limit is out of scope.
    """
    if lam <= 0:
        raise ValueError(f"kernel normalization requires a positive index, got {lam}")
    return (n + lam) / lam * gegenbauer_eval(n, lam, t)


def gegenbauer_kernel_table(nmax, lam, t):
    """Kernel terms of degree 0..nmax at t, stacked along axis 0."""
    if lam <= 0:
        raise ValueError(f"kernel normalization requires a positive index, got {lam}")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((nmax + 1,) + t.shape)
    out[0] = 1.0
    if nmax == 0:
        return out
    c_prev = np.ones_like(t)
    c = 2 * lam * t
    out[1] = (1 + lam) / lam * c
    for k in range(2, nmax + 1):
        c, c_prev = (2 * t * (k + lam - 1) * c - (k + 2 * lam - 2) * c_prev) / k, c
        out[k] = (k + lam) / lam * c
    return out


def gegenbauer_even_kernel(n, lam, s):
    """Even-degree Gegenbauer kernel expressed through its quadratic transform.

    Returns the degree-n Jacobi projection kernel for exponents
    (lam - 1/2, -1/2); substituting s = 2 t^2 - 1 recovers the degree-2n
    Gegenbauer kernel term at t.
    """
    if lam <= 0:
        raise ValueError(f"kernel normalization requires a positive index, got {lam}")
    return jacobi_projection_kernel(n, lam - 0.5, -0.5, s)


def _check_gen_gegenbauer(n, a, b):
    if a <= -0.5 or b < 0:
        raise ValueError(f"need a > -1/2 and b >= 0, got ({a}, {b})")
    if n >= 1 and a + b <= 0:
        raise ValueError("a + b must be positive for degrees >= 1")


def gen_gegenbauer_eval(n, a, b, t):
    """Generalized Gegenbauer polynomial for the weight |t|^{2b}(1-t^2)^{a-1/2}.

    Even degrees use the quadratic transform to Jacobi (a-1/2, b-1/2) at
    2t^2-1; odd degrees use the companion odd transform t * Jacobi
    (a-1/2, b+1/2) at 2t^2-1, with the classical scaling fixed by
    orthogonality of the full family.
    """
    _check_gen_gegenbauer(n, a, b)
    t = np.asarray(t, dtype=float)
    s = 2 * t * t - 1
    m, odd = divmod(n, 2)
    if odd:
        scale = pochhammer(a + b, m + 1) / pochhammer(b + 0.5, m + 1)
        out = scale * t * jacobi_eval(m, a - 0.5, b + 0.5, s)
    else:
        scale = pochhammer(a + b, m) / pochhammer(b + 0.5, m)
        out = scale * jacobi_eval(m, a - 0.5, b - 0.5, s)
    return out if np.ndim(out) else float(out)


def _gen_gegenbauer_derivs(n, a, b, t):
    # value, first and second derivative at t, via the quadratic transforms
    t = np.asarray(t, dtype=float)
    s = 2 * t * t - 1
    m, odd = divmod(n, 2)
    if odd:
        scale = pochhammer(a + b, m + 1) / pochhammer(b + 0.5, m + 1)
        q = jacobi_eval(m, a - 0.5, b + 0.5, s)
        dq = jacobi_deriv(m, a - 0.5, b + 0.5, s)
        d2q = jacobi_deriv(m, a - 0.5, b + 0.5, s, order=2)
        y = scale * t * q
        dy = scale * (q + 4 * t * t * dq)
        d2y = scale * (12 * t * dq + 16 * t**3 * d2q)
    else:
        scale = pochhammer(a + b, m) / pochhammer(b + 0.5, m)
        q = jacobi_eval(m, a - 0.5, b - 0.5, s)
        dq = jacobi_deriv(m, a - 0.5, b - 0.5, s)
        d2q = jacobi_deriv(m, a - 0.5, b - 0.5, s, order=2)
        y = scale * q
        dy = scale * 4 * t * dq
        d2y = scale * (4 * dq + 16 * t * t * d2q)
    return y, dy, d2y


def gen_gegenbauer_ode_residual(n, a, b, t):
    """Residual of the difference-differential equation of the family.

    Evaluates (1-t^2) y'' - (2a+2b+1) t y' + (2b/t)(y' - (y(t)-y(-t))/(2t))
    + n(n+2a+2b) y for y the degree-n generalized Gegenbauer polynomial; the
    result should vanish for every n.  For even n the reflection term drops
    and this is the pure differential form.  The point t = 0 is a removable
    singularity of the written form and is rejected.
    """
    _check_gen_gegenbauer(n, a, b)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr == 0.0):
        raise ValueError("t = 0 is a removable singularity; evaluate elsewhere")
    if np.any(np.abs(t_arr) >= 1):
        raise ValueError("residual is defined on the open interval (-1, 1)")
    y, dy, d2y = _gen_gegenbauer_derivs(n, a, b, t_arr)
    y_neg, _, _ = _gen_gegenbauer_derivs(n, a, b, -t_arr)
    resid = (
        (1 - t_arr * t_arr) * d2y
        - (2 * a + 2 * b + 1) * t_arr * dy
        + (2 * b / t_arr) * (dy - (y - y_neg) / (2 * t_arr))
        + n * (n + 2 * a + 2 * b) * y
    )
    return resid if resid.ndim else float(resid)


def cesaro_weights(n, delta):
    """Cesaro (C, delta) weights binom(n-k+delta, n-k)/binom(n+delta, n)."""
    if delta < 0:
        raise ValueError("Cesaro order must be nonnegative")
    w = np.empty(n + 1)
    w[n] = 1.0
    for k in range(n - 1, -1, -1):
        # w[k]/w[k+1] = (delta + n - k)/(n - k)
        w[k] = w[k + 1] * (delta + n - k) / (n - k)
    return w / w[0]


def cesaro_kernel_gegenbauer(n, delta, lam, s):
    """Cesaro (C, delta) kernel of the Gegenbauer series at (s, 1)."""
    w = cesaro_weights(n, delta)
    table = gegenbauer_kernel_table(n, lam, s)
    out = np.tensordot(w, table, axes=(0, 0))
    return out if np.ndim(s) else float(out[0])


def cesaro_kernel_jacobi(n, delta, alpha, beta, s):
    """Cesaro (C, delta) kernel of the Jacobi series at (s, 1)."""
    w = cesaro_weights(n, delta)
    table = jacobi_table(n, alpha, beta, s)
    ones = jacobi_table(n, alpha, beta, 1.0)[:, 0]
    norms = np.array([jacobi_norm(k, alpha, beta) for k in range(n + 1)])
    out = np.tensordot(w * ones / norms, table, axes=(0, 0))
    return out if np.ndim(s) else float(out[0])


def poisson_profile(r, lam, t):
    """Poisson kernel profile (1-r^2)/(1-2rt+r^2)^(lam+1); strictly positive."""
    if not 0 < r < 1:
        raise ValueError(f"radius must lie in (0, 1), got {r}")
    t = np.asarray(t, dtype=float)
    out = (1 - r * r) / (1 - 2 * r * t + r * r) ** (lam + 1)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Normalization constants.  Each is the reciprocal of the integral of the
# corresponding weight; every one is cross-checked against quadrature in the
# test suite, since a silently wrong constant is the main failure mode of the
# closed-form kernels.
# ---------------------------------------------------------------------------


def norm_const_symmetric(a):
    """Reciprocal of the integral of (1-t^2)^(a-1) over [-1, 1]; needs a > 0."""
    if a <= 0:
        raise ValueError("exponent must be positive; use the point-mass limit at 0")
    return math.exp(gammaln(a + 0.5) - gammaln(a)) / _SQRT_PI


def norm_const_gegenbauer(lam):
    """Reciprocal of the integral of (1-t^2)^(lam-1/2) over [-1, 1]."""
    if lam <= -0.5:
        raise ValueError(f"index must exceed -1/2, got {lam}")
    return math.exp(gammaln(lam + 1) - gammaln(lam + 0.5)) / _SQRT_PI


def gamma_ratio(p, q):
    """Gamma(p+q) / (Gamma(p) Gamma(q)), the reciprocal of a beta integral."""
    if p <= 0 or q <= 0:
        raise ValueError("beta-integral arguments must be positive")
    return math.exp(gammaln(p + q) - gammaln(p) - gammaln(q))


def norm_const_sphere(kappa):
    """Reciprocal of the integral of prod |x_i|^{2 kappa_i} over the sphere."""
    kappa = tuple(float(k) for k in kappa)
    if any(k < 0 for k in kappa):
        raise ValueError("reflection exponents must be nonnegative")
    d = len(kappa)
    gamma_k = sum(kappa)
    logv = gammaln(gamma_k + d / 2) - math.log(2.0) - sum(gammaln(k + 0.5) for k in kappa)
    return math.exp(logv)


def norm_const_ball(d, kappa, mu, nu):
    """Reciprocal of the ball integral of prod|x_i|^{2k_i} |x|^{2nu} (1-|x|^2)^{mu-1/2}."""
    gamma_k = float(sum(kappa))
    radial = 0.5 * math.exp(betaln(nu + gamma_k + d / 2, mu + 0.5))
    return norm_const_sphere(kappa) / radial


def norm_const_kernel(d, kappa, mu, nu):
    """Normalizing constant of the concise reproducing-kernel integral.

    Product of the reciprocals of the raw masses of the active integration
    factors; factors handled by a point-mass limit (any kappa_i = 0, mu = 0,
    nu = 0) are already normalized and contribute 1.
    """
    gamma_k = float(sum(kappa))
    out = 1.0
    for k in kappa:
        if k > 0:
            out *= norm_const_symmetric(k)
    if mu > 0:
        out *= norm_const_symmetric(mu)
    if nu > 0:
        out *= gamma_ratio(nu, gamma_k + d / 2)
        out *= norm_const_gegenbauer(nu)
    return out
