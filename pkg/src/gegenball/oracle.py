"""Brute-force validators: Gram-Schmidt bases and kernels rebuilt from them.

Independent of the closed-form constructions: orthogonal bases are produced
by modified Gram-Schmidt over monomials in graded-lexicographic order under a
quadrature inner product, and the reproducing kernel is reassembled as the
plain orthonormal sum.  Slowness is acceptable; these exist to cross-check
the fast paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polyharmonics import Poly

__all__ = ["GSBasis", "gs_basis", "kernel_oracle"]


@dataclass(frozen=True)
class GSBasis:
    """Orthonormal basis of the degree-n orthogonal complement."""

    degree: int
    elements: tuple


def _graded_monomials(n, d):
    out = []
    for total in range(n + 1):
        out.extend(sorted(_exponents(total, d), reverse=True))
    return out


def _exponents(total, d):
    if d == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _exponents(total - k, d - 1):
            yield (k,) + rest


def gs_basis(params, n, rule):
    """Orthonormal basis of the space of degree-n orthogonal polynomials.

    Graded Gram-Schmidt over monomials (one reorthogonalization pass) under
    the quadrature inner product of ``rule``, which must be exact to degree
    2n.  Raises on numerical rank deficiency, which signals an inadequate
    rule rather than an unlucky basis.
    """
    d = rule.dim
    pts, w = rule.points, rule.weights
    basis_polys, basis_vals = [], []
    degree_n = []
    for mono in _graded_monomials(n, d):
        p = Poly.monomial(d, mono, 1.0)
        v = p.eval_many(pts)
        norm0 = float(np.dot(w, v * v))
        for _ in range(2):  # modified GS plus one reorthogonalization pass
            for q, qv in zip(basis_polys, basis_vals):
                c = float(np.dot(w, v * qv))
                if c != 0.0:
                    v = v - c * qv
                    p = p - c * q
        norm2 = float(np.dot(w, v * v))
        if norm2 <= 1e-24 * norm0:
            raise RuntimeError(
                f"rank deficiency at monomial {mono}: the quadrature rule "
                "cannot resolve the inner products"
            )
        s = 1.0 / math.sqrt(norm2)
        p = p * s
        v = v * s
        basis_polys.append(p)
        basis_vals.append(v)
        if sum(mono) == n:
            degree_n.append(p)
    return GSBasis(n, tuple(degree_n))


def kernel_oracle(params, n, x, y, rule, basis=None):
    """Degree-n reproducing kernel rebuilt from the Gram-Schmidt basis.

    Must agree with the closed-form kernels: the kernel is independent of the
    choice of orthonormal basis, and this equality is the test.
    """
    if basis is None:
        basis = gs_basis(params, n, rule)
    x = np.asarray(x, dtype=float)[None, :]
    y = np.asarray(y, dtype=float)[None, :]
    return float(
        sum(q.eval_many(x)[0] * q.eval_many(y)[0] for q in basis.elements)
    )
