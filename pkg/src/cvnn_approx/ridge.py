"""Ridge-function approximation on the real cube [-1, 1]^s.

Powers ``(a^T x)^r`` of a linear form are homogeneous of degree r, and
enough generic directions a span each space H^s_r of homogeneous
polynomials.  A polynomial is therefore a sum of univariate polynomials
of linear forms.  With too few directions the best ridge sum is found by
least squares, either degree by degree on monomial coefficients or on
samples at Chebyshev points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial

from .core import cube_grid
from .errors import BasisInsufficientError, DimensionError, ParameterError, SpanFailureError
from .trig import chebyshev_approximant, chebyshev_functionals, chebyshev_monomials

MAX_ATTEMPTS = 100


def homogeneous_dim(s, m):
    """Dimension of the homogeneous polynomials of degree m in s variables."""
    if s < 1 or m < 0:
        raise ParameterError("need s >= 1 and m >= 0")
    return math.comb(s + m - 1, m)


def homogeneous_exponents(s, m):
    """Exponent vectors e in N^s with |e| = m, lexicographically descending."""
    if s == 1:
        return [(m,)]
    out = []
    for first in range(m, -1, -1):
        out += [(first,) + rest for rest in homogeneous_exponents(s - 1, m - first)]
    return out


def _multinomial(e):
    out = math.factorial(sum(e))
    for v in e:
        out //= math.factorial(v)
    return out


def power_matrix(directions, r):
    """Columns: coefficients of (a_j^T x)^r in the monomial basis of H^s_r."""
    directions = np.asarray(directions, dtype=np.float64)
    s = directions.shape[1]
    exps = homogeneous_exponents(s, r)
    out = np.empty((len(exps), directions.shape[0]))
    for i, e in enumerate(exps):
        out[i] = _multinomial(e) * np.prod(directions ** np.array(e, dtype=np.float64), axis=1)
    return out


def _scaled_rank(directions, r):
    """Numerical rank of the degree-r power matrix with multinomials divided out."""
    a = power_matrix(directions, r)
    exps = homogeneous_exponents(directions.shape[1], r)
    a = a / np.array([_multinomial(e) for e in exps], dtype=np.float64)[:, None]
    norms = np.linalg.norm(directions, axis=1)
    norms = np.where(norms > 0, norms, 1.0)
    a = a / norms[None, :] ** r
    return int(np.linalg.matrix_rank(a))


def spans(directions, degree):
    """True when the powers (a_j^T x)^r, r <= degree, span all polynomials of that degree."""
    directions = np.asarray(directions, dtype=np.float64)
    s = directions.shape[1]
    return all(_scaled_rank(directions, r) == homogeneous_dim(s, r) for r in range(degree + 1))


@dataclass(frozen=True)
class RidgeBasis:
    directions: np.ndarray = field(repr=False)
    norm_r: float
    certified_degree: int = None

    @property
    def s(self):
        return self.directions.shape[1]

    @property
    def count(self):
        return self.directions.shape[0]

    def prefix(self, count):
        return RidgeBasis(self.directions[:count], self.norm_r, None)


def random_directions(s, count, norm_r=1.0, seed=0):
    """Gaussian directions rescaled to length ``norm_r`` (no span guarantee)."""
    if s < 1 or count < 1:
        raise ParameterError("need s >= 1 and at least one direction")
    if not norm_r > 0:
        raise ParameterError("norm_r must be positive")
    rng = np.random.default_rng(seed)
    d = rng.standard_normal((count, s))
    d *= norm_r / np.linalg.norm(d, axis=1, keepdims=True)
    return RidgeBasis(d, float(norm_r), None)


def build_ridge_basis(s, degree, norm_r=1.0, seed=0, count=None):
    """Random directions whose powers span polynomials of total degree <= ``degree``.

    At least ``homogeneous_dim(s, degree)`` directions are drawn; a draw
    that fails the rank test is replaced, up to 100 times.
    """
    if degree < 0:
        raise ParameterError("degree must be non-negative")
    need = homogeneous_dim(s, degree)
    count = need if count is None else max(int(count), need)
    rng = np.random.default_rng(seed)
    for _ in range(MAX_ATTEMPTS):
        d = rng.standard_normal((count, s))
        d *= norm_r / np.linalg.norm(d, axis=1, keepdims=True)
        if spans(d, degree):
            return RidgeBasis(d, float(norm_r), degree)
    raise SpanFailureError(f"{MAX_ATTEMPTS} draws of {count} directions failed to span degree {degree} in {s} variables")


def chebyshev_to_monomials(expansion):
    """Dense monomial coefficients ``c[e_1, ..., e_s]`` of a Chebyshev expansion."""
    K = expansion.degree
    cheb = np.array(chebyshev_monomials(K), dtype=np.float64)
    out = np.asarray(expansion.coeffs, dtype=np.float64)
    for _ in range(expansion.s):
        # contract the leading k axis, append the exponent axis at the end
        out = np.tensordot(out, cheb, axes=([0], [0]))
    return out


@dataclass
class RidgeProjection:
    """``x -> sum_j p_j(a_j^T x)`` with one univariate polynomial per direction."""

    basis: RidgeBasis
    univariate: list = field(repr=False)
    degree: int
    residual: float
    span_complete: bool
    method: str

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if x.shape[1] != self.basis.s:
            raise DimensionError(f"expected points in R^{self.basis.s}")
        t = x @ self.basis.directions.T
        out = np.zeros(x.shape[0])
        for j, p in enumerate(self.univariate):
            out += p(t[:, j])
        return out


def _project_coefficients(mono, K, basis, D):
    s = basis.s
    coeffs = np.zeros((basis.count, D + 1))
    complete = True
    for r in range(D + 1):
        exps = homogeneous_exponents(s, r)
        target = np.array([mono[e] if max(e) <= K else 0.0 for e in exps])
        a = power_matrix(basis.directions, r)
        sol, _, rank, _ = np.linalg.lstsq(a, target, rcond=None)
        if rank < len(exps):
            complete = False
        coeffs[:, r] = sol
    return [Polynomial(c) for c in coeffs], complete


def _project_sampled(expansion, basis, D):
    s = basis.s
    # Chebyshev points of the second kind, enough for every ridge feature
    per_axis = max(2 * D + 2, 16)
    if per_axis**s > 2_000_000:
        raise ParameterError(f"sampled projection would need {per_axis}^{s} points")
    axis = np.cos(np.pi * np.arange(per_axis) / (per_axis - 1))
    mesh = np.meshgrid(*([axis] * s), indexing="ij")
    pts = np.stack([g.ravel() for g in mesh], axis=-1)
    values = chebyshev_approximant(expansion)(pts)
    half_widths = np.linalg.norm(basis.directions, axis=1) * math.sqrt(s)
    t = pts @ basis.directions.T
    cols = [np.ones(len(pts))]
    for j in range(basis.count):
        cols.append(np.polynomial.chebyshev.chebvander(t[:, j] / half_widths[j], D)[:, 1:])
    design = np.column_stack(cols)
    sol, _, rank, _ = np.linalg.lstsq(design, values, rcond=None)
    polys = []
    for j in range(basis.count):
        c = np.concatenate([[sol[0] if j == 0 else 0.0], sol[1 + j * D : 1 + (j + 1) * D]])
        w = half_widths[j]
        polys.append(Chebyshev(c, domain=[-w, w]))
    return polys, spans(basis.directions, D) if basis.count >= homogeneous_dim(s, D) else False


def ridge_project(f, s, cheb_degree, basis, method="sampled", quad_points=None, points_per_axis=None, strict=False):
    """Ridge representation of the Chebyshev approximant P of f.

    ``cheb_degree`` is the de la Vallee Poussin index m, so P has
    coordinatewise degree 2m - 1 and total degree D = s (2m - 1); each
    direction carries a univariate polynomial of degree D.

    ``method="coefficients"`` projects every homogeneous part of P onto
    the span of the powers (a_j^T x)^r in monomial coefficients.  That is
    exact whenever the directions span, but with fewer directions the
    unspanned parts are simply dropped.  ``method="sampled"`` fits P by
    least squares on a tensor grid of Chebyshev points, which lets low
    degree ridge terms absorb part of what the directions cannot span.

    ``residual`` is the sup over the default grid of |f - ridge sum|.
    With ``strict`` a basis that does not span degree D raises
    :class:`BasisInsufficientError`.
    """
    if basis.s != s:
        raise DimensionError("basis directions live in a different dimension")
    expansion = chebyshev_functionals(f, s, cheb_degree, quad_points)
    K = expansion.degree
    D = s * K
    if method == "coefficients":
        polys, complete = _project_coefficients(chebyshev_to_monomials(expansion), K, basis, D)
    elif method == "sampled":
        polys, complete = _project_sampled(expansion, basis, D)
    else:
        raise ParameterError(f"unknown projection method {method!r}")
    if strict and not complete:
        raise BasisInsufficientError(f"{basis.count} directions do not span degree {D} in {s} variables")
    out = RidgeProjection(basis, polys, D, float("nan"), complete, method)
    pts = cube_grid(s, points_per_axis or (33 if s <= 2 else 9))
    fv = np.asarray(f(pts), dtype=np.float64).reshape(-1)
    out.residual = float(np.max(np.abs(fv - out(pts))))
    return out


def ridge_constant(s):
    """c_2 = (2s)^{s-1} 2^{s-1}."""
    return (2 * s) ** (s - 1) * 2 ** (s - 1)


def ridge_select_M(m, s):
    """Largest M with c_2 M^{s-1} <= m, or 0 when m < c_2."""
    if s < 2:
        raise ParameterError("ridge budgets are meaningful for s >= 2")
    c2 = ridge_constant(s)
    if m < c2:
        return 0
    M = 1
    while c2 * (M + 1) ** (s - 1) <= m:
        M += 1
    return M
