"""Trigonometric kernels, the de la Vallee Poussin operator and Chebyshev functionals.

Fourier coefficients are normalized as

    g^(k) = (2 pi)^-s  integral over [-pi, pi]^s of g(x) exp(-i k.x) dx,

and L1 norms carry the same (2 pi)^-s factor, so the Fejer kernel has
norm exactly 1.  For f on [-1, 1]^s we write f*(x) = f(cos x); it is even
in every coordinate, which turns trigonometric approximation of f* into
algebraic approximation of f in the Chebyshev basis.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import BudgetError, DimensionError, ParameterError

MAX_DIMENSION = 4
DEFAULT_BUDGET = 20_000_000


@dataclass(frozen=True)
class TrigPolyCoeffs:
    """``sum_k c_k exp(i k.x)`` with frequencies k in Z^s."""

    s: int
    coeffs: dict = field(repr=False)

    @property
    def degree(self):
        live = [k for k, c in self.coeffs.items() if c != 0]
        return max((max(abs(v) for v in k) for k in live), default=0)

    def dense(self):
        """Coefficients as an array indexed by k + degree."""
        d = self.degree
        out = np.zeros((2 * d + 1,) * self.s, dtype=np.complex128)
        for k, c in self.coeffs.items():
            if c != 0:
                out[tuple(v + d for v in k)] = c
        return out

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if x.shape[1] != self.s:
            raise DimensionError(f"expected points of dimension {self.s}")
        out = np.zeros(x.shape[0], dtype=np.complex128)
        for k, c in sorted(self.coeffs.items()):
            out += c * np.exp(1j * (x @ np.asarray(k, dtype=np.float64)))
        return out

    def get(self, k):
        return self.coeffs.get(tuple(k), 0.0)


def _profile_dirichlet(m, k):
    return 1.0 if abs(k) <= m else 0.0


def _profile_fejer(m, k):
    return (m - abs(k)) / m if abs(k) < m else 0.0


def _profile_vallee_poussin(m, k):
    k = abs(k)
    if k <= m:
        return 1.0
    if k < 2 * m:
        return (2 * m - k) / m
    return 0.0


_PROFILES = {
    "dirichlet": (_profile_dirichlet, lambda m: m),
    "fejer": (_profile_fejer, lambda m: m - 1),
    "vallee-poussin": (_profile_vallee_poussin, lambda m: 2 * m - 1),
}


def _kernel(kind, m, s):
    if m < 1:
        raise ParameterError(f"kernel index must be at least 1, got {m}")
    if s < 1:
        raise DimensionError("dimension must be at least 1")
    profile, reach = _PROFILES[kind]
    top = reach(m)
    coeffs = {}
    for k in itertools.product(range(-top, top + 1), repeat=s):
        c = math.prod(profile(m, v) for v in k)
        if c != 0:
            coeffs[k] = c
    return TrigPolyCoeffs(s, coeffs)


def dirichlet(m, s=1):
    """Coefficient 1 for |k_j| <= m."""
    return _kernel("dirichlet", m, s)


def fejer(m, s=1):
    """Coefficients (m - |k|)/m; the Cesaro mean of the first m Dirichlet kernels."""
    return _kernel("fejer", m, s)


def vallee_poussin(m, s=1):
    """``(1 + e_m + e_-m) F_m`` in each coordinate: flat to |k| = m, linear to 2m."""
    return _kernel("vallee-poussin", m, s)


def vallee_poussin_weight(m, k):
    """Tensor coefficient a_k^m of the de la Vallee Poussin kernel."""
    return math.prod(_profile_vallee_poussin(m, v) for v in k)


def l1_norm(kernel, points_per_axis=None):
    """Normalized L1 norm by the periodic trapezoid rule.

    The kernel is a trigonometric polynomial, but its modulus is not, so
    the rule is only asymptotically exact; the default resolution keeps the
    error below 1e-3, far inside every bound checked here.
    """
    s = kernel.s
    d = kernel.degree
    if points_per_axis is None:
        points_per_axis = max(256, 64 * (d + 1)) if s == 1 else max(256, 32 * (d + 1))
    axis = -math.pi + 2 * math.pi * np.arange(points_per_axis) / points_per_axis
    phases = np.exp(1j * np.outer(np.arange(-d, d + 1), axis))
    values = kernel.dense()
    for _ in range(s):
        # contract the leading axis and append the sample axis at the end
        values = np.tensordot(values, phases, axes=([0], [0]))
    return float(np.abs(values).mean())


def vm_apply(coeffs, m):
    """Multiply coefficients by the de la Vallee Poussin weights a_k^m."""
    out = {}
    for k, c in coeffs.coeffs.items():
        w = vallee_poussin_weight(m, k)
        if w != 0:
            out[k] = c * w
    return TrigPolyCoeffs(coeffs.s, out)


def _quadrature_size(s, max_freq, quad_points, budget):
    if s < 1:
        raise DimensionError("dimension must be at least 1")
    if s > MAX_DIMENSION:
        raise BudgetError(f"dimension {s} exceeds the supported maximum {MAX_DIMENSION}")
    if quad_points is None:
        quad_points = max(64 if s <= 2 else 16, 4 * max_freq + 4)
    if quad_points < 4 * max_freq + 4:
        raise ParameterError(f"{quad_points} quadrature points alias frequency {max_freq}; need at least {4 * max_freq + 4}")
    if quad_points**s > budget:
        raise BudgetError(f"{quad_points}^{s} evaluations exceed the budget of {budget}")
    return quad_points


def _star_samples(f, s, quad_points):
    axis = -math.pi + 2 * math.pi * np.arange(quad_points) / quad_points
    mesh = np.meshgrid(*([np.cos(axis)] * s), indexing="ij")
    pts = np.stack([g.ravel() for g in mesh], axis=-1)
    values = np.asarray(f(pts)).reshape((quad_points,) * s)
    return axis, values


def _cosine_analysis(values, axis, max_freq):
    quad_points = axis.shape[0]
    cos_matrix = np.cos(np.outer(np.arange(max_freq + 1), axis)) / quad_points
    return _kernels.contract_axes(values, cos_matrix)


def star_fourier_coefficients(f, s, max_freq, quad_points=None, budget=DEFAULT_BUDGET):
    """Coefficients of f*(x) = f(cos x) for |k_j| <= max_freq by the trapezoid rule.

    f* is even in each variable and the grid is symmetric, so only the
    cosine transform is computed; the coefficient at k depends on |k| alone.
    """
    q = _quadrature_size(s, max_freq, quad_points, budget)
    axis, values = _star_samples(f, s, q)
    half = _cosine_analysis(values, axis, max_freq)
    coeffs = {}
    for k in itertools.product(range(-max_freq, max_freq + 1), repeat=s):
        coeffs[k] = half[tuple(abs(v) for v in k)]
    return TrigPolyCoeffs(s, coeffs)


@dataclass(frozen=True)
class ChebyshevExpansion:
    """``sum_k V_k T_k(x)`` over 0 <= k_j <= degree, stored densely."""

    s: int
    m: int
    coeffs: np.ndarray = field(repr=False)

    @property
    def degree(self):
        return self.coeffs.shape[0] - 1

    def items(self):
        for k in itertools.product(range(self.degree + 1), repeat=self.s):
            yield k, self.coeffs[k]

    def coefficient_l1(self):
        return float(np.abs(self.coeffs).sum())

    def __add__(self, other):
        if (self.s, self.m) != (other.s, other.m):
            raise DimensionError("expansions differ in dimension or degree")
        return ChebyshevExpansion(self.s, self.m, self.coeffs + other.coeffs)

    def scale(self, c):
        return ChebyshevExpansion(self.s, self.m, self.coeffs * c)


def chebyshev_functionals(f, s, m, quad_points=None, budget=DEFAULT_BUDGET):
    """Chebyshev coefficients ``V_k = 2^{||k||_0} a_k^m f*^(k)`` for 0 <= k <= 2m - 1.

    The resulting polynomial is v_m applied to f*, read back on [-1, 1]^s.
    Linear in f; real when f is real.
    """
    if m < 1:
        raise ParameterError(f"m must be at least 1, got {m}")
    top = 2 * m - 1
    if quad_points is None:
        quad_points = max(64 if s <= 2 else 16, 8 * m)
    q = _quadrature_size(s, top, quad_points, budget)
    axis, values = _star_samples(f, s, q)
    half = _cosine_analysis(values, axis, top)
    profile = np.array([_profile_vallee_poussin(m, k) for k in range(top + 1)])
    weights = np.ones((top + 1,) * s)
    for j in range(s):
        shape = [1] * s
        shape[j] = top + 1
        axis_w = profile * np.where(np.arange(top + 1) > 0, 2.0, 1.0)
        weights = weights * axis_w.reshape(shape)
    return ChebyshevExpansion(s, m, half * weights)


def chebyshev_approximant(expansion):
    """Vectorized evaluator of ``sum_k V_k T_k`` via the three-term recurrence."""
    s = expansion.s
    deg = expansion.degree
    coeffs = expansion.coeffs

    def evaluate(x):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if x.shape[1] != s:
            raise DimensionError(f"expected points of dimension {s}")
        tables = [_kernels.chebyshev_table(x[:, j], deg) for j in range(s)]
        # contract one axis at a time: acc[i, k_{j+1}, ...]
        acc = np.broadcast_to(coeffs, (x.shape[0],) + coeffs.shape)
        for j in range(s):
            acc = np.einsum("nk...,nk->n...", acc, tables[j])
        return acc

    return evaluate


def chebyshev_bound_constant(s, m):
    """``2^s 2^{s/2} m^{s/2}``, the constant bounding sum |V_k| by sup |f|."""
    return 2.0**s * 2.0 ** (s / 2) * m ** (s / 2)


def chebyshev_monomials(degree):
    """Integer monomial coefficients of T_0 .. T_degree; row k holds T_k."""
    rows = [[1] + [0] * degree]
    if degree >= 1:
        rows.append([0, 1] + [0] * (degree - 1))
    for k in range(2, degree + 1):
        prev, prev2 = rows[-1], rows[-2]
        rows.append([2 * (prev[i - 1] if i else 0) - prev2[i] for i in range(degree + 1)])
    return rows
