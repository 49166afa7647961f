"""Central divided differences, Newton tables and the simplex integral oracle.

The multivariate difference used throughout is

    f_{p,h} = (2h)^{-|p|} sum_{0 <= r <= p} (-1)^{|p|-|r|} C(p, r) f(h (2r - p)),

a tensor product of univariate central differences.  Its integer
weights are kept exact and the scale is applied last.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import MultiIndex, dominated, iso_real_to_complex, multiindex_binomial
from .errors import DegeneracyError, DimensionError, ParameterError, StencilTooWideError

H_FLOOR = 1e-4


@lru_cache(maxsize=4096)
def _stencil(p):
    p = MultiIndex(p)
    out = []
    for r in dominated(p):
        sign = -1 if (p.order - r.order) % 2 else 1
        alpha = tuple(2 * a - b for a, b in zip(r, p))
        out.append((alpha, sign * multiindex_binomial(p, r)))
    return tuple(out)


def central_stencil(p):
    """Integer offsets ``2r - p`` and weights ``(-1)^{|p|-|r|} C(p, r)``."""
    return _stencil(tuple(MultiIndex(p)))


def divided_difference(f, p, h):
    """Central divided difference f_{p,h} of a vectorized real function.

    ``f`` receives an array of shape (K, s) and returns K values.
    """
    p = MultiIndex(p)
    if not h > 0:
        raise ParameterError(f"step h must be positive, got {h}")
    stencil = central_stencil(p)
    nodes = np.array([a for a, _ in stencil], dtype=np.float64) * h
    values = np.asarray(f(nodes), dtype=np.float64).reshape(-1)
    if values.shape[0] != len(stencil):
        raise DimensionError("function returned the wrong number of values")
    total = math.fsum(c * v for (_, c), v in zip(stencil, values))
    return total / (2.0 * h) ** p.order


def divided_difference_table(xs, ys):
    """Newton table; ``table[j][k]`` is the divided difference [y_k .. y_{k+j}]."""
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys):
        raise DimensionError("xs and ys differ in length")
    if len(set(xs)) != len(xs):
        raise DegeneracyError("interpolation points must be distinct")
    table = [ys]
    for j in range(1, len(xs)):
        prev = table[-1]
        table.append([(prev[k + 1] - prev[k]) / (xs[k + j] - xs[k]) for k in range(len(xs) - j)])
    return table


def equidistant_divided_difference(f, x0, h, k):
    """``[x_0 .. x_k] f`` on the nodes ``x_r = x0 + r h`` via the closed form."""
    if not h > 0:
        raise ParameterError(f"step h must be positive, got {h}")
    xs = x0 + h * np.arange(k + 1)
    values = np.asarray(f(xs), dtype=np.float64).reshape(-1)
    total = math.fsum((-1) ** (k - r) * math.comb(k, r) * values[r] for r in range(k + 1))
    return total / (math.factorial(k) * h**k)


@dataclass(frozen=True)
class MonteCarloEstimate:
    value: float
    stderr: float
    samples: int

    def __float__(self):
        return self.value


def hermite_genocchi(derivative, nodes, samples=20000, seed=0):
    """Monte Carlo value of the simplex integral for ``[x_0 .. x_k] f``.

    ``derivative`` is the vectorized k-th derivative of f.  Points of the
    simplex are drawn as the gaps of sorted uniforms.
    """
    nodes = np.asarray(nodes, dtype=np.float64)
    k = len(nodes) - 1
    if k < 1:
        raise ParameterError("need at least two nodes")
    if samples < 1000:
        raise ParameterError(f"need at least 1000 samples, got {samples}")
    rng = np.random.default_rng(seed)
    u = np.sort(rng.random((samples, k)), axis=1)
    gaps = np.diff(np.concatenate([np.zeros((samples, 1)), u], axis=1), axis=1)
    points = nodes[0] + gaps @ (nodes[1:] - nodes[0])
    g = np.asarray(derivative(points), dtype=np.float64)
    vol = 1.0 / math.factorial(k)
    return MonteCarloEstimate(float(g.mean() * vol), float(g.std(ddof=1) / math.sqrt(samples) * vol), samples)


@dataclass(frozen=True)
class StencilNeuron:
    """One term ``weight * phi(rho^T z + b)`` of a stencil network."""

    alpha: tuple
    rho: np.ndarray
    weight: float


def check_stencil_width(spec, max_p, h, n):
    """Weights rho = h * phi_n(alpha) must keep |rho^T z| below the radius on the cube."""
    reach = h * max_p * 2 * n
    if not reach < spec.radius:
        raise StencilTooWideError(
            f"stencil reach {reach:.3g} is not inside the smoothness radius {spec.radius:.3g}"
        )


def phi_neurons(spec, p, h):
    """The neurons of ``Phi_{p,h}``, the divided difference of w -> phi(w^T z + b)."""
    p = MultiIndex(p)
    if len(p) % 2:
        raise DimensionError("p indexes real coordinates of C^n and must have even length")
    if not h > 0:
        raise ParameterError(f"step h must be positive, got {h}")
    n = len(p) // 2
    check_stencil_width(spec, max(p) if p else 0, h, n)
    scale = (2.0 * h) ** p.order
    out = []
    for alpha, c in central_stencil(p):
        rho = iso_real_to_complex(h * np.array(alpha, dtype=np.float64))
        out.append(StencilNeuron(alpha, rho, c / scale))
    return out


def h_schedule(radius, n, max_p, floor=H_FLOOR):
    """Initial step ``min(0.1, radius / (2 sqrt(2n) max_p n))`` and its halvings."""
    max_p = max(int(max_p), 1)
    h = min(0.1, radius / (2.0 * math.sqrt(2 * n) * max_p * n))
    out = []
    while h >= floor:
        out.append(h)
        h /= 2.0
    if not out:
        raise ParameterError("initial step is already below the floor")
    return out
