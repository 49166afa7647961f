"""Multi-indices, the identification of C^n with R^2n, and grids on the cube."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, EvaluationError, ParameterError

MAX_ORDER = 64


class MultiIndex(tuple):
    """An immutable tuple of non-negative integers.

    Ordering with ``<`` and friends stays lexicographic (as for tuples) so
    that multi-indices sort canonically; use :meth:`leq` for the
    componentwise partial order.
    """

    def __new__(cls, entries=()):
        entries = tuple(entries)
        for e in entries:
            if isinstance(e, bool) or not isinstance(e, (int, np.integer)):
                raise DomainError(f"multi-index entries must be integers, got {e!r}")
            if e < 0:
                raise DomainError(f"multi-index entries must be non-negative, got {e}")
        return super().__new__(cls, (int(e) for e in entries))

    @property
    def order(self):
        return sum(self)

    def leq(self, other):
        other = tuple(other)
        if len(other) != len(self):
            raise DimensionError(f"cannot compare multi-indices of lengths {len(self)} and {len(other)}")
        return all(a <= b for a, b in zip(self, other))

    def __add__(self, other):
        other = tuple(other)
        if len(other) != len(self):
            raise DimensionError("multi-index lengths differ")
        return MultiIndex(a + b for a, b in zip(self, other))

    def __repr__(self):
        return f"MultiIndex({tuple(self)})"


def unit(n, j):
    """The j-th unit multi-index of length n."""
    return MultiIndex(1 if t == j else 0 for t in range(n))


def dominated(p):
    """All r with 0 <= r <= p componentwise, in lexicographic order."""
    return [MultiIndex(r) for r in itertools.product(*(range(e + 1) for e in p))]


def multiindex_binomial(p, r):
    """Product of binomial coefficients ``prod_j C(p_j, r_j)``."""
    p = MultiIndex(p)
    r = MultiIndex(r)
    if len(p) != len(r):
        raise DimensionError(f"multi-index lengths differ: {len(p)} vs {len(r)}")
    if p.order > MAX_ORDER:
        raise ParameterError(f"order {p.order} exceeds the supported maximum {MAX_ORDER}")
    if not r.leq(p):
        raise DomainError(f"{tuple(r)} is not dominated by {tuple(p)}")
    out = 1
    for a, b in zip(p, r):
        out *= math.comb(a, b)
    return out


def iso_real_to_complex(x):
    """Map (x_1..x_n, y_1..y_n) to (x_1 + i y_1, ..., x_n + i y_n).

    Works on a single vector or on an array with points along axis 0.
    """
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[-1]
    if d % 2:
        raise DimensionError(f"real vector must have even length, got {d}")
    n = d // 2
    return x[..., :n] + 1j * x[..., n:]


def iso_complex_to_real(z):
    """Inverse of :func:`iso_real_to_complex`."""
    z = np.asarray(z, dtype=np.complex128)
    return np.concatenate([z.real, z.imag], axis=-1)


def cube_grid(s, points_per_axis):
    """Uniform tensor grid on [-1, 1]^s, corners included, shape (P^s, s)."""
    if s < 1:
        raise DimensionError("dimension must be at least 1")
    if points_per_axis < 2:
        raise ParameterError("need at least two points per axis")
    axis = np.linspace(-1.0, 1.0, points_per_axis)
    mesh = np.meshgrid(*([axis] * s), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=-1)


def default_points_per_axis(n):
    return 33 if n == 1 else 9


@dataclass(frozen=True)
class ComplexCubeGrid:
    """Uniform grid on the complex cube of dimension n.

    Real and imaginary parts of every coordinate range over [-1, 1].
    """

    n: int
    points_per_axis: int

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("n must be at least 1")
        if self.points_per_axis < 2:
            raise ParameterError("need at least two points per axis")

    @property
    def size(self):
        return self.points_per_axis ** (2 * self.n)

    def real_nodes(self):
        return cube_grid(2 * self.n, self.points_per_axis)

    def nodes(self):
        """Complex nodes, shape (size, n)."""
        return iso_real_to_complex(self.real_nodes())


def default_grid(n):
    return ComplexCubeGrid(n, default_points_per_axis(n))


def _finite_or_raise(values, nodes, label):
    values = np.asarray(values)
    bad = ~np.isfinite(values)
    if bad.any():
        idx = int(np.flatnonzero(bad.ravel())[0])
        raise EvaluationError(f"{label} is not finite at node {nodes[idx]}", node=nodes[idx])


def sup_norm_diff(f, g, grid=None, n=None):
    """Maximum of |f - g| over the nodes of ``grid``.

    ``f`` and ``g`` are vectorized: they receive complex nodes of shape
    (N, n) and return N values.  Either may be ``None`` for the zero function.
    """
    if grid is None:
        if n is None:
            raise DimensionError("either grid or n is required")
        grid = default_grid(n)
    nodes = grid.nodes()
    fv = np.zeros(len(nodes)) if f is None else np.asarray(f(nodes)).reshape(-1)
    gv = np.zeros(len(nodes)) if g is None else np.asarray(g(nodes)).reshape(-1)
    if fv.shape[0] != len(nodes) or gv.shape[0] != len(nodes):
        raise DimensionError("function output does not match the number of nodes")
    _finite_or_raise(fv, nodes, "f")
    _finite_or_raise(gv, nodes, "g")
    return float(np.max(np.abs(fv - gv)))
