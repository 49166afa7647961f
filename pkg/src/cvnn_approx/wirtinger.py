"""Wirtinger derivatives expressed through real partial derivatives.

With ``z_j = x_j + i y_j`` the operators are

    d_j    = (d/dx_j - i d/dy_j) / 2,
    dbar_j = (d/dx_j + i d/dy_j) / 2,

and in real multi-index notation the x-part of coordinate j is index j
and the y-part is index n + j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import MultiIndex, unit
from .errors import DimensionError, ParameterError

_HALF = Fraction(1, 2)


def _gauss_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


@dataclass(frozen=True)
class WirtingerExpansion:
    """Coefficients b_p with ``d^m dbar^ell = sum_p b_p d^p`` (real partials).

    ``exact`` maps p to a pair of Fractions (real, imaginary part);
    ``path_mass`` is the sum of the moduli of every contribution produced
    by the recursion before like terms are merged.  It equals 1.
    """

    m: MultiIndex
    ell: MultiIndex
    exact: dict = field(repr=False)
    path_mass: Fraction = Fraction(1)

    @property
    def n(self):
        return len(self.m)

    @property
    def order(self):
        return self.m.order + self.ell.order

    @property
    def terms(self):
        """p -> complex coefficient, with |b_p| < 1e-15 pruned."""
        out = {}
        for p, (re, im) in self.exact.items():
            c = complex(float(re), float(im))
            if abs(c) >= 1e-15:
                out[p] = c
        return out

    def items(self):
        return sorted(self.terms.items())


def wirtinger_expansion(m, ell):
    """Expand ``d^m dbar^ell`` into real partial derivatives.

    Each dbar_j step sends ``b d^p`` to ``b/2 d^(p+e_j) + i b/2 d^(p+e_{n+j})``
    and each d_j step uses ``-i b/2`` for the second term.
    """
    m = MultiIndex(m)
    ell = MultiIndex(ell)
    if len(m) != len(ell):
        raise DimensionError(f"m and ell have different lengths ({len(m)} and {len(ell)})")
    n = len(m)
    origin = MultiIndex((0,) * (2 * n))
    terms = {origin: (Fraction(1), Fraction(0))}
    # mass[p]: total modulus of the unmerged contributions that landed on p
    mass = {origin: Fraction(1)}
    steps = []
    for j in range(n):
        steps += [(j, +1)] * ell[j]
        steps += [(j, -1)] * m[j]
    for j, sign in steps:
        ex = unit(2 * n, j)
        ey = unit(2 * n, n + j)
        new = {}
        new_mass = {}
        for p, (re, im) in terms.items():
            half = (re * _HALF, im * _HALF)
            # multiply by +-i: (a + ib) * i = -b + ia
            rot = (-half[1] * sign, half[0] * sign)
            q = p + ex
            new[q] = _gauss_add(new.get(q, (Fraction(0), Fraction(0))), half)
            q = p + ey
            new[q] = _gauss_add(new.get(q, (Fraction(0), Fraction(0))), rot)
            for q in (p + ex, p + ey):
                new_mass[q] = new_mass.get(q, Fraction(0)) + mass[p] * _HALF
        terms = new
        mass = new_mass
    return WirtingerExpansion(m, ell, terms, sum(mass.values()))


def default_step(order):
    if order <= 2:
        return 1e-3
    if order <= 4:
        return 1e-2
    return 5e-2


def _as_index(v, n):
    if isinstance(v, (int, np.integer)):
        v = (int(v),)
    v = MultiIndex(v)
    if len(v) != n:
        raise DimensionError(f"multi-index has length {len(v)}, expected {n}")
    return v


def numeric_wirtinger(f, m, ell, z, step=None, vectorized=None):
    """Central difference estimate of ``d^m dbar^ell f`` at ``z``.

    The real partials come from the central stencil with nodes at
    ``z + step * (j + i k)``, so the error is O(step^2).

    ``f`` may be vectorized (takes a complex array of shape (K, n) and
    returns K values) or scalar.  When ``z`` is a numpy-compatible number
    the vectorized form is tried first.  Non-float scalars such as mpmath
    numbers are passed straight through, so the same routine works in
    extended precision.
    """
    from .divided_differences import central_stencil

    scalar_input = not hasattr(z, "__len__")
    if scalar_input:
        n = 1
        point = [z]
    else:
        point = list(z)
        n = len(point)
    m = _as_index(m, n)
    ell = _as_index(ell, n)
    order = m.order + ell.order
    if step is None:
        step = default_step(order)
    if not step > 0:
        raise ParameterError(f"step must be positive, got {step}")
    expansion = wirtinger_expansion(m, ell)
    if order == 0:
        return _call(f, [tuple(point)], scalar_input, vectorized)[0]

    # merge the stencils of all p into one weight per integer offset;
    # every p has |p| = order so a single (2h)^-order factor remains
    weights = {}
    for p, (bre, bim) in expansion.exact.items():
        if bre == 0 and bim == 0:
            continue
        for alpha, c in central_stencil(p):
            w = weights.get(alpha, (Fraction(0), Fraction(0)))
            weights[alpha] = (w[0] + bre * c, w[1] + bim * c)
    offsets = sorted(a for a, w in weights.items() if w != (0, 0))
    nodes = []
    for alpha in offsets:
        nodes.append(tuple(point[t] + step * complex(alpha[t], alpha[n + t]) for t in range(n)))
    values = _call(f, nodes, scalar_input, vectorized)
    generic = any(not isinstance(v, (float, complex, np.floating, np.complexfloating)) for v in values)
    scale = (2 * step) ** order
    if generic:
        acc = 0
        for alpha, v in zip(offsets, values):
            wr, wi = weights[alpha]
            acc += v * complex(float(wr), float(wi))
        return acc / scale
    vals = np.asarray(values, dtype=np.complex128)
    re_terms = []
    im_terms = []
    for alpha, v in zip(offsets, vals):
        wr, wi = weights[alpha]
        wr = float(wr)
        wi = float(wi)
        re_terms += [wr * v.real, -wi * v.imag]
        im_terms += [wr * v.imag, wi * v.real]
    return complex(math.fsum(re_terms), math.fsum(im_terms)) / scale


def _call(f, nodes, scalar_input, vectorized):
    if vectorized is None:
        vectorized = all(
            isinstance(c, (int, float, complex, np.number)) for node in nodes for c in node
        )
    if vectorized:
        arr = np.array(nodes, dtype=np.complex128)
        out = np.asarray(f(arr[:, 0] if scalar_input else arr)).reshape(-1)
        if out.shape[0] != len(nodes):
            raise DimensionError("vectorized function returned the wrong number of values")
        return list(out)
    if scalar_input:
        return [f(node[0]) for node in nodes]
    return [f(node) for node in nodes]
