"""Activation functions with closed-form Wirtinger derivatives.

An activation is admissible of order M when every mixed derivative
``d^m dbar^ell phi`` with m, ell <= M is nonzero at a base point b in the
interior of a disk on which phi is smooth.  Each spec records b, the
radius of that disk and, where known, the closed forms.

The closed forms evaluate on numpy arrays as well as on scalar types that
support ``abs``, ``.real`` and ``.conjugate()`` (mpmath numbers included).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import ParameterError, SingularityError
from .wirtinger import default_step, numeric_wirtinger

ADMISSIBILITY_THRESHOLD = 1e-8


@dataclass(frozen=True)
class ActivationSpec:
    name: str
    evaluate: Callable = field(repr=False, compare=False)
    base_point: complex
    radius: float
    ident: str
    analytic_wirt: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __call__(self, z):
        return self.evaluate(z)


def _is_numeric_array(z):
    return isinstance(z, (np.ndarray, list, tuple, int, float, complex, np.number))


def _exp(x):
    if _is_numeric_array(x):
        return np.exp(x)
    import mpmath

    return mpmath.exp(x)


def _where(mask, a, b):
    if isinstance(mask, np.ndarray):
        return np.where(mask, a, b)
    return a if mask else b


# ---------------------------------------------------------------------------
# modReLU


@lru_cache(maxsize=None)
def modrelu_constant(m, ell):
    """Rational constant q_{m,ell} of the closed form, for (m, ell) not in {(0,0), (1,0)}.

    ``q_{1,0} = 1/2`` seeds the ell = 0 chain; for ell >= 1 the chain starts
    at ``q_{0,1} = -1/2``, ``q_{0,ell+1} = -(2 ell + 1)/2 q_{0,ell}``.  Each
    step in m multiplies by ``1/2 - m``.
    """
    if ell == 0:
        if m < 1:
            raise ParameterError("q_{0,0} is not defined")
        q = Fraction(1, 2)
        start = 1
    else:
        q = Fraction(-1, 2)
        for j in range(1, ell):
            q *= -Fraction(2 * j + 1, 2)
        start = 0
    for i in range(start, m):
        q *= Fraction(1, 2) - i
    return q


def modrelu(b=-1.0):
    """modReLU ``z -> (|z| + b) z/|z|`` where ``|z| + b >= 0``, else 0 (b < 0)."""
    b = float(b)
    if not b < 0:
        raise ParameterError(f"modReLU needs a negative bias, got {b}")

    def evaluate(z):
        if _is_numeric_array(z):
            z = np.asarray(z, dtype=np.complex128)
            r = np.abs(z)
            active = r + b >= 0
            safe = np.where(active, r, 1.0)
            return np.where(active, (r + b) * z / safe, 0.0)
        r = abs(z)
        return (r + b) * z / r if r + b >= 0 else 0 * z

    def analytic(m, ell, z):
        if (m, ell) == (0, 0):
            return evaluate(z)
        r = abs(z)
        active = r + b > 0
        safe = _where(active, r, 1.0)
        if (m, ell) == (1, 0):
            val = 1 + b / (2 * safe)
        else:
            q = float(modrelu_constant(m, ell))
            if ell >= 1 and m <= ell + 1:
                val = b * q * z ** (ell - m + 1) / safe ** (2 * ell + 1)
            else:
                val = b * q * z.conjugate() ** (m - ell - 1) / safe ** (2 * m - 1)
        return _where(active, val, 0 * z)

    ident = f"modrelu:{b!r}"
    return ActivationSpec(f"modReLU(b={b!r})", evaluate, complex(-2.0 * b), -b / 2.0, ident, analytic)


# ---------------------------------------------------------------------------
# cardioid


@lru_cache(maxsize=None)
def cardioid_constants(m, ell):
    """Rational pair (a, b) of the cardioid closed form for (m, ell) != (0, 0)."""
    if (m, ell) == (0, 0):
        raise ParameterError("the (0, 0) term has no constants")
    half = Fraction(1, 2)
    if ell == 0:
        a, c = Fraction(1, 8), Fraction(3, 8)
        if m == 1:
            return a, c
        # d of (1,0) = 1/2 + a zbar/|z| + c z/|z|
        a *= -half
        c *= half
        for k in range(2, m):
            a *= -Fraction(2 * k - 1, 2)
            c *= -Fraction(2 * k - 3, 2)
        return a, c
    a, c = Fraction(1, 8), Fraction(-1, 8)
    for j in range(1, ell):
        a *= -Fraction(2 * j - 1, 2)
        c *= -Fraction(2 * j + 1, 2)
    for i in range(min(m, ell)):
        a *= half - i
        c *= Fraction(3, 2) - i
    if m <= ell:
        return a, c
    a *= -Fraction(2 * ell - 1, 2)
    c *= Fraction(3, 2) - ell
    if m == ell + 1:
        return a, c
    a *= -Fraction(2 * ell + 1, 2)
    c *= 1 - Fraction(2 * ell + 1, 2)
    for k in range(ell + 2, m):
        a *= -Fraction(2 * k - 1, 2)
        c *= -Fraction(2 * k - 3, 2)
    return a, c


def cardioid():
    """``z -> (1 + Re z/|z|) z / 2``, extended by 0 at the origin."""

    def evaluate(z):
        if _is_numeric_array(z):
            z = np.asarray(z, dtype=np.complex128)
            r = np.abs(z)
            safe = np.where(r > 0, r, 1.0)
            return np.where(r > 0, 0.5 * (1.0 + z.real / safe) * z, 0.0)
        r = abs(z)
        return (1 + z.real / r) * z / 2 if r != 0 else 0 * z

    def analytic(m, ell, z):
        r = abs(z)
        if np.any(np.asarray(r == 0)):
            raise SingularityError("cardioid derivatives are singular at the origin")
        zb = z.conjugate()
        if (m, ell) == (0, 0):
            return z / 2 + z**2 / (4 * r) + r / 4
        a, c = (float(v) for v in cardioid_constants(m, ell))
        if m <= ell:
            return a * z ** (ell - m) / r ** (2 * ell - 1) + c * z ** (ell + 2 - m) / r ** (2 * ell + 1)
        if (m, ell) == (1, 0):
            return 0.5 + a * zb / r + c * z / r
        if m == ell + 1:
            return (a * zb + c * z) / r ** (2 * ell + 1)
        return a * zb ** (m - ell) / r ** (2 * m - 1) + c * zb ** (m - ell - 2) / r ** (2 * m - 3)

    return ActivationSpec("cardioid", evaluate, complex(math.cos(math.pi / 4), math.sin(math.pi / 4)), 0.5, "cardioid", analytic)


# ---------------------------------------------------------------------------
# functions of the real part


@lru_cache(maxsize=None)
def _logistic_poly(order):
    """Integer coefficients c with rho^(order) = sum_i c_i rho^i."""
    coeffs = [0, 1]
    for _ in range(order):
        deriv = [i * coeffs[i] for i in range(1, len(coeffs))]
        # multiply by s (1 - s)
        out = [0] * (len(deriv) + 2)
        for i, c in enumerate(deriv):
            out[i + 1] += c
            out[i + 2] -= c
        coeffs = out
    return tuple(coeffs)


def logistic_derivative(order, x):
    s = 1 / (1 + _exp(-x))
    acc = 0 * s
    for c in reversed(_logistic_poly(order)):
        acc = acc * s + c
    return acc


def sigmoid_re():
    """``z -> 1 / (1 + exp(-Re z))``."""

    def evaluate(z):
        if _is_numeric_array(z):
            z = np.asarray(z, dtype=np.complex128)
        return logistic_derivative(0, z.real) + 0j

    def analytic(m, ell, z):
        k = m + ell
        return logistic_derivative(k, z.real) / 2**k + 0j

    return ActivationSpec("sigmoid(Re z)", evaluate, complex(0.1), math.inf, "sigmoid-re", analytic)


def exp_re():
    """``z -> exp(Re z)``."""

    def evaluate(z):
        if _is_numeric_array(z):
            z = np.asarray(z, dtype=np.complex128)
        return _exp(z.real) + 0j

    def analytic(m, ell, z):
        return evaluate(z) / 2 ** (m + ell)

    return ActivationSpec("exp(Re z)", evaluate, 0j, math.inf, "exp-re", analytic)


def holomorphic_id():
    """The identity; holomorphic, so every dbar derivative vanishes."""

    def evaluate(z):
        if _is_numeric_array(z):
            return np.asarray(z, dtype=np.complex128)
        return z

    return ActivationSpec("identity", evaluate, 0j, 1.0, "holomorphic-id", None)


def parse_activation(ident):
    """Build a spec from an identifier such as ``modrelu:-1`` or ``exp-re``."""
    ident = ident.strip()
    if ident.startswith("modrelu:"):
        try:
            b = float(ident.split(":", 1)[1])
        except ValueError:
            raise ParameterError(f"bad modReLU bias in {ident!r}")
        return modrelu(b)
    table = {
        "cardioid": cardioid,
        "sigmoid-re": sigmoid_re,
        "exp-re": exp_re,
        "holomorphic-id": holomorphic_id,
    }
    if ident not in table:
        raise ParameterError(f"unknown activation {ident!r}")
    return table[ident]()


# ---------------------------------------------------------------------------
# admissibility


def numeric_step(spec, M):
    if math.isfinite(spec.radius):
        return spec.radius / (8.0 * (M + 1))
    return default_step(2 * M)


def wirtinger_at_base(spec, m, ell, M=None):
    """``d^m dbar^ell phi(b)`` and the method used to obtain it."""
    if spec.analytic_wirt is not None:
        return complex(spec.analytic_wirt(m, ell, spec.base_point)), "analytic"
    M = max(m, ell) if M is None else M
    step = numeric_step(spec, M)
    return complex(numeric_wirtinger(spec.evaluate, m, ell, spec.base_point, step)), "numeric"


@dataclass(frozen=True)
class AdmissibilityReport:
    M: int
    base_point: complex
    min_modulus: float
    verdict: str
    method: str
    table: dict = field(repr=False)

    @property
    def admissible(self):
        return self.verdict == "admissible"


def check_admissibility(spec, M):
    """Check that all derivatives with m, ell <= M are nonzero at the base point."""
    if M < 1:
        raise ParameterError(f"order must be at least 1, got {M}")
    if spec.analytic_wirt is None and M > 4:
        raise ParameterError("numeric admissibility checks are limited to order 4")
    table = {}
    method = "analytic"
    for m in range(M + 1):
        for ell in range(M + 1):
            value, method = wirtinger_at_base(spec, m, ell, M)
            mod = abs(value)
            table[(m, ell)] = mod if math.isfinite(mod) else 0.0
    smallest = min(table.values())
    verdict = "admissible" if smallest > ADMISSIBILITY_THRESHOLD else "rejected"
    return AdmissibilityReport(M, complex(spec.base_point), float(smallest), verdict, method, table)
