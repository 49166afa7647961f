"""Built-in target functions on the complex cube.

Each target takes points of shape (N, n) and returns N complex values.
For n > 1 the coordinatewise definitions are summed (``conj``, ``resq``)
or multiplied (``wave``); ``gauss`` uses the full norm.
"""

import numpy as np

from .errors import ParameterError


def _points(z):
    return np.atleast_2d(np.asarray(z, dtype=np.complex128))


def zero(z):
    return np.zeros(_points(z).shape[0], dtype=np.complex128)


def conj(z):
    return np.conj(_points(z)).sum(axis=1)


def resq(z):
    return (_points(z).real ** 2).sum(axis=1) + 0j


def gauss(z):
    z = _points(z)
    return np.exp(-(np.abs(z) ** 2).sum(axis=1)) + 0j


def wave(z):
    z = _points(z)
    return np.prod(z.real * np.cos(np.pi * z.imag), axis=1) + 0j


TARGETS = {
    "zero": zero,
    "conj": conj,
    "resq": resq,
    "gauss": gauss,
    "wave": wave,
}


def get_target(name):
    try:
        return TARGETS[name]
    except KeyError:
        raise ParameterError(f"unknown target {name!r}; choose from {', '.join(TARGETS)}")
