import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvnn_approx.wirtinger import default_step, numeric_wirtinger, wirtinger_expansion


def test_first_order_expansions():
    d = wirtinger_expansion((1,), (0,)).items()
    assert d == [((0, 1), -0.5j), ((1, 0), 0.5)]
    db = wirtinger_expansion((0,), (1,)).items()
    assert db == [((0, 1), 0.5j), ((1, 0), 0.5)]


def test_laplacian_quarter():
    # d dbar = Laplacian / 4
    e = wirtinger_expansion((1,), (1,))
    assert e.items() == [((0, 2), 0.25), ((2, 0), 0.25)]
    assert e.path_mass == 1


def test_second_holomorphic():
    e = dict(wirtinger_expansion((2,), (0,)).items())
    assert e == {(2, 0): 0.25, (1, 1): -0.5j, (0, 2): -0.25}


def test_two_variables_pair_coordinates():
    # coordinate j pairs x_j with y_j at real index n + j
    e = dict(wirtinger_expansion((0, 1), (0, 0)).items())
    assert e == {(0, 1, 0, 0): 0.5, (0, 0, 0, 1): -0.5j}


@given(st.integers(0, 4), st.integers(0, 4))
def test_path_mass_is_one(m, ell):
    e = wirtinger_expansion((m,), (ell,))
    assert e.path_mass == 1
    assert sum(abs(c) for _, c in e.items()) <= 1 + 1e-12
    assert all(sum(p) == m + ell for p, _ in e.items())


def test_default_steps():
    assert default_step(2) == 1e-3
    assert default_step(4) == 1e-2


def test_numeric_on_monomials():
    z0 = 0.3 - 0.2j
    f = lambda z: z**2 * np.conj(z)
    # d(z^2 zbar) = 2 z zbar, dbar = z^2, d dbar = 2 z; truncation is step^2
    assert abs(numeric_wirtinger(f, 1, 0, z0) - 2 * z0 * np.conj(z0)) < 1e-5
    assert abs(numeric_wirtinger(f, 0, 1, z0) - z0**2) < 1e-5
    assert abs(numeric_wirtinger(f, 1, 1, z0) - 2 * z0) < 1e-5


def test_numeric_multivariate():
    f = lambda z: z[:, 0] * np.conj(z[:, 1])
    val = numeric_wirtinger(f, (1, 0), (0, 1), np.array([0.1 + 0.1j, 0.2j]))
    assert abs(val - 1) < 1e-6


def test_numeric_mpmath():
    mpmath.mp.dps = 30
    f = lambda z: mpmath.exp(z.real) * z
    val = numeric_wirtinger(f, 1, 1, mpmath.mpc("0.2", "0.1"), step=mpmath.mpf("1e-8"))
    # f = e^x z, d dbar f = e^x (z/4 + 1/2)
    z = complex(0.2, 0.1)
    assert abs(complex(val) - np.exp(0.2) * (z / 4 + 0.5)) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
def test_conjugation_swaps_orders(m, ell, x, y):
    f = lambda z: np.exp(z) * z**2 + np.conj(z) ** 3
    g = lambda z: np.conj(f(z))
    z0 = complex(x, y)
    a = numeric_wirtinger(g, m, ell, z0)
    b = np.conj(numeric_wirtinger(f, ell, m, z0))
    assert abs(a - b) <= 1e-6 * (1 + abs(b))


@settings(max_examples=20, deadline=None)
@given(st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=2))
def test_numeric_is_linear(a, b):
    f = lambda z: np.exp(z.real) * z
    g = lambda z: np.conj(z) ** 2
    h = lambda z: a * f(z) + b * g(z)
    z0 = 0.1 + 0.3j
    lhs = numeric_wirtinger(h, 1, 1, z0)
    rhs = a * numeric_wirtinger(f, 1, 1, z0) + b * numeric_wirtinger(g, 1, 1, z0)
    assert abs(lhs - rhs) <= 1e-8 * (1 + abs(lhs))
