import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvnn_approx.errors import BudgetError, ParameterError
from cvnn_approx.trig import (
    TrigPolyCoeffs,
    chebyshev_approximant,
    chebyshev_bound_constant,
    chebyshev_functionals,
    chebyshev_monomials,
    dirichlet,
    fejer,
    l1_norm,
    star_fourier_coefficients,
    vallee_poussin,
    vallee_poussin_weight,
    vm_apply,
)


def test_vallee_poussin_profile():
    v = vallee_poussin(2)
    assert [v.get((k,)) for k in range(4)] == [1, 1, 1, 0.5]
    assert v.get((-3,)) == 0.5 and v.get((4,)) == 0


def test_v1_is_d1():
    assert vallee_poussin(1).coeffs == dirichlet(1).coeffs


def test_fejer_profile():
    f = fejer(3)
    assert [f.get((k,)) for k in range(-3, 4)] == [0, 1 / 3, 2 / 3, 1, 2 / 3, 1 / 3, 0]


@pytest.mark.parametrize("m", [1, 2, 5, 8])
def test_norms(m):
    assert l1_norm(fejer(m)) == pytest.approx(1.0, abs=1e-6)
    assert l1_norm(vallee_poussin(m)) <= 3 + 1e-6
    assert l1_norm(vallee_poussin(m, 2)) <= 9 + 1e-6


def test_dirichlet_norm_grows():
    assert l1_norm(dirichlet(8)) > l1_norm(dirichlet(2)) > 1


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.lists(st.integers(-5, 5), min_size=1, max_size=2))
def test_vm_reproduces_low_degree(m, k):
    k = tuple(k)
    if max(abs(v) for v in k) > m:
        assert vallee_poussin_weight(m, k) < 1
        return
    t = TrigPolyCoeffs(len(k), {k: 1.0})
    assert vm_apply(t, m).coeffs == {k: 1.0}


def test_trig_eval():
    t = TrigPolyCoeffs(1, {(1,): 0.5, (-1,): 0.5})
    np.testing.assert_allclose(t(np.array([[0.0], [np.pi / 3]])).real, [1.0, 0.5])


def test_star_coefficients_of_cosine_image():
    # f(x) = 2x^2 - 1 gives f*(t) = cos 2t
    c = star_fourier_coefficients(lambda x: 2 * x[:, 0] ** 2 - 1, 1, 3)
    assert c.get((2,)) == pytest.approx(0.5)
    assert c.get((-2,)) == pytest.approx(0.5)
    assert abs(c.get((1,))) < 1e-14


def test_quadrature_guards():
    with pytest.raises(ParameterError):
        star_fourier_coefficients(lambda x: x[:, 0], 1, 10, quad_points=8)
    with pytest.raises(BudgetError):
        star_fourier_coefficients(lambda x: x[:, 0], 5, 1)


def T(k, x):
    return np.cos(k * np.arccos(np.clip(x, -1, 1)))


def test_chebyshev_functional_recovers_T2():
    e = chebyshev_functionals(lambda x: T(2, x[:, 0]), 2, 2)
    assert e.coeffs[2, 0] == pytest.approx(1.0)
    assert np.abs(e.coeffs).sum() == pytest.approx(1.0)


def test_chebyshev_functional_halves_T3_at_m2():
    # degree 3 lies on the slope of the m = 2 trapezoid
    e = chebyshev_functionals(lambda x: T(3, x[:, 0]), 1, 2)
    assert e.coeffs[3] == pytest.approx(0.5)


@settings(max_examples=15, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_functionals_linear(a, b):
    f = lambda x: np.exp(x[:, 0]) * x[:, 1]
    g = lambda x: np.sin(3 * x[:, 0] + x[:, 1])
    h = lambda x: a * f(x) + b * g(x)
    lhs = chebyshev_functionals(h, 2, 3).coeffs
    rhs = a * chebyshev_functionals(f, 2, 3).coeffs + b * chebyshev_functionals(g, 2, 3).coeffs
    np.testing.assert_allclose(lhs, rhs, atol=1e-12 * (1 + abs(a) + abs(b)))


def test_approximant_reproduces_polynomials():
    f = lambda x: x[:, 0] ** 2 * x[:, 1] - x[:, 1] + 0.5
    e = chebyshev_functionals(f, 2, 3)
    x = np.random.default_rng(0).uniform(-1, 1, (50, 2))
    np.testing.assert_allclose(chebyshev_approximant(e)(x), f(x), atol=1e-12)


def test_approximant_error_decreases():
    f = lambda x: np.exp(-x[:, 0] ** 2) * np.cos(x[:, 1])
    x = np.random.default_rng(1).uniform(-1, 1, (200, 2))
    errs = [np.abs(chebyshev_approximant(chebyshev_functionals(f, 2, m))(x) - f(x)).max() for m in (1, 2, 4)]
    assert errs[0] > errs[1] > errs[2]


def test_bound_constant():
    assert chebyshev_bound_constant(1, 4) == pytest.approx(2 * 2**0.5 * 2)
    assert chebyshev_bound_constant(2, 1) == pytest.approx(8)


def test_chebyshev_monomials():
    rows = chebyshev_monomials(4)
    assert rows[2] == [-1, 0, 2, 0, 0]
    assert rows[3] == [0, -3, 0, 4, 0]
    assert rows[4] == [1, 0, -8, 0, 8]
