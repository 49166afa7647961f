import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvnn_approx.activations import cardioid, exp_re
from cvnn_approx.divided_differences import (
    central_stencil,
    check_stencil_width,
    divided_difference,
    divided_difference_table,
    equidistant_divided_difference,
    h_schedule,
    hermite_genocchi,
    phi_neurons,
)
from cvnn_approx.errors import DegeneracyError, ParameterError, StencilTooWideError


def test_stencil_first_and_second_order():
    assert sorted(central_stencil((1,))) == [((-1,), -1), ((1,), 1)]
    assert sorted(central_stencil((2,))) == [((-2,), 1), ((0,), -2), ((2,), 1)]


def test_stencil_tensor_product():
    st2 = dict(central_stencil((1, 1)))
    assert st2 == {(-1, -1): 1, (-1, 1): -1, (1, -1): -1, (1, 1): 1}


@given(st.lists(st.integers(0, 4), min_size=1, max_size=3))
def test_stencil_weights_sum(p):
    weights = [c for _, c in central_stencil(p)]
    assert sum(abs(c) for c in weights) == 2 ** sum(p)
    assert sum(weights) == (1 if sum(p) == 0 else 0)


def test_divided_difference_exact_on_polynomials():
    # degree |p| polynomials are differentiated exactly
    f = lambda x: x[:, 0] ** 3 + x[:, 0] ** 2 * x[:, 1]
    assert divided_difference(f, (3, 0), 0.1) == pytest.approx(6.0, abs=1e-9)
    assert divided_difference(f, (2, 1), 0.3) == pytest.approx(2.0, abs=1e-9)


def test_divided_difference_rejects_bad_step():
    with pytest.raises(ParameterError):
        divided_difference(lambda x: x[:, 0], (1,), 0.0)


def test_table_matches_closed_form():
    xs = 0.2 + 0.1 * np.arange(5)
    table = divided_difference_table(xs, np.sin(xs))
    for k in range(5):
        assert table[k][0] == pytest.approx(equidistant_divided_difference(np.sin, 0.2, 0.1, k), rel=1e-9)


def test_table_degenerate():
    with pytest.raises(DegeneracyError):
        divided_difference_table([0.0, 0.0], [1.0, 1.0])


def test_table_symmetric_in_nodes():
    xs = np.array([0.0, 0.3, 0.5, 0.9])
    f = np.exp
    a = divided_difference_table(xs, f(xs))[3][0]
    perm = xs[[2, 0, 3, 1]]
    b = divided_difference_table(perm, f(perm))[3][0]
    assert a == pytest.approx(b, rel=1e-12)


def test_hermite_genocchi_exp():
    nodes = [0.0, 0.4, 1.0]
    mc = hermite_genocchi(np.exp, nodes, samples=40000, seed=3)
    exact = divided_difference_table(np.array(nodes), np.exp(nodes))[2][0]
    assert abs(mc.value - exact) < 4 * mc.stderr
    with pytest.raises(ParameterError):
        hermite_genocchi(np.exp, nodes, samples=10)


def test_phi_neurons_count_and_width():
    neurons = phi_neurons(exp_re(), (1, 1), 0.1)
    assert len(neurons) == 4
    assert all(abs(nn.weight) == pytest.approx(1 / 0.04) for nn in neurons)
    with pytest.raises(StencilTooWideError):
        check_stencil_width(cardioid(), 4, 0.1, 1)


def test_h_schedule_halves():
    hs = h_schedule(math.inf, 1, 2)
    assert hs[0] == 0.1
    assert all(b == a / 2 for a, b in zip(hs, hs[1:]))
    assert hs[-1] >= 1e-4
