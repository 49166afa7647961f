import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cvnn_approx.core import (
    ComplexCubeGrid,
    MultiIndex,
    cube_grid,
    dominated,
    iso_complex_to_real,
    iso_real_to_complex,
    multiindex_binomial,
    sup_norm_diff,
    unit,
)
from cvnn_approx.errors import DimensionError, DomainError, EvaluationError, ParameterError

indices = st.lists(st.integers(0, 5), min_size=1, max_size=4)


def test_multiindex_basics():
    p = MultiIndex((1, 2, 0))
    assert p.order == 3
    assert p + MultiIndex((1, 0, 1)) == (2, 2, 1)
    assert unit(3, 1) == (0, 1, 0)
    assert MultiIndex((0, 1)).leq((1, 1))
    assert not MultiIndex((2, 1)).leq((1, 1))


@pytest.mark.parametrize("bad", [(-1,), (1.5,), ("a",)])
def test_multiindex_rejects(bad):
    with pytest.raises(DomainError):
        MultiIndex(bad)


def test_multiindex_length_mismatch():
    with pytest.raises(DimensionError):
        MultiIndex((1,)).leq((1, 2))


def test_binomial_values():
    assert multiindex_binomial((3, 2), (1, 1)) == 6
    assert multiindex_binomial((4,), (2,)) == 6
    with pytest.raises(DomainError):
        multiindex_binomial((1,), (2,))


@given(indices)
def test_binomials_sum_to_power_of_two(p):
    total = sum(multiindex_binomial(p, r) for r in dominated(p))
    assert total == 2 ** sum(p)


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=4))
def test_iso_round_trip(values):
    z = np.array(values) + 1j * np.array(values[::-1])
    x = iso_complex_to_real(z)
    assert x.shape == (2 * len(values),)
    np.testing.assert_array_equal(iso_real_to_complex(x), z)


def test_iso_layout():
    # real parts first, imaginary parts after
    np.testing.assert_array_equal(iso_complex_to_real(np.array([1 + 2j, 3 + 4j])), [1, 3, 2, 4])
    with pytest.raises(DimensionError):
        iso_real_to_complex(np.zeros(3))


def test_cube_grid():
    g = cube_grid(2, 3)
    assert g.shape == (9, 2)
    assert g.min() == -1 and g.max() == 1
    with pytest.raises(ParameterError):
        cube_grid(1, 1)


def test_complex_grid_default():
    grid = ComplexCubeGrid(1, 33)
    nodes = grid.nodes()
    assert nodes.shape == (33 * 33, 1)
    assert grid.size == 33 * 33
    assert np.isclose(np.abs(nodes.real).max(), 1) and np.isclose(np.abs(nodes.imag).max(), 1)


def test_sup_norm_diff():
    f = lambda z: z[:, 0] ** 2
    assert sup_norm_diff(f, None, n=1) == pytest.approx(2.0)
    assert sup_norm_diff(f, f, n=1) == 0.0


def test_sup_norm_diff_nonfinite():
    f = lambda z: 1.0 / (z[:, 0] - z[0, 0])
    with np.errstate(divide="ignore", invalid="ignore"), pytest.raises(EvaluationError):
        sup_norm_diff(f, None, n=1)
