import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cvnn_approx import _kernels
from cvnn_approx.errors import ParameterError

numba_only = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba unavailable")
finite = st.floats(-1e3, 1e3, allow_nan=False)


@numba_only
@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 9), st.just(4)), elements=finite))
def test_rowsum_backends_agree(raw):
    values = raw[..., 0] + 1j * raw[..., 1]
    weights = raw[0, :, 2] + 1j * raw[0, :, 3]
    a = _kernels.weighted_rowsum_numpy(values, weights)
    b = _kernels.weighted_rowsum_numba(values, weights)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-9)


def test_rowsum_compensation():
    # a naive sum loses the small terms entirely
    values = np.array([[1e16, 1.0, -1e16, 1.0]], dtype=np.complex128)
    out = _kernels.weighted_rowsum_numpy(values, np.ones(4))
    assert out[0] == 2.0
    if _kernels.HAVE_NUMBA:
        assert _kernels.weighted_rowsum_numba(values, np.ones(4))[0] == 2.0


@numba_only
@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 7)), elements=finite), st.integers(1, 5))
def test_contract_backends_agree(values, kk):
    matrix = np.cos(np.outer(np.arange(kk), np.arange(values.shape[1])))
    np.testing.assert_allclose(
        _kernels.contract_last_numpy(values, matrix), _kernels.contract_last_numba(values, matrix), rtol=1e-12, atol=1e-9
    )


@numba_only
def test_chebyshev_table_backends_agree():
    x = np.linspace(-1, 1, 41)
    a = _kernels.chebyshev_table_numpy(x, 9)
    b = _kernels.chebyshev_table_numba(x, 9)
    np.testing.assert_array_equal(a, b)
    np.testing.assert_allclose(a[:, 9], np.cos(9 * np.arccos(x)), atol=1e-12)


def test_contract_axes_separable():
    rng = np.random.default_rng(0)
    v = rng.standard_normal((4, 4))
    m = rng.standard_normal((3, 4))
    np.testing.assert_allclose(_kernels.contract_axes(v, m), m @ v @ m.T, atol=1e-12)


def test_thread_cap(monkeypatch):
    monkeypatch.delenv("CVNN_SYNTH_THREADS", raising=False)
    assert _kernels.thread_cap() is None
    monkeypatch.setenv("CVNN_SYNTH_THREADS", "2")
    assert _kernels.thread_cap() == 2
    for bad in ("0", "two"):
        monkeypatch.setenv("CVNN_SYNTH_THREADS", bad)
        with pytest.raises(ParameterError):
            _kernels.thread_cap()
