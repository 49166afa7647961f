"""Hot loops, compiled with numba when available.

Every kernel has a pure-numpy twin that performs the same floating point
operations in the same order, so both backends agree to the last bit or
very nearly.  Set ``CVNN_DISABLE_JIT=1`` to force the numpy versions.
``CVNN_SYNTH_THREADS`` caps the numba thread pool.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

from .errors import ParameterError

_DISABLED = os.environ.get("CVNN_DISABLE_JIT", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    warnings.filterwarnings("ignore", message="The TBB threading layer")
    import numba
    from numba import njit, prange

    if "NUMBA_THREADING_LAYER" not in os.environ and "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
        # the TBB probe warns on older installs; OpenMP or the workqueue suffice
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False
    numba = None

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def thread_cap():
    """Parse ``CVNN_SYNTH_THREADS``; ``None`` when unset."""
    raw = os.environ.get("CVNN_SYNTH_THREADS")
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ParameterError(f"CVNN_SYNTH_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise ParameterError(f"CVNN_SYNTH_THREADS must be a positive integer, got {raw!r}")
    return value


def apply_thread_cap():
    cap = thread_cap()
    if cap is not None and HAVE_NUMBA:
        numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))
    return cap


# ---------------------------------------------------------------------------
# numpy reference implementations


def weighted_rowsum_numpy(values, weights):
    """Row sums ``sum_j weights[j] * values[:, j]`` with Neumaier compensation.

    Real and imaginary parts are compensated separately.
    """
    values = np.asarray(values, dtype=np.complex128)
    weights = np.asarray(weights, dtype=np.complex128)
    rows = values.shape[0]
    sr = np.zeros(rows)
    cr = np.zeros(rows)
    si = np.zeros(rows)
    ci = np.zeros(rows)
    for j in range(values.shape[1]):
        w = weights[j]
        col = values[:, j]
        tr = w.real * col.real - w.imag * col.imag
        ti = w.real * col.imag + w.imag * col.real
        t = sr + tr
        big = np.abs(sr) >= np.abs(tr)
        cr += np.where(big, (sr - t) + tr, (tr - t) + sr)
        sr = t
        t = si + ti
        big = np.abs(si) >= np.abs(ti)
        ci += np.where(big, (si - t) + ti, (ti - t) + si)
        si = t
    return (sr + cr) + 1j * (si + ci)


def contract_last_numpy(values, matrix):
    """``out[r, k] = sum_q matrix[k, q] * values[r, q]`` summed in index order."""
    values = np.asarray(values)
    matrix = np.asarray(matrix, dtype=np.float64)
    out = np.zeros((values.shape[0], matrix.shape[0]), dtype=np.result_type(values, matrix))
    for q in range(values.shape[1]):
        out += values[:, q : q + 1] * matrix[:, q][None, :]
    return out


def chebyshev_table_numpy(x, degree):
    """``T_0 .. T_degree`` at ``x`` by the three-term recurrence, shape (N, degree+1)."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((x.shape[0], degree + 1))
    out[:, 0] = 1.0
    if degree >= 1:
        out[:, 1] = x
    for k in range(2, degree + 1):
        out[:, k] = 2.0 * x * out[:, k - 1] - out[:, k - 2]
    return out


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _weighted_rowsum_jit(values, wr, wi):
        rows, cols = values.shape
        out = np.empty(rows, dtype=np.complex128)
        for g in prange(rows):
            sr = 0.0
            cr = 0.0
            si = 0.0
            ci = 0.0
            for j in range(cols):
                v = values[g, j]
                tr = wr[j] * v.real - wi[j] * v.imag
                ti = wr[j] * v.imag + wi[j] * v.real
                t = sr + tr
                if abs(sr) >= abs(tr):
                    cr += (sr - t) + tr
                else:
                    cr += (tr - t) + sr
                sr = t
                t = si + ti
                if abs(si) >= abs(ti):
                    ci += (si - t) + ti
                else:
                    ci += (ti - t) + si
                si = t
            out[g] = complex(sr + cr, si + ci)
        return out

    @njit(cache=True, parallel=True)
    def _contract_last_real_jit(values, matrix):
        rows, width = values.shape
        kk = matrix.shape[0]
        out = np.zeros((rows, kk))
        for r in prange(rows):
            for k in range(kk):
                acc = 0.0
                for q in range(width):
                    acc += values[r, q] * matrix[k, q]
                out[r, k] = acc
        return out

    @njit(cache=True)
    def _chebyshev_table_jit(x, degree):
        n = x.shape[0]
        out = np.empty((n, degree + 1))
        for i in range(n):
            out[i, 0] = 1.0
            if degree >= 1:
                out[i, 1] = x[i]
            for k in range(2, degree + 1):
                out[i, k] = 2.0 * x[i] * out[i, k - 1] - out[i, k - 2]
        return out

    def weighted_rowsum_numba(values, weights):
        values = np.ascontiguousarray(values, dtype=np.complex128)
        weights = np.asarray(weights, dtype=np.complex128)
        return _weighted_rowsum_jit(values, np.ascontiguousarray(weights.real), np.ascontiguousarray(weights.imag))

    def contract_last_numba(values, matrix):
        values = np.asarray(values)
        matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        if np.iscomplexobj(values):
            re = _contract_last_real_jit(np.ascontiguousarray(values.real), matrix)
            im = _contract_last_real_jit(np.ascontiguousarray(values.imag), matrix)
            return re + 1j * im
        return _contract_last_real_jit(np.ascontiguousarray(values, dtype=np.float64), matrix)

    def chebyshev_table_numba(x, degree):
        return _chebyshev_table_jit(np.ascontiguousarray(x, dtype=np.float64), int(degree))

    weighted_rowsum = weighted_rowsum_numba
    contract_last = contract_last_numba
    chebyshev_table = chebyshev_table_numba
else:
    weighted_rowsum = weighted_rowsum_numpy
    contract_last = contract_last_numpy
    chebyshev_table = chebyshev_table_numpy


def contract_axes(values, matrix):
    """Apply ``matrix`` (K, Q) along every axis of a (Q,)*s array."""
    out = np.asarray(values)
    s = out.ndim
    for _ in range(s):
        lead = out.shape[:-1]
        flat = out.reshape(-1, out.shape[-1])
        res = contract_last(flat, matrix)
        # the contracted axis moves to the front, so after s passes the
        # axes are back in their original order
        out = np.moveaxis(res.reshape(lead + (matrix.shape[0],)), -1, 0)
    return out
