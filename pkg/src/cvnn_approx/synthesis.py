"""Shallow complex-valued networks built from divided differences.

For an activation phi and a base point b, the map w -> phi(w^T z + b)
has mixed Wirtinger derivatives

    d_w^m dbar_w^ell phi(w^T z + b) |_{w=0} = z^m zbar^ell (d^|m| dbar^|ell| phi)(b),

so every monomial z^m zbar^ell is a combination of real partial
derivatives in w, and each of those is approximated by a central divided
difference, i.e. by a finite sum of neurons phi(rho^T z + b) with
rho = h (alpha_x + i alpha_y) on an integer grid.  Both the Wirtinger
expansion and the stencil factor over coordinates, which keeps the
weight tables small.

Polynomial networks are linear in the coefficients for a fixed step h.
The synthesis pipeline picks h once per (activation, n, M) from the
Chebyshev basis, so the neuron grid does not depend on the target.
"""

from __future__ import annotations

import itertools
import json
import math
import string
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .activations import ADMISSIBILITY_THRESHOLD, ActivationSpec, parse_activation, wirtinger_at_base
from .core import ComplexCubeGrid, MultiIndex, default_grid, iso_real_to_complex
from .divided_differences import check_stencil_width, h_schedule
from .errors import (
    ConditioningError,
    DimensionError,
    NotAdmissibleError,
    ParameterError,
)
from .trig import ChebyshevExpansion, chebyshev_functionals, chebyshev_monomials
from .wirtinger import wirtinger_expansion

FORMAT_VERSION = 1
MAX_STENCIL_ORDER = 12
_BLOCK = 4_000_000


# ---------------------------------------------------------------------------
# polynomials in z and zbar


@dataclass(frozen=True)
class ZZbarPolynomial:
    """``sum a_{m,ell} z^m zbar^ell`` stored densely.

    ``coeffs`` has 2n axes ordered (m_1 .. m_n, ell_1 .. ell_n).
    """

    n: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.ndim != 2 * self.n:
            raise DimensionError(f"coefficient array needs {2 * self.n} axes, has {c.ndim}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, n):
        return cls(n, np.zeros((1,) * (2 * n)))

    @classmethod
    def monomial(cls, m, ell, c=1.0):
        m = MultiIndex(m)
        ell = MultiIndex(ell)
        if len(m) != len(ell):
            raise DimensionError("m and ell differ in length")
        n = len(m)
        d = max(tuple(m) + tuple(ell) + (0,))
        arr = np.zeros((d + 1,) * (2 * n), dtype=np.complex128)
        arr[tuple(m) + tuple(ell)] = c
        return cls(n, arr)

    @classmethod
    def from_terms(cls, n, terms):
        """Build from a mapping ``(m, ell) -> coefficient``."""
        d = 0
        for m, ell in terms:
            d = max(d, *m, *ell)
        arr = np.zeros((d + 1,) * (2 * n), dtype=np.complex128)
        for (m, ell), c in terms.items():
            if len(m) != n or len(ell) != n:
                raise DimensionError("multi-index length does not match n")
            arr[tuple(m) + tuple(ell)] += c
        return cls(n, arr)

    def terms(self):
        out = {}
        for idx in zip(*np.nonzero(self.coeffs)):
            idx = tuple(int(i) for i in idx)
            out[(idx[: self.n], idx[self.n :])] = complex(self.coeffs[idx])
        return out

    @property
    def is_zero(self):
        return not np.any(self.coeffs)

    @property
    def degree(self):
        """Largest exponent of any single z_t or zbar_t."""
        nz = np.nonzero(self.coeffs)
        if not nz[0].size:
            return 0
        return int(max(a.max() for a in nz))

    @property
    def reach(self):
        """Largest m_t + ell_t over the support: the stencil width per real axis."""
        nz = np.nonzero(self.coeffs)
        if not nz[0].size:
            return 0
        n = self.n
        return int(max((nz[t] + nz[n + t]).max() for t in range(n)))

    def padded(self, d):
        cur = self.coeffs.shape[0] - 1
        if cur == d:
            return self.coeffs
        if cur > d:
            cut = self.coeffs[(slice(0, d + 1),) * (2 * self.n)]
            if not np.array_equal(np.count_nonzero(cut), np.count_nonzero(self.coeffs)):
                raise DimensionError("cannot truncate nonzero coefficients")
            return cut
        out = np.zeros((d + 1,) * (2 * self.n), dtype=np.complex128)
        out[(slice(0, cur + 1),) * (2 * self.n)] = self.coeffs
        return out

    def __add__(self, other):
        if self.n != other.n:
            raise DimensionError("polynomials live in different dimensions")
        d = max(self.coeffs.shape[0], other.coeffs.shape[0]) - 1
        return ZZbarPolynomial(self.n, self.padded(d) + other.padded(d))

    def scale(self, c):
        return ZZbarPolynomial(self.n, self.coeffs * c)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if z.ndim == 1:
            z = z[None, :] if z.shape[0] == self.n and self.n > 1 else z.reshape(-1, self.n)
        if z.shape[1] != self.n:
            raise DimensionError(f"expected points in C^{self.n}")
        d = self.coeffs.shape[0] - 1
        powers = [np.power.outer(z[:, t], np.arange(d + 1)) for t in range(self.n)]
        powers += [np.power.outer(np.conj(z[:, t]), np.arange(d + 1)) for t in range(self.n)]
        acc = np.broadcast_to(self.coeffs, (z.shape[0],) + self.coeffs.shape)
        for table in powers:
            acc = np.einsum("nk...,nk->n...", acc, table)
        return acc


@lru_cache(maxsize=None)
def _zzbar_table(K):
    """``C[a, b, mu, lam]``: coefficient of w^mu wbar^lam in T_a(Re w) T_b(Im w).

    Re w = (w + wbar)/2 and Im w = (w - wbar)/(2i).  All entries are dyadic
    rationals with small numerators, so the float arithmetic is exact.
    """
    cheb = chebyshev_monomials(K)
    D = 2 * K
    # x^i and y^j in the (w, wbar) basis
    xpow = np.zeros((K + 1, D + 1, D + 1), dtype=np.complex128)
    ypow = np.zeros((K + 1, D + 1, D + 1), dtype=np.complex128)
    for i in range(K + 1):
        for u in range(i + 1):
            xpow[i, u, i - u] = math.comb(i, u) / 2.0**i
            ypow[i, u, i - u] = math.comb(i, u) * (-1) ** (i - u) * (-0.5j) ** i
    tx = np.einsum("ai,iml->aml", np.array(cheb, dtype=np.float64), xpow)
    ty = np.einsum("bj,jml->bml", np.array(cheb, dtype=np.float64), ypow)
    out = np.zeros((K + 1, K + 1, D + 1, D + 1), dtype=np.complex128)
    for a in range(K + 1):
        for b in range(K + 1):
            for mu1, lam1 in zip(*np.nonzero(tx[a])):
                c1 = tx[a, mu1, lam1]
                for mu2, lam2 in zip(*np.nonzero(ty[b])):
                    out[a, b, mu1 + mu2, lam1 + lam2] += c1 * ty[b, mu2, lam2]
    out.setflags(write=False)
    return out


def _letters(count, skip=""):
    pool = [c for c in string.ascii_letters if c not in skip]
    return pool[:count]


def chebyshev_to_zzbar(expansion, n=None):
    """Rewrite ``sum V_k T_k(x)`` on [-1, 1]^{2n} as a polynomial in z, zbar.

    Coordinate t of C^n carries the real variables x_t (index t) and
    y_t (index n + t).  Coordinatewise degree at most 2 * expansion.degree.
    """
    s = expansion.s
    if s % 2:
        raise DimensionError("a Chebyshev expansion on C^n needs an even number of real variables")
    n = s // 2 if n is None else n
    if s != 2 * n:
        raise DimensionError("expansion dimension does not match n")
    K = expansion.degree
    table = _zzbar_table(K)
    a_ax = _letters(n)
    b_ax = _letters(n, "".join(a_ax))
    used = "".join(a_ax + b_ax)
    m_ax = _letters(n, used)
    used += "".join(m_ax)
    l_ax = _letters(n, used)
    spec = "".join(a_ax + b_ax)
    for t in range(n):
        spec += "," + a_ax[t] + b_ax[t] + m_ax[t] + l_ax[t]
    spec += "->" + "".join(m_ax + l_ax)
    coeffs = np.einsum(spec, np.asarray(expansion.coeffs, dtype=np.complex128), *([table] * n), optimize=True)
    return ZZbarPolynomial(n, coeffs)


# ---------------------------------------------------------------------------
# networks


@dataclass
class ShallowCVNN:
    """``z -> sum_j sigma_j phi(rho_j^T z + b)`` with one shared bias.

    ``alpha`` records the integer stencil offsets behind each rho (so that
    rho = h * (alpha_x + i alpha_y)); it may be ``None`` for networks read
    from elsewhere.
    """

    activation: ActivationSpec
    bias: complex
    rho: np.ndarray
    sigma: np.ndarray
    alpha: np.ndarray = None
    h: float = None

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=np.complex128)
        self.sigma = np.asarray(self.sigma, dtype=np.complex128).reshape(-1)
        if self.rho.ndim != 2:
            self.rho = self.rho.reshape(len(self.sigma), -1)
        if self.rho.shape[0] != self.sigma.shape[0]:
            raise DimensionError("rho and sigma disagree on the number of neurons")
        if self.alpha is not None:
            self.alpha = np.asarray(self.alpha, dtype=np.int64)
            if self.alpha.ndim != 2:
                self.alpha = self.alpha.reshape(len(self.sigma), -1)
        self.bias = complex(self.bias)

    @property
    def n(self):
        return self.rho.shape[1]

    @property
    def neuron_count(self):
        return int(self.sigma.shape[0])

    def preactivations(self, z):
        return z @ self.rho.T + self.bias

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if z.ndim == 1:
            z = z.reshape(-1, self.n) if self.n == 1 else z[None, :]
        if z.shape[1] != self.n:
            raise DimensionError(f"expected points in C^{self.n}")
        out = np.zeros(z.shape[0], dtype=np.complex128)
        if self.neuron_count == 0:
            return out
        rows = max(1, _BLOCK // self.neuron_count)
        for start in range(0, z.shape[0], rows):
            block = z[start : start + rows]
            values = self.activation.evaluate(self.preactivations(block))
            out[start : start + rows] = _kernels.weighted_rowsum(values, self.sigma)
        return out

    def without_zero_weights(self):
        keep = self.sigma != 0
        return ShallowCVNN(
            self.activation,
            self.bias,
            self.rho[keep],
            self.sigma[keep],
            None if self.alpha is None else self.alpha[keep],
            self.h,
        )

    def to_dict(self):
        neurons = []
        for j in range(self.neuron_count):
            entry = {}
            if self.alpha is not None:
                entry["alpha"] = [int(a) for a in self.alpha[j]]
            entry["rho"] = [[float(c.real), float(c.imag)] for c in self.rho[j]]
            entry["sigma"] = [float(self.sigma[j].real), float(self.sigma[j].imag)]
            neurons.append(entry)
        out = {
            "version": FORMAT_VERSION,
            "n": int(self.n),
            "bias": [self.bias.real, self.bias.imag],
            "activation": self.activation.ident,
            "neurons": neurons,
        }
        if self.h is not None:
            out["h"] = float(self.h)
        return out

    def to_json(self):
        # json writes floats with repr, the shortest string that round-trips
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, data):
        if data.get("version") != FORMAT_VERSION:
            raise ParameterError(f"unsupported network format version {data.get('version')!r}")
        n = int(data["n"])
        neurons = data["neurons"]
        rho = np.array([[complex(a, b) for a, b in e["rho"]] for e in neurons], dtype=np.complex128).reshape(-1, n)
        sigma = np.array([complex(*e["sigma"]) for e in neurons], dtype=np.complex128)
        alpha = None
        if neurons and all("alpha" in e for e in neurons):
            alpha = np.array([e["alpha"] for e in neurons], dtype=np.int64)
        spec = parse_activation(data["activation"])
        return cls(spec, complex(*data["bias"]), rho, sigma, alpha, data.get("h"))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def zero_network(spec, n):
    return ShallowCVNN(spec, spec.base_point, np.zeros((0, n)), np.zeros(0), np.zeros((0, 2 * n), dtype=np.int64))


# ---------------------------------------------------------------------------
# stencil weight tables


@lru_cache(maxsize=None)
def _stencil_weights(reach):
    """``w[mu, lam, a1 + R, a2 + R]`` for one complex coordinate.

    The weight of the neuron with offset (a1, a2) in the combination that
    approximates d^mu dbar^lam at w = 0, before the common (2h)^-(mu+lam).
    """
    R = reach
    w = np.zeros((R + 1, R + 1, 2 * R + 1, 2 * R + 1), dtype=np.complex128)
    for mu in range(R + 1):
        for lam in range(R + 1 - mu):
            exp = wirtinger_expansion((mu,), (lam,))
            for (p1, p2), (bre, bim) in exp.exact.items():
                b = complex(float(bre), float(bim))
                if b == 0:
                    continue
                for r1 in range(p1 + 1):
                    c1 = (-1) ** (p1 - r1) * math.comb(p1, r1)
                    for r2 in range(p2 + 1):
                        c2 = (-1) ** (p2 - r2) * math.comb(p2, r2)
                        w[mu, lam, 2 * r1 - p1 + R, 2 * r2 - p2 + R] += b * c1 * c2
    w.setflags(write=False)
    return w


def stencil_offsets(n, reach):
    """All integer offsets in [-reach, reach]^{2n}, in the order sigma arrays flatten."""
    return np.array(list(itertools.product(range(-reach, reach + 1), repeat=2 * n)), dtype=np.int64).reshape(
        -1, 2 * n
    )


def offsets_to_rho(alpha, h):
    return iso_real_to_complex(h * alpha.astype(np.float64))


def derivative_table(spec, n, reach, support=None):
    """``D[i, j] = d^i dbar^j phi(b)`` for i + j <= n * reach.

    Raises :class:`NotAdmissibleError` when a needed entry is (numerically) zero.
    ``support`` is a boolean array over (|m|, |ell|) marking the entries
    actually needed; by default all of them are.
    """
    top = n * reach
    table = np.ones((top + 1, top + 1), dtype=np.complex128)
    method = "analytic"
    for i in range(top + 1):
        for j in range(top + 1 - i):
            if support is not None and not support[i, j]:
                continue
            value, method = wirtinger_at_base(spec, i, j, max(i, j))
            if not abs(value) > ADMISSIBILITY_THRESHOLD or not math.isfinite(abs(value)):
                raise NotAdmissibleError(
                    f"{spec.name}: derivative ({i}, {j}) at the base point is {abs(value):.3g}"
                )
            table[i, j] = value
    return table, method


def _order_arrays(n, size):
    idx = np.indices((size,) * (2 * n))
    mabs = idx[:n].sum(axis=0)
    labs = idx[n:].sum(axis=0)
    return mabs, labs


def _sigma_tensor(coeffs, n, reach, dtab, h, precision="double", batch=False):
    """Neuron weights over the offset grid for dense coefficients ``coeffs``.

    With ``batch`` the leading axis of ``coeffs`` indexes separate polynomials.
    """
    size = reach + 1
    mabs, labs = _order_arrays(n, size)
    scale = 1.0 / (dtab[mabs, labs] * (2.0 * h) ** (mabs + labs))
    w = _stencil_weights(reach)
    dtype = np.clongdouble if precision == "extended" else np.complex128
    a = np.asarray(coeffs, dtype=dtype) * scale.astype(dtype)
    m_ax = _letters(n, "Z")
    l_ax = _letters(n, "Z" + "".join(m_ax))
    used = "Z" + "".join(m_ax + l_ax)
    x_ax = _letters(n, used)
    used += "".join(x_ax)
    y_ax = _letters(n, used)
    lead = "Z" if batch else ""
    spec = lead + "".join(m_ax + l_ax)
    for t in range(n):
        spec += "," + m_ax[t] + l_ax[t] + x_ax[t] + y_ax[t]
    spec += "->" + lead + "".join(x_ax + y_ax)
    out = np.einsum(spec, a, *([w.astype(dtype)] * n), optimize=True)
    out = out.astype(np.complex128)
    return out.reshape((out.shape[0], -1) if batch else (-1,))


def _activation_matrix(spec, nodes, rho, bias):
    return spec.evaluate(nodes @ rho.T + bias)


def _residuals(spec, nodes, rho, bias, sigmas, targets):
    """max over nodes of |Phi sigma_i - target_i| for each of the rows of ``sigmas``.

    Plain matrix products suffice here; these numbers only steer the
    choice of h.  Reported errors use the compensated network evaluation.
    """
    worst = np.zeros(sigmas.shape[0])
    rows = max(1, _BLOCK // max(1, rho.shape[0]))
    for start in range(0, nodes.shape[0], rows):
        block = nodes[start : start + rows]
        phi = _activation_matrix(spec, block, rho, bias)
        vals = phi @ sigmas.T
        diff = np.abs(vals - targets[start : start + rows])
        if not np.all(np.isfinite(diff)):
            return np.full(sigmas.shape[0], np.inf)
        worst = np.maximum(worst, diff.max(axis=0))
    return worst


@dataclass(frozen=True)
class StepSearch:
    h: float
    residual: float
    reached: bool
    history: tuple


def _search_h(schedule, evaluate, target):
    """Halve h until the residual reaches ``target``.

    Stops early once the residual has grown on two consecutive halvings:
    from there on rounding dominates and smaller steps only get worse.
    """
    history = []
    best = None
    rises = 0
    for h in schedule:
        r = float(evaluate(h))
        history.append((h, r))
        if best is None or r < best[1]:
            best = (h, r)
        if r <= target:
            return StepSearch(h, r, True, tuple(history))
        if len(history) >= 2 and r > history[-2][1]:
            rises += 1
            if rises >= 2:
                break
        else:
            rises = 0
    return StepSearch(best[0], best[1], False, tuple(history))


def polynomial_network(spec, poly, eps, h=None, grid=None, precision="double", keep_zero=False):
    """Network approximating ``poly`` on the complex cube to within ``eps``.

    The neurons sit on the offset grid [-R, R]^{2n} with R the largest
    m_t + ell_t in the support; rho depends only on (R, h, b).  With ``h``
    unset it is chosen by halving from ``h_schedule``.  Raises
    :class:`ConditioningError` (carrying the best attempt) when no step
    reaches ``eps``.
    """
    n = poly.n
    if poly.is_zero:
        return zero_network(spec, n)
    reach = poly.reach
    if reach > MAX_STENCIL_ORDER:
        raise ConditioningError(f"stencil order {reach} per axis exceeds {MAX_STENCIL_ORDER}")
    coeffs = poly.padded(reach)
    mabs, labs = _order_arrays(n, reach + 1)
    support = np.zeros((n * reach + 1, n * reach + 1), dtype=bool)
    support[mabs[coeffs != 0], labs[coeffs != 0]] = True
    dtab, _ = derivative_table(spec, n, reach, support)
    alpha = stencil_offsets(n, reach)
    grid = default_grid(n) if grid is None else grid
    nodes = grid.nodes()
    target = poly(nodes)[:, None]
    schedule = [h] if h is not None else h_schedule(spec.radius, n, reach)
    cache = {}

    def evaluate(step):
        check_stencil_width(spec, reach, step, n)
        sigma = _sigma_tensor(coeffs, n, reach, dtab, step, precision)
        rho = offsets_to_rho(alpha, step)
        cache[step] = (rho, sigma)
        net = ShallowCVNN(spec, spec.base_point, rho, sigma, alpha, step)
        return np.max(np.abs(net(nodes) - target[:, 0]))

    result = _search_h(schedule, evaluate, eps)
    rho, sigma = cache[result.h]
    net = ShallowCVNN(spec, spec.base_point, rho, sigma, alpha, result.h)
    if not keep_zero:
        net = net.without_zero_weights()
    if not result.reached:
        raise ConditioningError(
            f"no step reached {eps:.3g}; best residual {result.residual:.3g} at h = {result.h:.3g}",
            best_residual=result.residual,
            network=net,
            h=result.h,
        )
    return net


def monomial_network(spec, m, ell, eps, **kwargs):
    """Network approximating ``z^m zbar^ell``."""
    return polynomial_network(spec, ZZbarPolynomial.monomial(m, ell), eps, **kwargs)


# ---------------------------------------------------------------------------
# the pipeline


def select_M(m_budget, n):
    """Largest M >= 1 with (16M - 7)^{2n} <= m_budget, or 0 if there is none."""
    if m_budget < 1:
        raise ParameterError(f"budget must be positive, got {m_budget}")
    if n < 1:
        raise DimensionError("n must be at least 1")
    M = 0
    while (16 * (M + 1) - 7) ** (2 * n) <= m_budget:
        M += 1
    return M


@dataclass
class SynthesisDiagnostics:
    n: int
    k: int
    m_budget: int
    M: int
    activation: str
    h: float = None
    neurons: int = 0
    basis_target: float = None
    basis_residual: float = None
    chebyshev_error: float = None
    network_error: float = None
    sup_error: float = None
    degenerate_budget: bool = False
    conditioning: bool = False
    derivative_method: str = None
    precision: str = "double"
    quad_points: int = None
    grid_points_per_axis: int = None
    h_history: list = field(default_factory=list)
    seconds: float = None

    def to_dict(self):
        out = asdict(self)
        out["h_history"] = [[float(a), float(b)] for a, b in self.h_history]
        return out


def _split_real(f, n, part):
    def g(x):
        vals = np.asarray(f(iso_real_to_complex(x)), dtype=np.complex128).reshape(-1)
        return vals.real if part == 0 else vals.imag

    return g


def chebyshev_basis(n, M):
    """Dense (z, zbar) coefficients of T_k o phi_n^-1 for every k in [0, 2M-1]^{2n}.

    Returns the list of k and an array with one polynomial per leading index.
    """
    K = 2 * M - 1
    ks = list(itertools.product(range(K + 1), repeat=2 * n))
    coeffs = np.zeros((len(ks),) + (K + 1,) * (2 * n))
    for i, k in enumerate(ks):
        coeffs[(i,) + k] = 1.0
    polys = []
    for i in range(len(ks)):
        polys.append(chebyshev_to_zzbar(ChebyshevExpansion(2 * n, M, coeffs[i]), n).coeffs)
    return ks, np.stack(polys)


def _basis_values(ks, nodes, K):
    x = np.concatenate([nodes.real, nodes.imag], axis=1)
    tables = [_kernels.chebyshev_table(x[:, j], K) for j in range(x.shape[1])]
    out = np.ones((nodes.shape[0], len(ks)))
    for i, k in enumerate(ks):
        for j, kj in enumerate(k):
            out[:, i] *= tables[j][:, kj]
    return out


def synthesize(spec, f, n, k, m_budget, quad_points=None, grid=None, precision="double"):
    """Network of at most ``m_budget`` neurons approximating f on the complex cube.

    ``f`` is vectorized over points of shape (N, n).  Returns the network
    and a :class:`SynthesisDiagnostics`.  With a budget too small for
    M = 1 the result is the zero network (flagged ``degenerate_budget``).
    If no step h meets the per-basis target M^{-k-n} the best step is
    used and ``conditioning`` is set.
    """
    start = time.perf_counter()
    if precision not in ("double", "extended"):
        raise ParameterError(f"unknown precision {precision!r}")
    if k < 1:
        raise ParameterError("smoothness order k must be at least 1")
    M = select_M(m_budget, n)
    grid = default_grid(n) if grid is None else grid
    if grid.n != n:
        raise DimensionError("grid dimension does not match n")
    nodes = grid.nodes()
    fvals = np.asarray(f(nodes), dtype=np.complex128).reshape(-1)
    if fvals.shape[0] != nodes.shape[0]:
        raise DimensionError("target returned the wrong number of values")
    diag = SynthesisDiagnostics(
        n=n,
        k=k,
        m_budget=int(m_budget),
        M=M,
        activation=spec.ident,
        precision=precision,
        grid_points_per_axis=grid.points_per_axis,
    )
    if M == 0:
        net = zero_network(spec, n)
        diag.degenerate_budget = True
        diag.sup_error = float(np.max(np.abs(fvals)))
        diag.seconds = time.perf_counter() - start
        return net, diag

    reach = 4 * M - 2
    if reach > MAX_STENCIL_ORDER:
        raise ConditioningError(f"M = {M} needs stencil order {reach} per axis; the cap is {MAX_STENCIL_ORDER}")
    dtab, method = derivative_table(spec, n, reach)
    diag.derivative_method = method
    ks, basis = chebyshev_basis(n, M)
    basis = np.stack([ZZbarPolynomial(n, b).padded(reach) for b in basis])
    K = 2 * M - 1
    truth = _basis_values(ks, nodes, K)
    alpha = stencil_offsets(n, reach)
    eps = float(M) ** (-k - n)
    diag.basis_target = eps

    def basis_residual(step):
        check_stencil_width(spec, reach, step, n)
        sig = _sigma_tensor(basis, n, reach, dtab, step, precision, batch=True)
        return _residuals(spec, nodes, offsets_to_rho(alpha, step), spec.base_point, sig, truth).max()

    search = _search_h(h_schedule(spec.radius, n, reach), basis_residual, eps)
    h = search.h
    diag.h = h
    diag.basis_residual = search.residual
    diag.conditioning = not search.reached
    diag.h_history = list(search.history)

    q = quad_points
    e_re = chebyshev_functionals(_split_real(f, n, 0), 2 * n, M, q)
    e_im = chebyshev_functionals(_split_real(f, n, 1), 2 * n, M, q)
    diag.quad_points = q if q is not None else max(64 if n == 1 else 16, 8 * M)
    poly = chebyshev_to_zzbar(e_re, n) + chebyshev_to_zzbar(e_im, n).scale(1j)
    sigma = _sigma_tensor(poly.padded(reach), n, reach, dtab, h, precision)
    net = ShallowCVNN(spec, spec.base_point, offsets_to_rho(alpha, h), sigma, alpha, h)

    pvals = poly(nodes)
    gvals = net(nodes)
    diag.neurons = net.neuron_count
    diag.chebyshev_error = float(np.max(np.abs(fvals - pvals)))
    diag.network_error = float(np.max(np.abs(gvals - pvals)))
    diag.sup_error = float(np.max(np.abs(gvals - fvals)))
    diag.seconds = time.perf_counter() - start
    return net, diag
