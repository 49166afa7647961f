"""Constructive approximation by shallow complex-valued neural networks.

A target f on the complex cube is expanded in Chebyshev polynomials,
rewritten as a polynomial in z and conj(z), and every monomial is
realized by divided differences of a single activation; the network
z -> sum_j sigma_j phi(rho_j^T z + b) shares rho and b across targets.
"""

from ._kernels import BACKEND
from .activations import (
    ActivationSpec,
    AdmissibilityReport,
    cardioid,
    check_admissibility,
    exp_re,
    holomorphic_id,
    modrelu,
    parse_activation,
    sigmoid_re,
)
from .core import ComplexCubeGrid, MultiIndex, cube_grid, iso_complex_to_real, iso_real_to_complex, sup_norm_diff
from .divided_differences import divided_difference, divided_difference_table, hermite_genocchi
from .errors import *  # noqa: F401,F403
from .ridge import RidgeBasis, build_ridge_basis, homogeneous_dim, ridge_project
from .synthesis import (
    ShallowCVNN,
    SynthesisDiagnostics,
    ZZbarPolynomial,
    chebyshev_to_zzbar,
    monomial_network,
    polynomial_network,
    select_M,
    synthesize,
)
from .trig import chebyshev_approximant, chebyshev_functionals, dirichlet, fejer, l1_norm, vallee_poussin
from .wirtinger import numeric_wirtinger, wirtinger_expansion

__version__ = "0.1.0"
