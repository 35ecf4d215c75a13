"""Numerical toolkit for Gaussian logarithmic Sobolev inequalities and their reversed forms.

Submodules:

- ``density``: Gaussian, mixture and grid densities; relative functions ``f``.
- ``functionals``: quadrature rules, entropies, entropy power, Fisher information.
- ``inequalities``: one checker per inequality, each returning a report.
- ``transforms``: changes of function and scaling that link the inequalities.
- ``semigroup``: heat semigroup and the entropy interpolation identity.
- ``discrete``: two-point space, hypercube tensorization and the CLT table.
- ``isoperimetry``: Gaussian isoperimetric profile and Bobkov's inequality.
- ``corpus``: seeded test-density corpora.
- ``cli``: command-line front end.
"""
from .density import (
    DensityRatioFunction,
    ExpFunction,
    GaussianSpec,
    GridField,
    MixtureSpec,
    discretize,
    gaussian,
    mixture,
    named_function,
    standard_gaussian,
)
from .errors import LabError
from .functionals import (
    covariance,
    entropy_power,
    fisher_matrix,
    fisher_scalar,
    relative_entropy,
    shannon_entropy,
)
from .inequalities import (
    InequalityReport,
    check_amgm,
    check_entropy_trace,
    check_euclidean_lsi,
    check_lsi_gross,
    check_max_entropy_det,
    check_nj,
    check_njj,
    check_reversed_euclidean,
    check_reversed_lsi,
    exp_witness,
)

__version__ = "0.1.0"

__all__ = [
    "DensityRatioFunction", "ExpFunction", "GaussianSpec", "GridField", "MixtureSpec",
    "discretize", "gaussian", "mixture", "named_function", "standard_gaussian",
    "LabError",
    "covariance", "entropy_power", "fisher_matrix", "fisher_scalar", "relative_entropy", "shannon_entropy",
    "InequalityReport", "check_amgm", "check_entropy_trace", "check_euclidean_lsi", "check_lsi_gross",
    "check_max_entropy_det", "check_nj", "check_njj", "check_reversed_euclidean", "check_reversed_lsi",
    "exp_witness",
]
