"""Zeta functions of nondegenerate hypersurfaces over finite fields of odd
characteristic, via p-adic cohomology with sparse Frobenius expansion."""

from .errors import DworkZetaError
from .pipeline import Problem, compute_zeta, verify_against_oracle
from .zeta import ZetaFunction

__version__ = "0.1.0"

__all__ = [
    "DworkZetaError",
    "Problem",
    "ZetaFunction",
    "compute_zeta",
    "verify_against_oracle",
    "__version__",
]
