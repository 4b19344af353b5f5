"""Spectral sets from numerical ranges, q-numerical ranges and double-layer potentials."""
from .bounds import (BoundsReport, a_lower_estimate, assemble_report, conjecture_constant,
                     constant_thm22, constant_thm25, geometric_gamma_bound, qrange_gamma_bound)
from .core import DEFAULT_TOL, Tolerances
from .errors import (ContractError, DomainError, InputError, InternalConsistencyError,
                     NonSmoothBoundary, SingularityError, SpectralSetError, StageError)
from .geometry import BoundaryMesh, SupportFn, boundary_mesh, perimeter
from .polynomial import Polynomial
from .potential import BoundaryFunction, gamma_one, m_total, potential_profile
from .ranges import (QParameter, m_theta, numrange_body, numrange_support, qrange_body,
                     qrange_support)
from .search import conjecture_trial, ensembles, maximize_ratio, ratio

__version__ = "0.1.0"
