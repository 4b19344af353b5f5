"""Dense complex matrix primitives: norms, Hermitian eigen-extremes, resolvents."""
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, InputError, SingularityError

#: resolvents beyond this condition number are refused
COND_CAP = 1e12


@dataclass(frozen=True)
class Tolerances:
    eig_tol: float = 1e-10
    quad_tol: float = 1e-8
    psd_tol: float = 1e-8
    curvature_tol: float = 1e-8

    def __post_init__(self):
        for name in ("eig_tol", "quad_tol", "psd_tol", "curvature_tol"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise InputError(f"{name} must be strictly positive, got {v!r}")

    def as_dict(self):
        return {"eig_tol": self.eig_tol, "quad_tol": self.quad_tol,
                "psd_tol": self.psd_tol, "curvature_tol": self.curvature_tol}


DEFAULT_TOL = Tolerances()


def as_operator(A):
    """Validate ``A`` and return it as a C-contiguous complex128 square array."""
    A = np.atleast_2d(np.asarray(A))
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InputError(f"expected a non-empty square matrix, got shape {A.shape}")
    A = np.ascontiguousarray(A, dtype=np.complex128)
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    return A


def operator_norm(A):
    """Largest singular value of ``A``."""
    A = as_operator(A)
    return float(np.linalg.svd(A, compute_uv=False)[0])


def is_scalar_multiple_of_identity(A, tol=DEFAULT_TOL):
    A = as_operator(A)
    n = A.shape[0]
    lam = np.trace(A) / n
    dev = np.linalg.norm(A - lam * np.eye(n))
    return bool(dev <= tol.eig_tol * max(1.0, np.linalg.norm(A)))


def hermitian_part(B):
    return 0.5 * (B + B.conj().T)


def hermitian_extremes(H, tol=DEFAULT_TOL):
    """Return ``(lambda_min, lambda_max)`` of a Hermitian matrix.

    Raises ContractError when ``H`` deviates from Hermitian by more than
    ``eig_tol * ||H||``.
    """
    H = as_operator(H)
    scale = max(np.linalg.norm(H, 2), 1.0)
    if np.linalg.norm(H - H.conj().T, 2) > tol.eig_tol * scale:
        raise ContractError("matrix is not Hermitian within eig_tol")
    w = np.linalg.eigvalsh(hermitian_part(H))
    return float(w[0]), float(w[-1])


def gershgorin_discs(A):
    """Row Gershgorin discs as ``(centers, radii)``."""
    A = as_operator(A)
    centers = np.diag(A).copy()
    radii = np.abs(A).sum(axis=1) - np.abs(centers)
    return centers, radii


def gershgorin_enclosing_disk(A):
    """A disk containing the union of the Gershgorin discs.

    Centred at the mean of the disc centres; not minimal, only safe.
    """
    centers, radii = gershgorin_discs(A)
    c = centers.mean()
    return complex(c), float(np.max(np.abs(centers - c) + radii))


def _shifted_svals(A, sigma):
    n = A.shape[0]
    return np.linalg.svd(sigma * np.eye(n) - A, compute_uv=False)


def resolvent(A, sigma, tol=DEFAULT_TOL):
    """``(sigma I - A)^{-1}``; raises SingularityError near the spectrum."""
    A = as_operator(A)
    n = A.shape[0]
    B = sigma * np.eye(n) - A
    s = np.linalg.svd(B, compute_uv=False)
    if s[-1] <= tol.eig_tol * max(s[0], 1.0) or s[0] > COND_CAP * s[-1]:
        raise SingularityError(sigma, cond=s[0] / s[-1] if s[-1] > 0 else np.inf)
    R = np.linalg.solve(B, np.eye(n))
    if np.linalg.norm(B @ R - np.eye(n), 2) > tol.eig_tol:
        raise SingularityError(sigma, cond=s[0] / s[-1])
    return R


def min_resolvent_modulus(A, sigma, tol=DEFAULT_TOL):
    """``inf_{|y|=1} |(sigma - A)^{-1} y|^2 = 1 / ||sigma I - A||^2``."""
    A = as_operator(A)
    s = _shifted_svals(A, sigma)
    if s[-1] <= tol.eig_tol * max(s[0], 1.0) or s[0] > COND_CAP * s[-1]:
        raise SingularityError(sigma, cond=s[0] / s[-1] if s[-1] > 0 else np.inf)
    return float(1.0 / s[0] ** 2)


def min_resolvent_modulus_batch(A, sigmas):
    """Vectorised ``min_resolvent_modulus`` over many points (no singularity checks)."""
    A = as_operator(A)
    n = A.shape[0]
    B = np.asarray(sigmas)[:, None, None] * np.eye(n) - A
    smax = np.linalg.svd(B, compute_uv=False)[:, 0]
    return 1.0 / smax ** 2
