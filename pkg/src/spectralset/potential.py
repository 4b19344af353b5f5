"""Double-layer potential along a boundary mesh and the Cauchy-integral calculus.

For a boundary node sigma with unit tangent tau,

    mu(sigma, A) = T + T^*,   T = tau / (2 pi i) * (sigma I - A)^{-1},

integrated against arc length.  Integrals over the boundary are periodic
trapezoidal sums in the normal angle with weights rho * dtheta.
"""
import csv
from dataclasses import dataclass

import numpy as np

from .core import COND_CAP, DEFAULT_TOL, as_operator, resolvent
from .errors import (DomainError, InputError, InternalConsistencyError,
                     SingularityError, SpectralSetError)
from .geometry import boundary_mesh, inner_distance
from .polynomial import Polynomial

MAX_NODES = 4096


class AccuracyError(SpectralSetError):
    """Evaluation point too close to the boundary for the trapezoidal rule."""


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128).ravel()
        if not np.all(np.isfinite(v)):
            raise InputError("boundary function values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    @classmethod
    def constant(cls, c, mesh):
        return cls(np.full(mesh.node_count, c, dtype=np.complex128))

    @classmethod
    def from_polynomial(cls, p, mesh, normalize=False):
        """Boundary samples of a polynomial (holomorphic by construction)."""
        vals = p(mesh.points)
        if normalize:
            s = np.max(np.abs(vals))
            if s == 0:
                raise InputError("cannot normalise the zero polynomial")
            vals = vals / s
        return cls(vals)


@dataclass(frozen=True, eq=False)
class PotentialProfile:
    A: np.ndarray
    mesh: object
    resolvents: np.ndarray   # (N, n, n)
    mu: np.ndarray           # (N, n, n), Hermitian
    lambda_min: np.ndarray   # (N,)

    @property
    def node_count(self):
        return self.mesh.node_count


def mu_at(A, sigma, tangent, tol=DEFAULT_TOL):
    """mu(sigma, A) for a single boundary point."""
    if abs(abs(tangent) - 1.0) > 1e-12:
        raise InputError("tangent must have unit modulus")
    R = resolvent(A, sigma, tol)
    T = tangent / (2j * np.pi) * R
    return T + T.conj().T


def check_spectrum_inside(A, body, margin=0.0):
    A = as_operator(A)
    ev = np.linalg.eigvals(A)
    d = np.atleast_1d(inner_distance(body, ev))
    bad = np.flatnonzero(d <= margin)
    if bad.size:
        i = bad[np.argmin(d[bad])]
        raise DomainError(f"eigenvalue {ev[i]:.6g} lies outside (or on) the domain "
                          f"(signed distance {d[i]:.3e})")
    return float(d.min())


def _resolvents(A, mesh):
    n = A.shape[0]
    B = mesh.points[:, None, None] * np.eye(n) - A
    s = np.linalg.svd(B, compute_uv=False)
    cond = s[:, 0] / np.maximum(s[:, -1], 1e-300)
    k = int(np.argmax(cond))
    if cond[k] > COND_CAP:
        raise SingularityError(mesh.points[k], cond[k])
    return np.linalg.inv(B)


def potential_profile(A, mesh, tol=DEFAULT_TOL):
    A = as_operator(A)
    check_spectrum_inside(A, mesh.body)
    R = _resolvents(A, mesh)
    T = (mesh.tangents / (2j * np.pi))[:, None, None] * R
    mu = T + np.conj(np.swapaxes(T, 1, 2))
    lam = np.linalg.eigvalsh(mu)[:, 0]
    return PotentialProfile(A, mesh, R, mu, lam)


def partition_error(profile):
    """||sum_k mu_k w_k - 2I||, which vanishes for exact quadrature."""
    n = profile.A.shape[0]
    S = np.einsum("k,kij->ij", profile.mesh.weights, profile.mu)
    return float(np.linalg.norm(S - 2.0 * np.eye(n), 2))


def refined_profile(A, body, n=512, tol=DEFAULT_TOL, max_nodes=MAX_NODES):
    """Profile on a mesh doubled until the partition identity holds to quad_tol."""
    A = as_operator(A)
    while True:
        prof = potential_profile(A, boundary_mesh(body, n, tol), tol)
        err = partition_error(prof)
        if err <= tol.quad_tol:
            return prof
        if 2 * n > max_nodes:
            raise InternalConsistencyError(
                f"partition identity error {err:.3e} at {n} nodes exceeds quad_tol; "
                "the spectrum is too close to the boundary - enlarge the domain")
        n *= 2


def _check_aligned(profile_or_mesh, f):
    N = profile_or_mesh.node_count
    if f.values.size != N:
        raise InputError(f"boundary function has {f.values.size} values, mesh has {N} nodes")


def gamma(profile, f):
    """gamma(f) = -int lambda_min f ds (complex)."""
    _check_aligned(profile, f)
    return complex(-np.sum(profile.lambda_min * f.values * profile.mesh.weights))


def gamma_one(profile, tol=DEFAULT_TOL):
    g = gamma(profile, BoundaryFunction.constant(1.0, profile.mesh))
    if abs(g.imag) > tol.quad_tol:
        raise InternalConsistencyError(f"gamma(1) has imaginary part {g.imag:.3e}")
    return g.real


def m_total(profile):
    return float(np.sum(np.abs(profile.lambda_min) * profile.mesh.weights))


def _contour_sum(profile, vals):
    m = profile.mesh
    c = m.tangents * m.weights * vals / (2j * np.pi)
    return np.einsum("k,kij->ij", c, profile.resolvents)


def _profile_for(A, mesh, profile, tol):
    if profile is None:
        return potential_profile(A, mesh, tol)
    if profile.mesh is not mesh:
        raise InputError("profile was computed on a different mesh")
    return profile


def cauchy_fcalc(A, mesh, f, profile=None, tol=DEFAULT_TOL):
    """f(A) = (1 / 2 pi i) int f(sigma) (sigma I - A)^{-1} d sigma."""
    A = as_operator(A)
    prof = _profile_for(A, mesh, profile, tol)
    _check_aligned(mesh, f)
    return _contour_sum(prof, f.values)


def cauchy_transform_op(A, mesh, f, profile=None, tol=DEFAULT_TOL):
    """g(A): the contour integral with conj(f) in place of f."""
    A = as_operator(A)
    prof = _profile_for(A, mesh, profile, tol)
    _check_aligned(mesh, f)
    return _contour_sum(prof, np.conj(f.values))


def cauchy_kernel(mesh, z, dist_tol=None):
    """Rows of (1 / 2 pi i) tau_k w_k / (sigma_k - z_j); contracting with conj(f) gives g(z_j)."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if dist_tol is None:
        dist_tol = float(np.max(mesh.weights))
    d = np.atleast_1d(inner_distance(mesh.body, z))
    if np.any(d <= dist_tol):
        j = int(np.argmin(d))
        raise AccuracyError(f"z = {z[j]:.6g} is within {dist_tol:.3e} of the boundary "
                            f"(distance {d[j]:.3e})")
    c = mesh.tangents * mesh.weights / (2j * np.pi)
    return c[None, :] / (mesh.points[None, :] - z[:, None])


def cauchy_transform_boundary(f, mesh, z, dist_tol=None):
    """Scalar Cauchy transform of conj(f) at interior point(s) ``z``."""
    _check_aligned(mesh, f)
    g = cauchy_kernel(mesh, z, dist_tol) @ np.conj(f.values)
    return g if np.ndim(z) else complex(g[0])


def s_operator(A, mesh, f, profile=None, tol=DEFAULT_TOL):
    """S = f(A) + g(A)^* + gamma(f) I, checked against ||S|| <= 2 + gamma(1)."""
    A = as_operator(A)
    prof = _profile_for(A, mesh, profile, tol)
    if f.sup_norm > 1.0 + tol.quad_tol:
        raise InputError(f"boundary function sup norm {f.sup_norm:.6g} exceeds 1")
    n = A.shape[0]
    S = (cauchy_fcalc(A, mesh, f, prof) + cauchy_transform_op(A, mesh, f, prof).conj().T
         + gamma(prof, f) * np.eye(n))
    bound = 2.0 + gamma_one(prof, tol)
    nrm = np.linalg.norm(S, 2)
    if nrm > bound + tol.psd_tol:
        raise InternalConsistencyError(f"||S|| = {nrm:.12g} exceeds 2 + gamma(1) = {bound:.12g}")
    return S


def polynomial_function(p, mesh, normalize=True):
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    return BoundaryFunction.from_polynomial(p, mesh, normalize)


def write_profile_csv(profile, path):
    from .io import atomic_writer

    m = profile.mesh
    with atomic_writer(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["theta", "lambda_min", "weight"])
        for th, lam, wt in zip(m.thetas, profile.lambda_min, m.weights):
            w.writerow([f"{th:.17g}", f"{lam:.17g}", f"{wt:.17g}"])


def hermiticity_defect(profile):
    mu = profile.mu
    return float(np.max(np.abs(mu - np.conj(np.swapaxes(mu, 1, 2)))))

