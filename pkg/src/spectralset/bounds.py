"""Spectral-constant bounds assembled from geometric and potential quantities."""
from dataclasses import dataclass, field

import numpy as np

from .core import DEFAULT_TOL, as_operator
from .errors import (ContractError, DomainError, InputError, NonSmoothBoundary,
                     SpectralSetError, StageError)
from .geometry import (SupportFn, boundary_mesh, chebyshev_radius, contains,
                       farthest_point_modulus, fit_support, min_radius_of_curvature, perimeter)
from .io import matrix_hash
from .polynomial import Polynomial
from .potential import (BoundaryFunction, cauchy_transform_boundary, gamma_one, m_total,
                        partition_error, potential_profile)
from .ranges import (QParameter, has_nonempty_interior, m_profile, numrange_body,
                     numrange_support, qrange_body)

#: inward offset of the evaluation points for a_lower, in local node spacings
A_LOWER_PULL = 3.0
FAMILY_MONOMIALS = 8
FAMILY_RANDOM = 16
FAMILY_DEGREE = 8

A_LOWER_NOTE = ("const_thm25 is computed with a_lower; the true constant uses "
                "a(Omega) >= a_lower")


def constant_thm22(gamma1, m):
    """1 + gamma/2 + sqrt(2 + gamma + gamma^2/4 + m)."""
    g = float(gamma1)
    rad = 2.0 + g + 0.25 * g * g + float(m)
    if not np.isfinite(rad) or rad < 0:
        raise DomainError(f"negative radicand {rad:.6g}: gamma1={g!r}, m={m!r} are inconsistent")
    return 1.0 + 0.5 * g + float(np.sqrt(rad))


def constant_thm25(gamma1, a):
    """1 + gamma/2 + sqrt((1 + gamma/2)^2 + a)."""
    if not np.isfinite(a) or a < 0:
        raise InputError(f"a must be a non-negative number, got {a!r}")
    b = 1.0 + 0.5 * float(gamma1)
    return b + float(np.sqrt(b * b + float(a)))


def conjecture_constant(q):
    """max(1, 2|q| / (1 + sqrt(1 - |q|^2)))."""
    q = q if isinstance(q, QParameter) else QParameter(q)
    qa = q.q_abs
    return max(1.0, 2.0 * qa / (1.0 + np.sqrt(max(1.0 - qa * qa, 0.0))))


def default_family(mesh, seed=0):
    """Monomials (z - c)^k, k = 1..8, about the Steiner point c, plus 16 seeded
    random polynomials of degree <= 8; all normalised to unit sup on the mesh."""
    c = mesh.body.steiner_point()
    out = [BoundaryFunction.from_polynomial(Polynomial.monomial(k, c), mesh, normalize=True)
           for k in range(1, FAMILY_MONOMIALS + 1)]
    rng = np.random.default_rng(seed)
    size = max(float(np.max(np.abs(mesh.points - c))), 1e-12)
    for _ in range(FAMILY_RANDOM):
        coeffs = rng.standard_normal(FAMILY_DEGREE + 1) + 1j * rng.standard_normal(FAMILY_DEGREE + 1)
        coeffs /= size ** np.arange(FAMILY_DEGREE + 1)
        out.append(BoundaryFunction.from_polynomial(Polynomial(coeffs, c), mesh, normalize=True))
    return out


def a_lower_estimate(mesh, family):
    """Lower estimate of a(Omega) over a finite family of boundary functions.

    The Cauchy transform g of conj(f) is evaluated at the nodes pulled
    inward by three local spacings; by the maximum principle the Chebyshev
    radius of these values does not exceed that of g on the boundary.
    """
    family = list(family)
    if not family:
        raise InputError("a_lower_estimate needs a non-empty family")
    z = mesh.points - A_LOWER_PULL * mesh.weights * mesh.normals
    best = 0.0
    for f in family:
        if f.sup_norm > 1.0 + 1e-12:
            raise InputError(f"family member has sup norm {f.sup_norm:.6g} > 1")
        g = cauchy_transform_boundary(f, mesh, z, dist_tol=float(np.min(mesh.weights)))
        best = max(best, chebyshev_radius(g))
    return float(best)


def _require_interior(A, tol):
    if not has_nonempty_interior(A, tol):
        raise ContractError("W(A) has empty interior (A is Hermitian up to a shift "
                            "and rotation, or scalar)")


def _c_factor(omega, w_body):
    return (1.0 / np.pi) / (farthest_point_modulus(omega) + 2.0 * farthest_point_modulus(w_body)) ** 2


def geometric_gamma_bound(A, omega, w_body, tol=DEFAULT_TOL):
    """-(1/pi) (w_Omega + 2 w_W)^-2 min rho_Omega (|dOmega| - |dW(A)|)."""
    A = as_operator(A)
    _require_interior(A, tol)
    if not contains(omega, w_body, tol):
        raise InputError("W(A) is not contained in Omega")
    gap = perimeter(omega) - perimeter(w_body)
    val = -_c_factor(omega, w_body) * min_radius_of_curvature(omega, tol) * gap
    return float(val) if val < 0 else 0.0


def m_integral(A, n=512, seed=0, tol=DEFAULT_TOL):
    """int_0^{2 pi} m(theta) d theta by the periodic trapezoidal rule."""
    th = np.arange(n) * (2.0 * np.pi / n)
    return float(np.sum(m_profile(A, th, seed, tol)) * (2.0 * np.pi / n))


def qrange_gamma_bound(A, q, omega_q, w_body, n=512, seed=0, tol=DEFAULT_TOL, m_int=None):
    """-C min rho_{Omega_q} t int m,  C = (1/pi) (w_{Omega_q} + 2 w_W)^-2.

    Returns 0 at |q| = 1, where t vanishes.
    """
    A = as_operator(A)
    q = q if isinstance(q, QParameter) else QParameter(q)
    _require_interior(A, tol)
    if q.t == 0.0:
        return 0.0
    if m_int is None:
        m_int = m_integral(A, n, seed, tol)
    val = -_c_factor(omega_q, w_body) * min_radius_of_curvature(omega_q, tol) * q.t * m_int
    return float(val) if val < 0 else 0.0


@dataclass(frozen=True)
class BoundsReport:
    gamma1: float
    m_total: float
    a_lower: float
    const_thm22: float
    const_thm25: float
    geo_gamma_bound: object = None
    qrange_gamma_bound: object = None
    conjecture_constant: object = None
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "gamma1": self.gamma1,
            "m_total": self.m_total,
            "a_lower": self.a_lower,
            "const_thm22": self.const_thm22,
            "const_thm25": self.const_thm25,
            "geo_gamma_bound": self.geo_gamma_bound,
            "qrange_gamma_bound": self.qrange_gamma_bound,
            "conjecture_constant": self.conjecture_constant,
            "meta": dict(self.meta),
        }


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except NonSmoothBoundary:
        raise
    except SpectralSetError as exc:
        raise StageError(name, exc) from exc


def _numrange_raw(A, n, degree, tol):
    # geometric bound only needs perimeter, w_W and containment, none of
    # which require a smooth W(A)
    th = np.arange(n) * (2.0 * np.pi / n)
    return fit_support(th, numrange_support(A, th), degree, tol, check=False)


def _omega_body(A, q, omega, grid_n, fourier_k, restarts, seed, tol):
    if isinstance(omega, SupportFn):
        return omega, "support"
    if isinstance(omega, tuple) and omega and omega[0] == "disk":
        _, c, r = omega
        return SupportFn.disk(complex(c), float(r)), f"disk:{complex(c).real:g},{complex(c).imag:g},{float(r):g}"
    if omega == "numrange":
        return numrange_body(A, grid_n, fourier_k, tol), "numrange"
    if omega == "qrange":
        if q is None:
            raise InputError("omega='qrange' needs q")
        return qrange_body(A, q, grid_n, fourier_k, restarts, seed, tol), "qrange"
    raise InputError(f"unknown omega specification {omega!r}")


def assemble_report(A, q=None, omega="numrange", grid_n=512, fourier_k=64, seed=0,
                    tol=DEFAULT_TOL, restarts=32):
    """Run ranges -> geometry -> potential -> bounds and collect every constant.

    ``omega`` is ``"numrange"``, ``"qrange"`` (needs ``q``), ``("disk", c, r)``
    or a SupportFn.  Upstream failures are re-raised as StageError carrying
    the stage name; NonSmoothBoundary passes through unchanged so callers can
    offer a smooth domain instead.
    """
    A = _stage("input", as_operator, A)
    qp = None if q is None else _stage("input", lambda: q if isinstance(q, QParameter) else QParameter(q))
    notes = []
    body, omega_label = _stage("ranges", _omega_body, A, qp, omega, grid_n, fourier_k,
                               restarts, seed, tol)
    interior = _stage("ranges", has_nonempty_interior, A, tol)
    w_body = None
    if interior:
        w_body = body if omega_label == "numrange" else _stage(
            "ranges", _numrange_raw, A, grid_n, fourier_k, tol)
    else:
        notes.append("W(A) has empty interior: geometric and q-range bounds undefined")

    mesh = _stage("geometry", boundary_mesh, body, grid_n, tol)
    prof = _stage("potential", potential_profile, A, mesh, tol)
    g1 = _stage("potential", gamma_one, prof, tol)
    m_tot = m_total(prof)
    perr = partition_error(prof)
    if perr > tol.quad_tol:
        notes.append(f"partition identity error {perr:.3e} exceeds quad_tol; refine the grid")

    family = _stage("bounds", default_family, mesh, seed)
    a_low = _stage("bounds", a_lower_estimate, mesh, family)
    c22 = _stage("bounds", constant_thm22, g1, m_tot)
    c25 = _stage("bounds", constant_thm25, g1, a_low)

    geo = None
    if w_body is not None:
        if contains(body, w_body, tol):
            geo = _stage("bounds", geometric_gamma_bound, A, body, w_body, tol)
        else:
            notes.append("W(A) is not contained in Omega: geometric bound not applicable")
    qrb = None
    conj = None
    if qp is not None:
        conj = conjecture_constant(qp)
        if omega_label == "qrange" and w_body is not None:
            qrb = _stage("bounds", qrange_gamma_bound, A, qp, body, w_body, grid_n, seed, tol)
        elif omega_label != "qrange":
            notes.append("q-range gamma bound applies only to omega='qrange'")

    meta = {
        "n": int(A.shape[0]),
        "q_abs": None if qp is None else qp.q_abs,
        "grid_n": int(grid_n),
        "fourier_k": int(fourier_k),
        "seed": int(seed),
        "tol": tol.as_dict(),
        "matrix_hash": matrix_hash(A),
        "omega": omega_label,
        "partition_error": perr,
        "a_family_size": len(family),
        "a_lower_is_lower_estimate": True,
        "const_thm25_note": A_LOWER_NOTE,
        "notes": notes,
    }
    return BoundsReport(g1, m_tot, a_low, c22, c25, geo, qrb, conj, meta)
