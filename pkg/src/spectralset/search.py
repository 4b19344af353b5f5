"""Empirical lower bounds on spectral constants via polynomial ratio maximisation."""
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.stats import unitary_group

from . import _kernels
from .bounds import conjecture_constant
from .core import DEFAULT_TOL, as_operator, is_scalar_multiple_of_identity
from .errors import ContractError, InputError
from .geometry import boundary_mesh
from .io import append_jsonl, matrix_hash, matrix_to_dict
from .polynomial import Polynomial
from .potential import check_spectrum_inside
from .ranges import QParameter, numrange_body, qrange_body

VIOLATION_TOL = 1e-6
NM_TOL = 1e-9
COARSE_TOL = 1e-6
COARSE_STRIDE = 4
MAX_FEV = 4000
ENSEMBLE_KINDS = ("ginibre", "jordan", "nilpotent_shift", "perturbed_normal")


@dataclass(frozen=True, eq=False)
class RatioResult:
    ratio: float
    polynomial: Polynomial
    matrix_hash: str
    omega: dict
    restarts_used: int
    converged: bool
    history: list = field(default_factory=list, repr=False)


@dataclass(frozen=True)
class TrialResult:
    max_ratio: float
    bound: float
    violation: bool
    result: RatioResult = field(repr=False)


def boundary_sup(p, mesh, refine=True):
    """max |p| on the boundary: node maximum, then a bounded 1-D search around it."""
    vals = np.abs(p(mesh.points))
    k = int(np.argmax(vals))
    best = float(vals[k])
    if not refine:
        return best
    step = mesh.thetas[1] - mesh.thetas[0]
    body = mesh.body
    res = minimize_scalar(lambda t: -abs(p(body.point(t))), method="bounded",
                          bounds=(mesh.thetas[k] - step, mesh.thetas[k] + step),
                          options={"xatol": 1e-12})
    return max(best, float(-res.fun))


def ratio(A, p, mesh, refine=True, check=True):
    """||p(A)|| / max_{boundary} |p|."""
    A = as_operator(A)
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    if p.is_zero():
        raise InputError("the zero polynomial has no ratio")
    if check:
        check_spectrum_inside(A, mesh.body)
    num = np.linalg.norm(p.of_matrix(A), 2)
    return float(num / boundary_sup(p, mesh, refine))


def maximize_ratio(A, mesh, degree=4, restarts=32, seed=0, free_constant=False):
    """Best ||p(A)|| / ||p||_boundary over polynomials of the given degree.

    Polynomials are expanded about the Steiner point c of the domain.  By
    default the constant term about c is pinned to zero, so constants are
    excluded and the warm start p = z - c is admissible; ``free_constant``
    searches the full space (whose ratio is always >= 1).  Each restart is a
    Nelder-Mead run in real/imaginary coefficient space.
    """
    A = as_operator(A)
    if degree < 1 or restarts < 1:
        raise InputError("need degree >= 1 and restarts >= 1")
    check_spectrum_inside(A, mesh.body)
    center = mesh.body.steiner_point()
    size = max(float(np.max(np.abs(mesh.points - center))), 1e-12)
    nfree = degree + 1 if free_constant else degree
    nfix = 0 if free_constant else 1
    rng = np.random.default_rng(seed)

    # ratios ignore a global phase, so the lowest free coefficient is kept real
    def to_poly(x):
        c = np.concatenate(([x[0]], x[1::2] + 1j * x[2::2]))
        return Polynomial(np.concatenate((np.zeros(nfix, complex), c)), center)

    def pack(c):
        x = np.empty(2 * nfree - 1)
        x[0] = abs(c[0])
        c = c[1:] * (np.conj(c[0]) / abs(c[0]) if c[0] != 0 else 1.0)
        x[1::2], x[2::2] = c.real, c.imag
        return x

    powers = np.arange(nfree) + nfix
    warm_c = np.zeros(nfree, dtype=complex)
    warm_c[1 if free_constant else 0] = 1.0 / size
    warm = pack(warm_c)
    sub = mesh.points[::COARSE_STRIDE]
    best = None
    history = []
    for r in range(restarts):
        if r == 0:
            x0 = warm
        else:
            z = rng.standard_normal(nfree) + 1j * rng.standard_normal(nfree)
            x0 = pack(z / size ** powers)
        x0 = x0 / np.linalg.norm(x0)
        # coarse pass on a node subset, then a polish on every node
        x1, _, _, _ = _kernels.ratio_simplex(A, center, sub, nfix, True, x0,
                                             COARSE_TOL, COARSE_TOL, MAX_FEV)
        x2, _, _, conv = _kernels.ratio_simplex(A, center, mesh.points, nfix, True,
                                                x1 / np.linalg.norm(x1), NM_TOL, NM_TOL,
                                                MAX_FEV)
        p = to_poly(x2 / np.linalg.norm(x2))
        val = ratio(A, p, mesh, check=False) if not p.is_zero() else 0.0
        history.append(val)
        if best is None or val > best[0]:
            best = (val, p, conv)
    warm_ps = [to_poly(warm)]
    if free_constant:
        warm_ps.append(Polynomial([1.0], center))
    for warm_p in warm_ps:
        warm_val = ratio(A, warm_p, mesh, check=False)
        if warm_val > best[0]:
            best = (warm_val, warm_p, best[2])
    val, p, conv = best
    p = p.scaled(1.0 / boundary_sup(p, mesh))
    return RatioResult(val, p, matrix_hash(A), {"kind": "mesh", "nodes": mesh.node_count,
                                                "center": [center.real, center.imag]},
                       restarts, conv, history)


def omega_q_mesh(A, q, grid_n=512, fourier_k=64, restarts=32, seed=0, tol=DEFAULT_TOL):
    q = q if isinstance(q, QParameter) else QParameter(q)
    if q.t == 0.0:
        body = numrange_body(A, grid_n, fourier_k, tol)
    else:
        body = qrange_body(A, q, grid_n, fourier_k, restarts, seed, tol)
    return boundary_mesh(body, grid_n, tol)


def finding_record(A, q, degree, result, bound, violation, seed):
    coeffs = result.polynomial.to_monomial()
    return {
        "matrix": matrix_to_dict(A),
        "q_abs": float(abs(complex(q.q if isinstance(q, QParameter) else q))),
        "degree": int(degree),
        "coeffs": [[float(c.real), float(c.imag)] for c in coeffs],
        "ratio": float(result.ratio),
        "bound": float(bound),
        "violation": bool(violation),
        "seed": int(seed),
    }


def conjecture_trial(A, q, degree=4, restarts=32, seed=0, grid_n=512, fourier_k=64,
                     tol=DEFAULT_TOL, findings_path=None, log_all=False):
    """Compare the best observed ratio on Omega_q with the conjectured constant.

    A violation is a finding, not an error: it is appended to ``findings_path``
    (when given) together with everything needed to reproduce it.
    """
    A = as_operator(A)
    if is_scalar_multiple_of_identity(A, tol):
        raise ContractError("conjecture trials require A != lambda I")
    q = q if isinstance(q, QParameter) else QParameter(q)
    mesh = omega_q_mesh(A, q, grid_n, fourier_k, 32, seed, tol)
    res = maximize_ratio(A, mesh, degree, restarts, seed)
    bound = conjecture_constant(q)
    violation = res.ratio > bound + VIOLATION_TOL
    if findings_path is not None and (violation or log_all):
        append_jsonl(findings_path, finding_record(A, q, degree, res, bound, violation, seed))
    return TrialResult(res.ratio, bound, bool(violation), res)


# -- random ensembles -----------------------------------------------------

def ginibre(n, seed):
    """i.i.d. complex Gaussian entries with E|a_ij|^2 = 1/n."""
    rng = np.random.default_rng(seed)
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0 * n)


def jordan(n, eigenvalue=0.0, offdiag=1.0):
    return complex(eigenvalue) * np.eye(n, dtype=complex) + offdiag * np.eye(n, k=1, dtype=complex)


def nilpotent_shift(n, seed, low=0.5, high=2.0):
    """Weighted shift with weights uniform on [low, high)."""
    rng = np.random.default_rng(seed)
    return np.diag(rng.uniform(low, high, n - 1).astype(complex), k=1)


def perturbed_normal(n, seed, eps=0.1):
    """Returns ``(A, N)`` with N normal and ||A - N|| = eps."""
    rng = np.random.default_rng(seed)
    lam = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    U = unitary_group.rvs(n, random_state=rng) if n > 1 else np.ones((1, 1), complex)
    N = (U * lam) @ U.conj().T
    E = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    En = np.linalg.norm(E, 2)
    return N + (eps / En) * E if En > 0 else N.copy(), N


def ensembles(kind, n, seed=0, **params):
    """Deterministic random matrix for ``(kind, n, seed)``."""
    if int(n) < 1:
        raise InputError("n must be >= 1")
    n = int(n)
    if kind == "ginibre":
        return ginibre(n, seed)
    if kind == "jordan":
        return jordan(n, params.get("eigenvalue", 0.0), params.get("offdiag", 1.0))
    if kind == "nilpotent_shift":
        return nilpotent_shift(n, seed, params.get("low", 0.5), params.get("high", 2.0))
    if kind == "perturbed_normal":
        return perturbed_normal(n, seed, params.get("eps", 0.1))[0]
    raise InputError(f"unknown ensemble {kind!r}; choose from {', '.join(ENSEMBLE_KINDS)}")


def random_unitary(n, seed):
    return unitary_group.rvs(n, random_state=np.random.default_rng(seed)) if n > 1 \
        else np.ones((1, 1), complex)
