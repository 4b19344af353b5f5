"""Support functions of the numerical range W(A) and of the scaled q-numerical range.

For 0 < |q| <= 1 put t = sqrt(1 - |q|^2) / |q|.  The scaled range
Omega_q = W_q(A) / q has support function

    h_q(theta) = sup_{|x|=1} Re <e^{-i theta} A x, x> + t * sqrt(|Ax|^2 - |<Ax, x>|^2),

which only depends on |q|.  At t = 0 this is the numerical range, whose
support function is the top eigenvalue of the Hermitian part of
e^{-i theta} A.
"""
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .core import DEFAULT_TOL, as_operator, is_scalar_multiple_of_identity
from .errors import ContractError, InputError, InternalConsistencyError, NonSmoothBoundary
from .geometry import TWO_PI, fit_support, perimeter

#: eigenvalues this close to lambda_max are one eigenspace
EIG_GAP_TOL = 1e-9
DEFAULT_RESTARTS = 32


@dataclass(frozen=True)
class QParameter:
    q: complex

    def __post_init__(self):
        q = complex(self.q)
        if not np.isfinite(q) or not 0.0 < abs(q) <= 1.0:
            raise InputError(f"need 0 < |q| <= 1, got {self.q!r}")
        object.__setattr__(self, "q", q)

    @classmethod
    def from_t(cls, t):
        if t < 0:
            raise InputError("t must be non-negative")
        return cls(1.0 / np.sqrt(1.0 + t * t))

    @property
    def q_abs(self):
        return abs(self.q)

    @property
    def t(self):
        qa = self.q_abs
        return float(np.sqrt(max(1.0 - qa * qa, 0.0)) / qa)


def _as_q(q):
    return q if isinstance(q, QParameter) else QParameter(q)


@dataclass(frozen=True, eq=False)
class MaximizerSet:
    theta: float
    eigen_basis: np.ndarray  # (n, d), orthonormal columns
    eigenvalue: float
    multiplicity: int


def _grid(n):
    return np.arange(n) * (TWO_PI / n)


def _hermitian_parts(A, thetas):
    B = np.exp(-1j * np.asarray(thetas, dtype=float))[:, None, None] * A
    return 0.5 * (B + np.conj(np.swapaxes(B, -1, -2)))


def numrange_support(A, theta):
    """h_{W(A)}(e^{i theta}) = lambda_max(Re(e^{-i theta} A))."""
    A = as_operator(A)
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    vals = np.linalg.eigvalsh(_hermitian_parts(A, th))[:, -1]
    return vals if np.ndim(theta) else float(vals[0])


def numrange_width_min(A):
    """Smallest width of W(A) over all directions; zero iff W(A) has empty interior."""
    A = as_operator(A)

    def width(t):
        w = np.linalg.eigvalsh(_hermitian_parts(A, np.atleast_1d(t)))
        return w[:, -1] - w[:, 0]

    th = _grid(720) / 2.0  # widths are pi-periodic
    w = width(th)
    i = int(np.argmin(w))
    step = th[1] - th[0]
    res = minimize_scalar(lambda t: float(width(t)[0]), bounds=(th[i] - step, th[i] + step),
                          method="bounded", options={"xatol": 1e-12})
    return float(min(res.fun, w[i]))


def has_nonempty_interior(A, tol=DEFAULT_TOL):
    A = as_operator(A)
    scale = max(np.linalg.norm(A, 2), 1.0)
    return numrange_width_min(A) > tol.eig_tol * scale


def numrange_body(A, n=512, degree=64, tol=DEFAULT_TOL, smoothing=0.0):
    """Fitted support function of W(A); NonSmoothBoundary for polygonal or degenerate W(A)."""
    A = as_operator(A)
    th = _grid(n)
    try:
        return fit_support(th, numrange_support(A, th), degree, tol, smoothing)
    except NonSmoothBoundary as exc:
        raise NonSmoothBoundary(
            exc.theta, exc.value,
            "W(A) has a flat facet, corner or empty interior (normal or Hermitian-like A?); "
            "supply a smooth domain or enable Minkowski smoothing") from None


def maximizer_set(A, theta, eps=0.0):
    """Top eigenspace of Re(e^{-i theta} A): eigenvalues >= lambda_max - eps."""
    if eps < 0:
        raise InputError("eps must be non-negative")
    A = as_operator(A)
    w, V = np.linalg.eigh(_hermitian_parts(A, [theta])[0])
    keep = w >= w[-1] - eps
    return MaximizerSet(float(theta), V[:, keep], float(w[-1]), int(keep.sum()))


def nonnormality_defect(A, x):
    """sqrt(|Ax|^2 - |<Ax, x>|^2) for unit x (rows of x are vectors).

    Computed as |Ax - <Ax, x> x|, which is the same number without the
    cancellation.
    """
    x = np.asarray(x)
    Ax = x @ A.T
    a = np.einsum("...i,...i->...", np.conj(x), Ax)
    return np.linalg.norm(Ax - a[..., None] * x, axis=-1)


def _random_unit(rng, shape):
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def m_profile(A, thetas, seed=0, tol=DEFAULT_TOL):
    """m(theta) on an array of angles."""
    A = as_operator(A)
    if is_scalar_multiple_of_identity(A, tol):
        warnings.warn("A is a scalar multiple of the identity; m(theta) vanishes identically",
                      stacklevel=2)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    w, V = np.linalg.eigh(_hermitian_parts(A, thetas))
    out = np.empty(thetas.size)
    top = V[:, :, -1]
    out[:] = nonnormality_defect(A, top)
    mult = (w >= w[:, -1:] - EIG_GAP_TOL * np.maximum(1.0, np.abs(w[:, -1:]))).sum(axis=1)
    for i in np.flatnonzero(mult > 1):
        d = int(mult[i])
        Vd = V[i][:, -d:]
        rng = np.random.default_rng([seed, i])
        Y0 = _random_unit(rng, (1, 8 * d, d))
        Y0[0, :d] = np.eye(d)
        vals, _ = _kernels.sphere_ascent(np.zeros((1, d, d)), A @ Vd, Vd, 1.0, Y0)
        out[i] = max(float(vals.max()), out[i])
    return out


def m_theta(A, theta, seed=0, tol=DEFAULT_TOL):
    """Non-normality defect at the boundary point of W(A) with outward normal e^{i theta}.

    With a simple top eigenvalue this is the defect of the unit eigenvector;
    otherwise the defect is maximised over the top eigenspace by multi-start
    ascent (8 starts per dimension).
    """
    return float(m_profile(A, [theta], seed, tol)[0])


def _qrange_starts(Hs, restarts, seed):
    B, n, _ = Hs.shape
    _, V = np.linalg.eigh(Hs)
    n_eig = min(n, restarts)
    X0 = np.empty((B, restarts, n), dtype=np.complex128)
    # eigenvectors first, top one leading
    X0[:, :n_eig, :] = np.swapaxes(V[:, :, ::-1], 1, 2)[:, :n_eig, :]
    if restarts > n_eig:
        rng = np.random.default_rng(seed)
        X0[:, n_eig:, :] = _random_unit(rng, (restarts - n_eig, n))[None, :, :]
    return X0


def qrange_support_grid(A, q, thetas, restarts=DEFAULT_RESTARTS, seed=0, tol=DEFAULT_TOL,
                        return_maximizers=False):
    """Vectorised ``qrange_support`` over many angles."""
    A = as_operator(A)
    q = _as_q(q)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    if restarts < 1:
        raise InputError("restarts must be >= 1")
    Hs = _hermitian_parts(A, thetas)
    base = np.linalg.eigvalsh(Hs)[:, -1]
    t = q.t
    if t == 0.0:
        if return_maximizers:
            return base, np.linalg.eigh(Hs)[1][:, :, -1]
        return base
    X0 = _qrange_starts(Hs, restarts, seed)
    eye = np.eye(A.shape[0], dtype=np.complex128)
    F, X = _kernels.sphere_ascent(Hs, A, eye, t, X0)
    best = np.argmax(F, axis=1)
    vals = F[np.arange(thetas.size), best]
    xbest = X[np.arange(thetas.size), best]
    scale = np.linalg.norm(A, 2) * (1.0 + t)
    if np.any(vals < base - tol.quad_tol * max(scale, 1.0)):
        raise InternalConsistencyError("q-range support fell below the numerical-range support")
    _warn_unconverged(Hs, A, eye, t, xbest, scale)
    if return_maximizers:
        return vals, xbest
    return vals


def _warn_unconverged(Hs, M, V, t, X, scale):
    f, g = _kernels._objective_numpy(Hs, M, V, t, X)
    gr = _kernels._tangent(X, g)
    worst = float(np.max(np.linalg.norm(gr, axis=1)))
    if worst > 1e-6 * max(scale, 1.0):
        warnings.warn(f"q-range ascent did not converge (tangent gradient {worst:.2e}); "
                      "best value kept", RuntimeWarning, stacklevel=3)


def qrange_support(A, q, theta, restarts=DEFAULT_RESTARTS, seed=0, tol=DEFAULT_TOL):
    """Support function of Omega_q at angle ``theta``.

    Multi-start projected gradient ascent on the unit sphere; the returned
    value is attained at a unit vector, hence a lower bound of the supremum.
    """
    return float(qrange_support_grid(A, q, [theta], restarts, seed, tol)[0])


def qrange_body(A, q, n=512, degree=64, restarts=DEFAULT_RESTARTS, seed=0, tol=DEFAULT_TOL):
    """Fitted support function of Omega_q = W_q(A) / q."""
    A = as_operator(A)
    if is_scalar_multiple_of_identity(A, tol):
        raise ContractError("the q-numerical range routines require A != lambda I")
    th = _grid(n)
    vals = qrange_support_grid(A, q, th, restarts, seed, tol)
    body = fit_support(th, vals, degree, tol)
    return body


def perimeter_derivative_check(A, t_step=1e-3, n=512, degree=64, restarts=DEFAULT_RESTARTS,
                               seed=0, tol=DEFAULT_TOL, richardson=False):
    """Compare int m(theta) d theta with the one-sided slope of |d Omega(t)| at t = 0.

    Returns ``(lhs, rhs)``.  With ``richardson=True`` the slope is extrapolated
    from steps ``10 * t_step`` and ``t_step``.
    """
    A = as_operator(A)
    w_body = numrange_body(A, n, degree, tol)
    th = _grid(n)
    lhs = float(np.sum(m_profile(A, th, seed, tol)) * (TWO_PI / n))

    def slope(ts):
        body = qrange_body(A, QParameter.from_t(ts), n, degree, restarts, seed, tol)
        return (perimeter(body) - perimeter(w_body)) / ts

    rhs = slope(t_step)
    if richardson:
        rhs = (10.0 * rhs - slope(10.0 * t_step)) / 9.0
    return lhs, float(rhs)
