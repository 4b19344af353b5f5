"""Independent reference computations used by the acceptance suite and tests.

None of these share code paths with the production routines they check:
perimeters come from inscribed polygons, q-range supports from a grid over
the sphere, singular values from characteristic polynomials, scalar
potentials from the Poisson kernel.
"""
import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc


def ellipse_perimeter_polygon(a, b, n=1_000_000):
    """Perimeter of the inscribed regular-parameter n-gon of x^2/a^2 + y^2/b^2 = 1."""
    t = np.linspace(0.0, 2.0 * np.pi, n + 1)
    x, y = a * np.cos(t), b * np.sin(t)
    return float(np.sum(np.hypot(np.diff(x), np.diff(y))))


def _qrange_value(A, x, theta, t):
    x = x / np.linalg.norm(x)
    Ax = A @ x
    a = np.vdot(x, Ax)
    d2 = max(np.vdot(Ax, Ax).real - abs(a) ** 2, 0.0)
    return (np.exp(-1j * theta) * a).real + t * np.sqrt(d2)


def _sphere_points(n, m, seed):
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    if n == 2:
        # x = (cos a, e^{i phi} sin a) covers the sphere modulo a global phase
        k = int(np.ceil(np.sqrt(m)))
        a, phi = np.meshgrid(np.linspace(0.0, np.pi / 2, k), np.linspace(0.0, 2 * np.pi, k,
                                                                          endpoint=False))
        a, phi = a.ravel(), phi.ravel()
        return np.stack([np.cos(a), np.exp(1j * phi) * np.sin(a)], axis=1)
    from scipy.stats import norm

    u = qmc.Sobol(2 * n, scramble=True, seed=seed).random(m)
    g = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    z = g[:, :n] + 1j * g[:, n:]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def qrange_support_bruteforce(A, q_abs, theta, m=4096, polish=8, seed=0):
    """h_{Omega_q}(theta) by grid search over the unit sphere plus local polish (n <= 3)."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if n > 3:
        raise ValueError("brute-force oracle is limited to n <= 3")
    t = np.sqrt(max(1.0 - q_abs * q_abs, 0.0)) / q_abs
    X = _sphere_points(n, m, seed)
    vals = np.array([_qrange_value(A, x, theta, t) for x in X])
    best = float(vals.max())
    for i in np.argsort(vals)[::-1][:polish]:
        x0 = np.concatenate([X[i].real, X[i].imag])
        res = minimize(lambda v: -_qrange_value(A, v[:n] + 1j * v[n:], theta, t), x0,
                       method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14,
                                                      "maxiter": 20000, "maxfev": 20000})
        best = max(best, float(-res.fun))
    return best


def scalar_mu(a, sigma):
    """Double-layer density of a scalar a at sigma on the unit circle: (1 + P(a, sigma)) / 2 pi."""
    sigma = np.asarray(sigma, dtype=complex)
    poisson = (1.0 - abs(a) ** 2) / np.abs(sigma - a) ** 2
    return (1.0 + poisson) / (2.0 * np.pi)


def norm_by_charpoly(M):
    """Largest singular value from the roots of the characteristic polynomial of M^* M."""
    M = np.asarray(M, dtype=complex)
    G = M.conj().T @ M
    roots = np.roots(np.poly(G))
    return float(np.sqrt(max(np.max(roots.real), 0.0)))


def poly_of_matrix_powers(coeffs, A, center=0.0):
    """sum_j c_j (A - c I)^j by explicit matrix powers."""
    A = np.asarray(A, dtype=complex)
    S = A - center * np.eye(A.shape[0])
    return sum(c * np.linalg.matrix_power(S, j) for j, c in enumerate(coeffs))


def disk_support(center, radius, theta):
    return radius + np.real(complex(center) * np.exp(-1j * np.asarray(theta)))


def geometric_bound_arith(w_omega, w_w, rho_min, per_omega, per_w):
    return -(1.0 / np.pi) * (1.0 / (w_omega + 2.0 * w_w)) ** 2 * rho_min * (per_omega - per_w)
