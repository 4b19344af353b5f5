"""Convex bodies stored as truncated Fourier series of their support function.

A body is described by

    h(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta)

and its boundary is parametrised by the outward normal angle,

    sigma(theta) = (h(theta) + i h'(theta)) e^{i theta},

so that d sigma / d theta = (h + h'') i e^{i theta}; h + h'' is the radius of
curvature and ds = (h + h'') d theta.  Everything about the boundary (points,
normals, weights, curvature) is derived from the coefficients, so h' and h''
are exact rather than finite-differenced.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .core import DEFAULT_TOL
from .errors import InputError, NonSmoothBoundary

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class SupportFn:
    a0: float
    a: np.ndarray
    b: np.ndarray
    fit_residual: float = 0.0

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.shape != b.shape or a.ndim != 1:
            raise InputError("cosine and sine coefficient arrays must be 1-D and equal length")
        if not (np.isfinite(self.a0) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise InputError("support function coefficients must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a0", float(self.a0))

    @property
    def degree(self):
        return self.a.size

    @classmethod
    def disk(cls, center=0.0, radius=1.0, degree=1):
        if radius <= 0:
            raise InputError("disk radius must be positive")
        c = complex(center)
        a = np.zeros(max(degree, 1))
        b = np.zeros(max(degree, 1))
        a[0], b[0] = c.real, c.imag
        return cls(radius, a, b)

    def _harmonics(self, theta):
        theta = np.asarray(theta, dtype=float)
        k = np.arange(1, self.degree + 1)
        kt = np.multiply.outer(theta, k)
        return k, np.cos(kt), np.sin(kt)

    def __call__(self, theta):
        _, c, s = self._harmonics(theta)
        return self.a0 + c @ self.a + s @ self.b

    def d1(self, theta):
        k, c, s = self._harmonics(theta)
        return c @ (k * self.b) - s @ (k * self.a)

    def d2(self, theta):
        k, c, s = self._harmonics(theta)
        return -(c @ (k ** 2 * self.a) + s @ (k ** 2 * self.b))

    def radius_of_curvature(self, theta):
        """h + h''."""
        k, c, s = self._harmonics(theta)
        w = 1.0 - k ** 2
        return self.a0 + c @ (w * self.a) + s @ (w * self.b)

    def point(self, theta):
        theta = np.asarray(theta, dtype=float)
        return (self(theta) + 1j * self.d1(theta)) * np.exp(1j * theta)

    def shifted(self, c):
        """Translate the body by the complex number ``c``."""
        a = self.a.copy()
        b = self.b.copy()
        a[0] += complex(c).real
        b[0] += complex(c).imag
        return SupportFn(self.a0, a, b, self.fit_residual)

    def smoothed(self, eps):
        """Minkowski sum with the disk of radius ``eps``."""
        return SupportFn(self.a0 + eps, self.a, self.b, self.fit_residual)

    def steiner_point(self):
        """(1/pi) int h(theta) e^{i theta} dtheta; the centre for disks."""
        if self.degree == 0:
            return 0j
        return complex(self.a[0], self.b[0])

    def coefficients(self):
        return {"a0": self.a0, "a": self.a.tolist(), "b": self.b.tolist()}


@dataclass(frozen=True, eq=False)
class BoundaryMesh:
    thetas: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    tangents: np.ndarray
    weights: np.ndarray
    rho: np.ndarray
    body: SupportFn = field(repr=False)

    @property
    def node_count(self):
        return self.thetas.size


def _check_grid(degree):
    return max(4096, 32 * (degree + 1))


def _min_curvature(h, n_check=None):
    n_check = n_check or _check_grid(h.degree)
    th = np.arange(n_check) * (TWO_PI / n_check)
    r = h.radius_of_curvature(th)
    i = int(np.argmin(r))
    return th[i], r[i], th, r


def check_smooth(h, tol=DEFAULT_TOL, hint=""):
    theta, value, _, _ = _min_curvature(h)
    if value <= tol.curvature_tol:
        raise NonSmoothBoundary(theta, value, hint)


def fit_support(thetas, values, degree, tol=DEFAULT_TOL, smoothing=0.0, check=True):
    """Least-squares trigonometric fit of support-function samples.

    ``smoothing > 0`` regularises a body with corners or flat sides: the
    coefficients get a Fejer taper (an average of rotated copies, so
    h + h'' stays non-negative) and a disk of radius ``smoothing`` is added
    (Minkowski sum).  Both change the body; the option is off by default.
    """
    thetas = np.asarray(thetas, dtype=float).ravel()
    values = np.asarray(values, dtype=float).ravel()
    if thetas.shape != values.shape:
        raise InputError("theta and value arrays differ in length")
    if degree < 0:
        raise InputError("degree must be non-negative")
    if thetas.size < 2 * degree + 1:
        raise InputError(f"need at least {2 * degree + 1} samples for degree {degree}")
    if np.unique(np.round(np.mod(thetas, TWO_PI), 14)).size != thetas.size:
        raise InputError("sample angles must be distinct modulo 2*pi")
    if not np.all(np.isfinite(values)):
        raise InputError("support samples must be finite")

    k = np.arange(1, degree + 1)
    kt = np.multiply.outer(thetas, k)
    X = np.hstack([np.ones((thetas.size, 1)), np.cos(kt), np.sin(kt)])
    coef, *_ = np.linalg.lstsq(X, values, rcond=None)
    resid = float(np.max(np.abs(X @ coef - values)))
    a, b = coef[1:degree + 1], coef[degree + 1:]
    if smoothing < 0:
        raise InputError("smoothing must be non-negative")
    if smoothing > 0:
        fejer = 1.0 - k / (degree + 1.0)
        a, b = a * fejer, b * fejer
    h = SupportFn(coef[0] + smoothing, a, b, resid)
    if check:
        check_smooth(h, tol, hint="support samples do not describe a smooth strictly convex body")
    return h


def support_from_function(func, degree=64, n=512, tol=DEFAULT_TOL, smoothing=0.0):
    """Sample ``func(theta)`` on a uniform grid of ``n`` angles and fit."""
    th = np.arange(n) * (TWO_PI / n)
    return fit_support(th, func(th), degree, tol, smoothing)


def boundary_mesh(h, n, tol=DEFAULT_TOL):
    if n < 16:
        raise InputError("boundary meshes need at least 16 nodes")
    check_smooth(h, tol)
    th = np.arange(n) * (TWO_PI / n)
    rho = h.radius_of_curvature(th)
    if np.any(rho <= 0):
        i = int(np.argmin(rho))
        raise NonSmoothBoundary(th[i], rho[i])
    e = np.exp(1j * th)
    return BoundaryMesh(
        thetas=th,
        points=h.point(th),
        normals=e,
        tangents=1j * e,
        weights=rho * (TWO_PI / n),
        rho=rho,
        body=h,
    )


def perimeter(h):
    return TWO_PI * h.a0


def _polish_extremum(f, th, vals, i, sign):
    n = th.size
    step = TWO_PI / n
    res = minimize_scalar(lambda t: -sign * f(t), bounds=(th[i] - step, th[i] + step),
                          method="bounded", options={"xatol": 1e-13})
    best = sign * float(-res.fun)
    if sign * best < sign * vals[i]:
        return float(vals[i])
    return best


def min_radius_of_curvature(h, tol=DEFAULT_TOL):
    _, _, th, r = _min_curvature(h)
    i = int(np.argmin(r))
    val = _polish_extremum(lambda t: float(h.radius_of_curvature(t)), th, r, i, -1.0)
    if val <= tol.curvature_tol:
        raise NonSmoothBoundary(th[i], val)
    return val


def farthest_point_modulus(h):
    """sup_{z in body} |z|.

    Equals max_theta h(theta), since sup|z| = sup_z sup_theta Re(z e^{-i theta}).
    """
    n = _check_grid(h.degree)
    th = np.arange(n) * (TWO_PI / n)
    v = h(th)
    i = int(np.argmax(v))
    return _polish_extremum(lambda t: float(h(t)), th, v, i, 1.0)


def inner_distance(h, z, n_check=None):
    """Signed distance from ``z`` to the boundary; positive inside."""
    n_check = n_check or _check_grid(h.degree)
    th = np.arange(n_check) * (TWO_PI / n_check)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    gap = h(th)[None, :] - np.real(np.multiply.outer(z, np.exp(-1j * th)))
    d = gap.min(axis=1)
    return d if d.size > 1 else float(d[0])


def contains(outer, inner, tol=DEFAULT_TOL, n_check=None):
    n_check = n_check or max(_check_grid(outer.degree), _check_grid(inner.degree))
    th = np.arange(n_check) * (TWO_PI / n_check)
    return bool(np.all(inner(th) <= outer(th) + tol.quad_tol))


# -- smallest enclosing circle -------------------------------------------

def _circle_two(p, q):
    c = 0.5 * (p + q)
    return c, abs(p - c)


def _circle_three(p, q, r):
    ax, ay = p.real, p.imag
    bx, by = q.real, q.imag
    cx, cy = r.real, r.imag
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0.0:
        # collinear: the widest pair decides
        return max((_circle_two(p, q), _circle_two(p, r), _circle_two(q, r)), key=lambda t: t[1])
    a2, b2, c2 = abs(p) ** 2, abs(q) ** 2, abs(r) ** 2
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    c = complex(ux, uy)
    return c, max(abs(p - c), abs(q - c), abs(r - c))


def min_enclosing_circle(points, seed=0):
    """Welzl's incremental algorithm in its iterative (move-to-front free) form.

    Returns ``(center, radius)``.  The input order is shuffled with a fixed
    seed so the expected running time is linear and the result deterministic.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    if pts.size == 0:
        raise InputError("chebyshev_radius needs at least one point")
    if not np.all(np.isfinite(pts)):
        raise InputError("points must be finite")
    pts = pts[np.random.default_rng(seed).permutation(pts.size)]
    scale = max(float(np.max(np.abs(pts - pts[0]))), 1e-300)
    slack = 1e-12 * scale

    def outside(c, r, p):
        return abs(p - c) > r + slack

    c, r = pts[0], 0.0
    for i in range(1, pts.size):
        if not outside(c, r, pts[i]):
            continue
        c, r = pts[i], 0.0
        for j in range(i):
            if not outside(c, r, pts[j]):
                continue
            c, r = _circle_two(pts[i], pts[j])
            for k in range(j):
                if outside(c, r, pts[k]):
                    c, r = _circle_three(pts[i], pts[j], pts[k])
    return complex(c), float(r)


def chebyshev_radius(points):
    """inf over complex lambda of max_k |z_k - lambda|."""
    return min_enclosing_circle(points)[1]
