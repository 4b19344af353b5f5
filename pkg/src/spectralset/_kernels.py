"""Hot inner loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports and ``SPECTRALSET_NUMBA`` is not
set to ``0``/``false``.  Both paths run the same algorithm step for step, so
results agree to rounding; ``benchmarks/bench_kernels.py`` times them.

Kernels
-------
sphere_ascent
    Projected (Riemannian) gradient ascent on the unit sphere of C^n for

        F(y) = Re <H y, y> + t * |M y - alpha V y|,   alpha = <M y, V y>,

    with H Hermitian and V an isometry (V = I for the q-range, an
    eigenspace basis for m(theta)).  For unit y the second term equals
    sqrt(|My|^2 - |alpha|^2), but the residual form avoids the cancellation
    that would put sqrt(eps) noise into nearly normal directions.  One H per
    batch row, each row carrying several starting vectors.
poly_eval
    Matrix Horner evaluation of a polynomial in (z - c) together with its
    modulus at boundary nodes.
ratio_simplex
    Adaptive Nelder-Mead minimisation of -||p(A)|| / max_k |p(sigma_k)| over
    real coefficient vectors.  The numba version is a line-by-line port of
    scipy's ``_minimize_neldermead``; the numpy path calls scipy itself.
"""
import os

import numpy as np

try:
    import numba
    from numba import njit, prange
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _env_flag(name, default=True):
    v = os.environ.get(name)
    if v is None:
        return default
    return v.strip().lower() not in ("0", "false", "no", "off", "")


USE_NUMBA = numba is not None and _env_flag("SPECTRALSET_NUMBA")

if numba is not None and "NUMBA_THREADING_LAYER" not in os.environ:
    # try OpenMP before TBB; old TBB builds only produce a warning
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]

if numba is not None and "SPECTRALSET_THREADS" in os.environ:
    try:
        numba.set_num_threads(max(1, min(int(os.environ["SPECTRALSET_THREADS"]),
                                         numba.config.NUMBA_NUM_THREADS)))
    except ValueError:
        pass

ARMIJO = 1e-4
STEP_MIN = 1e-18
STEP_MAX = 1e3
# objective error is quadratic in the gradient norm, so 1e-9 relative is ample
GTOL = 1e-9
MAXITER = 2000
NM_NONZDELT = 0.05
NM_ZDELT = 0.00025
# consecutive accepted steps gaining less than this (relative) end a run
STALL_REL = 1e-15
STALL_MAX = 3


# -- numpy path ----------------------------------------------------------

def _objective_numpy(H, M, V, t, X):
    # X: (B, d) unit rows; H: (B, d, d); M, V: (m, d)
    HX = np.einsum("bij,bj->bi", H, X)
    MX = X @ M.T
    VX = X @ V.T
    quad = np.einsum("bi,bi->b", X.conj(), HX).real
    alpha = np.einsum("bi,bi->b", VX.conj(), MX)
    R = MX - alpha[:, None] * VX
    d = np.linalg.norm(R, axis=1)
    f = quad + t * d
    grad = 2.0 * HX
    safe = d > 1e-300
    if t != 0.0 and np.any(safe):
        # radial parts are dropped by the tangent projection
        gd = R @ M.conj() - alpha.conj()[:, None] * (R @ V.conj())
        coef = np.where(safe, t / np.where(safe, d, 1.0), 0.0)
        grad = grad + coef[:, None] * gd
    return f, grad


def _tangent(X, grad):
    return grad - np.einsum("mi,mi->m", X.conj(), grad).real[:, None] * X


def sphere_ascent_numpy(H, M, V, t, X0, maxiter=MAXITER, gtol=GTOL):
    B, R, n = X0.shape
    Hb = np.repeat(np.ascontiguousarray(H), R, axis=0)
    X = X0.reshape(B * R, n).astype(np.complex128, copy=True)
    X /= np.linalg.norm(X, axis=1)[:, None]
    scale = np.repeat(np.linalg.norm(H, axis=(1, 2)), R) + abs(t) * np.linalg.norm(M) ** 2 + 1.0
    f, grad = _objective_numpy(Hb, M, V, t, X)
    gr = _tangent(X, grad)
    s = 1.0 / scale
    stall = np.zeros(B * R, dtype=np.int64)
    active = np.ones(B * R, dtype=bool)
    for _ in range(maxiter):
        gn2 = np.einsum("mi,mi->m", gr.conj(), gr).real
        active &= (np.sqrt(gn2) >= gtol * scale) & (s >= STEP_MIN) & (stall < STALL_MAX)
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        Y = X[idx] + s[idx, None] * gr[idx]
        Y /= np.linalg.norm(Y, axis=1)[:, None]
        fy, gy = _objective_numpy(Hb[idx], M, V, t, Y)
        ok = fy >= f[idx] + ARMIJO * s[idx] * gn2[idx]
        acc = idx[ok]
        gnew = _tangent(Y[ok], gy[ok])
        dx = Y[ok] - X[acc]
        den = -np.einsum("mi,mi->m", dx.conj(), gnew - gr[acc]).real
        num = np.einsum("mi,mi->m", dx.conj(), dx).real
        bb = np.where(den > 0, num / np.where(den > 0, den, 1.0), 2.0 * s[acc])
        tiny = fy[ok] - f[acc] <= STALL_REL * (np.abs(fy[ok]) + scale[acc])
        stall[acc] = np.where(tiny, stall[acc] + 1, 0)
        X[acc] = Y[ok]
        f[acc] = fy[ok]
        gr[acc] = gnew
        s[acc] = np.minimum(bb, STEP_MAX / scale[acc])
        s[idx[~ok]] *= 0.5
    return f.reshape(B, R), X.reshape(B, R, n)


def _unpack(x, nfix, phase_fixed):
    # x holds (re c_nfix, [im c_nfix], re c_{nfix+1}, im c_{nfix+1}, ...)
    if phase_fixed:
        x = np.concatenate(([x[0], 0.0], x[1:]))
    coeffs = np.zeros(x.size // 2 + nfix, dtype=np.complex128)
    coeffs[nfix:] = x[0::2] + 1j * x[1::2]
    return coeffs


def ratio_objective_numpy(A, center, sigmas, nfix, phase_fixed):
    def f(x):
        nrm, w = poly_eval_numpy(A, center, _unpack(np.asarray(x), nfix, phase_fixed), sigmas)
        den = w.max()
        return -nrm / den if den > 0 else 0.0
    return f


def ratio_simplex_numpy(A, center, sigmas, nfix, phase_fixed, x0, xatol, fatol, maxfev):
    from scipy.optimize import minimize

    f = ratio_objective_numpy(A, center, sigmas, nfix, phase_fixed)
    res = minimize(f, x0, method="Nelder-Mead",
                   options={"xatol": xatol, "fatol": fatol, "adaptive": True,
                            "maxiter": maxfev, "maxfev": maxfev})
    return res.x, float(res.fun), int(res.nfev), bool(res.success)


def poly_eval_numpy(A, center, coeffs, sigmas):
    n = A.shape[0]
    S = A - center * np.eye(n)
    P = coeffs[-1] * np.eye(n, dtype=np.complex128)
    w = np.full(sigmas.shape, coeffs[-1], dtype=np.complex128)
    zs = sigmas - center
    for c in coeffs[-2::-1]:
        P = P @ S + c * np.eye(n)
        w = w * zs + c
    return np.linalg.norm(P, 2), np.abs(w)


# -- numba path ----------------------------------------------------------

if numba is not None:

    @njit(cache=True)
    def _obj_nb(H, M, V, t, x, grad):
        d = x.size
        m = M.shape[0]
        quad = 0.0
        for i in range(d):
            a = 0j
            for j in range(d):
                a += H[i, j] * x[j]
            grad[i] = 2.0 * a
            quad += (x[i].conjugate() * a).real
        Mx = np.zeros(m, np.complex128)
        Vx = np.zeros(m, np.complex128)
        for i in range(m):
            for j in range(d):
                Mx[i] += M[i, j] * x[j]
                Vx[i] += V[i, j] * x[j]
        alpha = 0j
        for i in range(m):
            alpha += Vx[i].conjugate() * Mx[i]
        r = Mx - alpha * Vx
        nr = 0.0
        for i in range(m):
            nr += r[i].real ** 2 + r[i].imag ** 2
        nr = np.sqrt(nr)
        if t != 0.0 and nr > 1e-300:
            coef = t / nr
            ac = alpha.conjugate()
            for j in range(d):
                a = 0j
                for i in range(m):
                    a += (M[i, j].conjugate() - ac * V[i, j].conjugate()) * r[i]
                grad[j] += coef * a
        return quad + t * nr

    @njit(cache=True)
    def _tangent_nb(x, grad, out):
        p = 0.0
        for i in range(x.size):
            p += (x[i].conjugate() * grad[i]).real
        gn2 = 0.0
        for i in range(x.size):
            out[i] = grad[i] - p * x[i]
            gn2 += out[i].real ** 2 + out[i].imag ** 2
        return gn2

    @njit(cache=True)
    def _ascent_one(H, M, V, t, x, scale, maxiter, gtol):
        n = x.size
        nrm = np.sqrt(np.sum(x.real ** 2 + x.imag ** 2))
        x = x / nrm
        grad = np.empty(n, np.complex128)
        gr = np.empty(n, np.complex128)
        y = np.empty(n, np.complex128)
        gy = np.empty(n, np.complex128)
        gnew = np.empty(n, np.complex128)
        f = _obj_nb(H, M, V, t, x, grad)
        gn2 = _tangent_nb(x, grad, gr)
        s = 1.0 / scale
        stall = 0
        for _ in range(maxiter):
            if np.sqrt(gn2) < gtol * scale or s < STEP_MIN or stall >= STALL_MAX:
                break
            ny = 0.0
            for i in range(n):
                y[i] = x[i] + s * gr[i]
                ny += y[i].real ** 2 + y[i].imag ** 2
            ny = np.sqrt(ny)
            for i in range(n):
                y[i] /= ny
            fy = _obj_nb(H, M, V, t, y, gy)
            if fy >= f + ARMIJO * s * gn2:
                gn2_new = _tangent_nb(y, gy, gnew)
                num = 0.0
                den = 0.0
                for i in range(n):
                    dx = y[i] - x[i]
                    num += dx.real ** 2 + dx.imag ** 2
                    den -= (dx.conjugate() * (gnew[i] - gr[i])).real
                if fy - f <= STALL_REL * (abs(fy) + scale):
                    stall += 1
                else:
                    stall = 0
                for i in range(n):
                    x[i] = y[i]
                    gr[i] = gnew[i]
                f = fy
                gn2 = gn2_new
                if den > 0.0:
                    s = num / den
                else:
                    s = 2.0 * s
                s = min(s, STEP_MAX / scale)
            else:
                s *= 0.5
        return f, x

    @njit(cache=True, parallel=True)
    def sphere_ascent_numba(H, M, V, t, X0, maxiter=MAXITER, gtol=GTOL):
        B, R, n = X0.shape
        F = np.empty((B, R))
        X = np.empty((B, R, n), np.complex128)
        gnorm = np.sum(M.real ** 2 + M.imag ** 2)
        for m in prange(B * R):
            b = m // R
            r = m % R
            hn = np.sqrt(np.sum(H[b].real ** 2 + H[b].imag ** 2))
            scale = hn + abs(t) * gnorm + 1.0
            f, x = _ascent_one(H[b], M, V, t, X0[b, r].copy(), scale, maxiter, gtol)
            F[b, r] = f
            X[b, r] = x
        return F, X

    @njit(cache=True)
    def poly_eval_numba(A, center, coeffs, sigmas):
        n = A.shape[0]
        S = A.copy()
        for i in range(n):
            S[i, i] -= center
        P = np.zeros((n, n), np.complex128)
        for i in range(n):
            P[i, i] = coeffs[-1]
        w = np.empty(sigmas.size, np.complex128)
        for k in range(sigmas.size):
            w[k] = coeffs[-1]
        for j in range(coeffs.size - 2, -1, -1):
            P = P @ S
            c = coeffs[j]
            for i in range(n):
                P[i, i] += c
            for k in range(sigmas.size):
                w[k] = w[k] * (sigmas[k] - center) + c
        # the top eigenvalue of P^* P is perfectly conditioned, so this loses
        # nothing against an SVD and is about twice as fast for small n
        G = P.conj().T @ P
        return np.sqrt(max(np.linalg.eigvalsh(G)[-1], 0.0)), np.abs(w)

    @njit(cache=True)
    def _ratio_nb(A, center, sigmas, nfix, phase_fixed, x):
        if phase_fixed:
            m = (x.size + 1) // 2
        else:
            m = x.size // 2
        coeffs = np.zeros(m + nfix, np.complex128)
        for j in range(m):
            if phase_fixed:
                coeffs[nfix + j] = x[0] if j == 0 else x[2 * j - 1] + 1j * x[2 * j]
            else:
                coeffs[nfix + j] = x[2 * j] + 1j * x[2 * j + 1]
        nrm, w = poly_eval_numba(A, center, coeffs, sigmas)
        den = w.max()
        if den > 0.0:
            return -nrm / den
        return 0.0

    @njit(cache=True)
    def _sort_simplex(sim, fsim):
        ind = np.argsort(fsim)
        return sim[ind].copy(), fsim[ind].copy()

    @njit(cache=True)
    def ratio_simplex_numba(A, center, sigmas, nfix, phase_fixed, x0, xatol, fatol, maxfev):
        N = x0.size
        dim = float(N)
        rho = 1.0
        chi = 1.0 + 2.0 / dim
        psi = 0.75 - 1.0 / (2.0 * dim)
        sigma = 1.0 - 1.0 / dim
        sim = np.empty((N + 1, N))
        sim[0] = x0
        for k in range(N):
            y = x0.copy()
            if y[k] != 0.0:
                y[k] = (1.0 + NM_NONZDELT) * y[k]
            else:
                y[k] = NM_ZDELT
            sim[k + 1] = y
        fsim = np.empty(N + 1)
        for k in range(N + 1):
            fsim[k] = _ratio_nb(A, center, sigmas, nfix, phase_fixed, sim[k])
        nfev = N + 1
        sim, fsim = _sort_simplex(sim, fsim)
        converged = False
        while nfev < maxfev:
            if (np.max(np.abs(sim[1:] - sim[0])) <= xatol
                    and np.max(np.abs(fsim[0] - fsim[1:])) <= fatol):
                converged = True
                break
            xbar = np.zeros(N)
            for j in range(N):
                xbar += sim[j]
            xbar /= N
            xr = (1.0 + rho) * xbar - rho * sim[-1]
            fxr = _ratio_nb(A, center, sigmas, nfix, phase_fixed, xr)
            nfev += 1
            shrink = False
            if fxr < fsim[0]:
                xe = (1.0 + rho * chi) * xbar - rho * chi * sim[-1]
                fxe = _ratio_nb(A, center, sigmas, nfix, phase_fixed, xe)
                nfev += 1
                if fxe < fxr:
                    sim[-1] = xe
                    fsim[-1] = fxe
                else:
                    sim[-1] = xr
                    fsim[-1] = fxr
            elif fxr < fsim[-2]:
                sim[-1] = xr
                fsim[-1] = fxr
            else:
                if fxr < fsim[-1]:
                    xc = (1.0 + psi * rho) * xbar - psi * rho * sim[-1]
                    fxc = _ratio_nb(A, center, sigmas, nfix, phase_fixed, xc)
                    nfev += 1
                    if fxc <= fxr:
                        sim[-1] = xc
                        fsim[-1] = fxc
                    else:
                        shrink = True
                else:
                    xcc = (1.0 - psi) * xbar + psi * sim[-1]
                    fxcc = _ratio_nb(A, center, sigmas, nfix, phase_fixed, xcc)
                    nfev += 1
                    if fxcc < fsim[-1]:
                        sim[-1] = xcc
                        fsim[-1] = fxcc
                    else:
                        shrink = True
                if shrink:
                    for j in range(1, N + 1):
                        sim[j] = sim[0] + sigma * (sim[j] - sim[0])
                        fsim[j] = _ratio_nb(A, center, sigmas, nfix, phase_fixed, sim[j])
                        nfev += 1
            sim, fsim = _sort_simplex(sim, fsim)
        return sim[0].copy(), fsim[0], nfev, converged


def sphere_ascent(H, M, V, t, X0, maxiter=MAXITER, gtol=GTOL, use_numba=None):
    """Run ascent from every start; returns ``(values (B, R), maximisers (B, R, d))``.

    ``H`` is (B, d, d); ``M`` and ``V`` are (m, d) with orthonormal columns in V.
    """
    H = np.ascontiguousarray(H, dtype=np.complex128)
    M = np.ascontiguousarray(M, dtype=np.complex128)
    V = np.ascontiguousarray(V, dtype=np.complex128)
    X0 = np.ascontiguousarray(X0, dtype=np.complex128)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        return sphere_ascent_numba(H, M, V, float(t), X0, maxiter, gtol)
    return sphere_ascent_numpy(H, M, V, float(t), X0, maxiter, gtol)


def poly_eval(A, center, coeffs, sigmas, use_numba=None):
    """Return ``(||p(A)||, |p(sigma_k)|)`` for ``p(z) = sum_j coeffs[j] (z - center)^j``."""
    A = np.ascontiguousarray(A, dtype=np.complex128)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    sigmas = np.ascontiguousarray(sigmas, dtype=np.complex128)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        nrm, w = poly_eval_numba(A, complex(center), coeffs, sigmas)
        return float(nrm), w
    nrm, w = poly_eval_numpy(A, complex(center), coeffs, sigmas)
    return float(nrm), w


def ratio_simplex(A, center, sigmas, nfix, phase_fixed, x0, xatol, fatol, maxfev,
                  use_numba=None):
    """Minimise -ratio from ``x0``; returns ``(x, f, nfev, converged)``."""
    A = np.ascontiguousarray(A, dtype=np.complex128)
    sigmas = np.ascontiguousarray(sigmas, dtype=np.complex128)
    x0 = np.ascontiguousarray(x0, dtype=np.float64)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        x, f, nfev, conv = ratio_simplex_numba(A, complex(center), sigmas, int(nfix),
                                               bool(phase_fixed), x0, float(xatol),
                                               float(fatol), int(maxfev))
        return x, float(f), int(nfev), bool(conv)
    return ratio_simplex_numpy(A, complex(center), sigmas, int(nfix), bool(phase_fixed),
                               x0, xatol, fatol, int(maxfev))
