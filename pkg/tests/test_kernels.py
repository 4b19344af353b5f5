"""The numba and numpy paths must give the same answers."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectralset import _kernels
from spectralset.ranges import _hermitian_parts, _qrange_starts

from conftest import rand_matrix

needs_numba = pytest.mark.skipif(_kernels.numba is None, reason="numba not installed")


@needs_numba
@settings(max_examples=10)
@given(st.integers(0, 10_000), st.floats(0.0, 3.0))
def test_sphere_ascent_paths_agree(seed, t):
    A = rand_matrix(3, seed)
    th = np.linspace(0, 2 * np.pi, 24, endpoint=False)
    Hs = _hermitian_parts(A, th)
    X0 = _qrange_starts(Hs, 8, seed)
    eye = np.eye(3, dtype=complex)
    Fa, _ = _kernels.sphere_ascent(Hs, A, eye, t, X0, use_numba=True)
    Fb, _ = _kernels.sphere_ascent(Hs, A, eye, t, X0, use_numba=False)
    assert np.allclose(Fa.max(axis=1), Fb.max(axis=1), rtol=0, atol=1e-9)


@needs_numba
@given(st.integers(0, 10_000), st.integers(0, 8), st.complex_numbers(max_magnitude=2))
def test_poly_eval_paths_agree(seed, deg, center):
    rng = np.random.default_rng(seed)
    A = rand_matrix(3, seed)
    c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
    s = 2.0 * np.exp(1j * np.linspace(0, 2 * np.pi, 64, endpoint=False))
    na, wa = _kernels.poly_eval(A, center, c, s, use_numba=True)
    nb, wb = _kernels.poly_eval(A, center, c, s, use_numba=False)
    assert na == pytest.approx(nb, rel=1e-12, abs=1e-300)
    assert np.allclose(wa, wb, rtol=1e-12, atol=0)


@needs_numba
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_ratio_simplex_paths_agree(seed):
    A = rand_matrix(3, seed)
    s = 1.6 * np.exp(1j * np.linspace(0, 2 * np.pi, 128, endpoint=False))
    x0 = np.random.default_rng(seed).standard_normal(7)
    xa, fa, _, _ = _kernels.ratio_simplex(A, 0j, s, 1, True, x0, 1e-9, 1e-9, 3000, use_numba=True)
    xb, fb, _, _ = _kernels.ratio_simplex(A, 0j, s, 1, True, x0, 1e-9, 1e-9, 3000, use_numba=False)
    # identical algorithm, so the same local optimum up to the stopping tolerance
    assert fa == pytest.approx(fb, abs=1e-6)


@given(st.integers(0, 10_000))
def test_objective_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    A = rand_matrix(3, seed)
    H = _hermitian_parts(A, [rng.uniform(0, 2 * np.pi)])
    eye = np.eye(3, dtype=complex)
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    x /= np.linalg.norm(x)
    d = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    d -= np.vdot(x, d).real * x
    _, g = _kernels._objective_numpy(H, A, eye, 0.8, x[None])
    e = 1e-6

    def f(y):
        return _kernels._objective_numpy(H, A, eye, 0.8, (y / np.linalg.norm(y))[None])[0][0]

    fd = (f(x + e * d) - f(x - e * d)) / (2 * e)
    assert fd == pytest.approx(np.real(np.vdot(g[0], d)), abs=1e-6)


def test_env_flag_parsing(monkeypatch):
    monkeypatch.setenv("X_FLAG", "0")
    assert not _kernels._env_flag("X_FLAG")
    monkeypatch.setenv("X_FLAG", "yes")
    assert _kernels._env_flag("X_FLAG")
    monkeypatch.delenv("X_FLAG")
    assert _kernels._env_flag("X_FLAG", default=True)
