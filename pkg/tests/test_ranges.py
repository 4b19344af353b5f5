import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectralset.errors import ContractError, InputError, NonSmoothBoundary
from spectralset.geometry import perimeter
from spectralset.oracles import qrange_support_bruteforce
from spectralset.ranges import (QParameter, m_profile, m_theta, maximizer_set, numrange_body,
                                numrange_support, perimeter_derivative_check, qrange_body,
                                qrange_support, qrange_support_grid)

from conftest import rand_matrix

TH = np.linspace(0, 2 * np.pi, 17)


def test_qparameter():
    assert QParameter(0.6).t == pytest.approx(4 / 3)
    assert QParameter(1.0).t == 0.0
    assert QParameter(0.6j).q_abs == pytest.approx(0.6)
    for bad in (0.0, 1.5, np.nan):
        with pytest.raises(InputError):
            QParameter(bad)
    assert QParameter.from_t(4 / 3).q_abs == pytest.approx(0.6)


def test_numrange_support_examples(nilpotent):
    assert np.allclose(numrange_support(nilpotent, TH), 1.0)
    assert np.allclose(numrange_support(np.diag([1.0, -1.0]), TH), np.abs(np.cos(TH)))
    assert np.allclose(numrange_support(np.eye(2), TH), np.cos(TH))
    assert isinstance(numrange_support(nilpotent, 0.3), float)


def test_numrange_body_examples(nilpotent):
    h = numrange_body(nilpotent)
    assert h.a0 == pytest.approx(1.0)
    assert np.max(np.abs(h.a)) < 1e-12 and np.max(np.abs(h.b)) < 1e-12
    h = numrange_body([[1, 1], [0, 1]])
    assert h.a0 == pytest.approx(0.5)
    assert h.a[0] == pytest.approx(1.0)
    assert np.max(np.abs(h.a[1:])) < 1e-12


def test_jordan_disk_against_rayleigh_sampling():
    A = np.array([[1, 1], [0, 1]], dtype=complex)
    rng = np.random.default_rng(0)
    X = rng.standard_normal((20000, 2)) + 1j * rng.standard_normal((20000, 2))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    r = np.einsum("ki,ij,kj->k", X.conj(), A, X)
    assert np.max(np.abs(r - 1)) == pytest.approx(0.5, abs=1e-3)


def test_numrange_body_segment_fails():
    with pytest.raises(NonSmoothBoundary) as exc:
        numrange_body(np.diag([1.0, -1.0]))
    assert "smooth" in str(exc.value)


def test_maximizer_set(nilpotent):
    ms = maximizer_set(nilpotent, 0.0)
    assert ms.multiplicity == 1
    v = ms.eigen_basis[:, 0]
    assert abs(abs(np.vdot(v, np.ones(2) / np.sqrt(2))) - 1) < 1e-12
    assert maximizer_set(np.eye(3), 0.7).multiplicity == 3
    ms = maximizer_set(np.diag([2.0, 1.0]), 0.0, eps=0.5)
    assert ms.multiplicity == 1 and abs(ms.eigen_basis[0, 0]) == pytest.approx(1.0)
    with pytest.raises(InputError):
        maximizer_set(np.eye(2), 0.0, eps=-1)


def test_m_theta_examples(nilpotent):
    assert np.allclose(m_profile(nilpotent, TH), 1.0)
    assert m_theta(np.diag([1.0, -1.0]), 0.0) == pytest.approx(0.0, abs=1e-12)
    with pytest.warns(UserWarning):
        assert m_theta(np.eye(2), 0.3) == pytest.approx(0.0, abs=1e-12)


def test_m_theta_degenerate_eigenspace():
    B = np.array([[0, 1], [0, 0]], dtype=complex)
    D = np.zeros((4, 4), dtype=complex)
    D[:2, :2] = B
    D[2:, 2:] = B
    # two copies of the same block: every top eigenspace is two-dimensional
    assert np.allclose(m_profile(D, TH), 0.5, atol=1e-9)


def test_qrange_support_examples(nilpotent):
    for th in TH[:5]:
        assert qrange_support(nilpotent, 1.0, th) == pytest.approx(numrange_support(nilpotent, th))
        assert qrange_support(nilpotent, 0.6, th) == pytest.approx(3.0, abs=1e-12)
        assert qrange_support(np.eye(2), 0.7, th) == pytest.approx(np.cos(th), abs=1e-12)


@pytest.mark.parametrize("seed", [0, 1])
def test_qrange_against_bruteforce(seed):
    A = rand_matrix(3, seed)
    for th in (0.0, 2.0):
        assert qrange_support(A, 0.8, th) == pytest.approx(
            qrange_support_bruteforce(A, 0.8, th, m=8192), abs=1e-6)


def test_qrange_body_examples(nilpotent):
    h = qrange_body(nilpotent, 0.6)
    assert h.a0 == pytest.approx(3.0, abs=1e-10)
    assert perimeter(h) == pytest.approx(6 * np.pi, abs=1e-8)
    h1 = qrange_body(nilpotent, 1.0)
    assert h1.a0 == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ContractError):
        qrange_body(2j * np.eye(2), 0.6)


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_nesting_and_containment(seed):
    A = rand_matrix(3, seed)
    th = np.linspace(0, 2 * np.pi, 32, endpoint=False)
    vals = [qrange_support_grid(A, q, th) for q in (1.0, 0.9, 0.8, 0.6)]
    for lo, hi in zip(vals, vals[1:]):
        assert np.all(lo <= hi + 1e-8)
    assert np.all(numrange_support(A, th) <= vals[0] + 1e-12)


@given(st.integers(0, 10_000), st.floats(0, 2 * np.pi), st.complex_numbers(max_magnitude=3))
def test_rotation_and_translation(seed, phi, c):
    A = rand_matrix(3, seed)
    th = np.linspace(0, 2 * np.pi, 16, endpoint=False)
    rot = np.exp(1j * phi) * A
    assert np.allclose(numrange_support(rot, th), numrange_support(A, th - phi), atol=1e-12)
    sh = A + c * np.eye(3)
    assert np.allclose(numrange_support(sh, th),
                       numrange_support(A, th) + np.real(c * np.exp(-1j * th)), atol=1e-12)
    assert np.allclose(m_profile(sh, th), m_profile(A, th), atol=1e-9)
    assert np.allclose(m_profile(rot, th), m_profile(A, th - phi), atol=1e-9)


def test_perimeter_derivative_nilpotent(nilpotent):
    lhs, rhs = perimeter_derivative_check(nilpotent, 1e-3)
    assert lhs == pytest.approx(2 * np.pi, abs=1e-10)
    t = 1e-3
    # the perimeter is 2 pi (t + sqrt(1 + t^2)), so the one-sided slope is known exactly
    assert rhs == pytest.approx(2 * np.pi * (t + np.sqrt(1 + t * t) - 1) / t, rel=1e-9)
    _, rhs_r = perimeter_derivative_check(nilpotent, 1e-3, richardson=True)
    assert abs(rhs_r - lhs) < abs(rhs - lhs)


def test_perimeter_derivative_random():
    A = rand_matrix(3, 3001)
    lhs, rhs = perimeter_derivative_check(A, 1e-3)
    assert abs(lhs - rhs) / lhs <= 1e-2


def test_perimeter_derivative_hermitian_fails():
    with pytest.raises(NonSmoothBoundary):
        perimeter_derivative_check(np.diag([1.0, -1.0]))
