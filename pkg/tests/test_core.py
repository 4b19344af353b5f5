import numpy as np
import pytest
from hypothesis import given, strategies as st

from spectralset.core import (Tolerances, as_operator, gershgorin_enclosing_disk,
                              hermitian_extremes, is_scalar_multiple_of_identity,
                              min_resolvent_modulus, operator_norm, resolvent)
from spectralset.errors import ContractError, InputError, SingularityError
from spectralset.oracles import norm_by_charpoly

from conftest import rand_matrix


@pytest.mark.parametrize("A, expected", [
    ([[0, 2], [0, 0]], 2.0),
    (np.eye(4), 1.0),
    (np.diag([3j, 1]), 3.0),
])
def test_operator_norm(A, expected):
    assert operator_norm(A) == pytest.approx(expected, abs=1e-12)


def test_non_finite_rejected():
    with pytest.raises(InputError):
        operator_norm([[np.nan, 0], [0, 1]])
    with pytest.raises(InputError):
        as_operator(np.ones((2, 3)))


@pytest.mark.parametrize("H, expected", [
    (np.diag([1.0, 2.0]), (1.0, 2.0)),
    (np.zeros((3, 3)), (0.0, 0.0)),
    ([[0, 1], [1, 0]], (-1.0, 1.0)),
])
def test_hermitian_extremes(H, expected):
    assert hermitian_extremes(H) == pytest.approx(expected, abs=1e-12)


def test_hermitian_extremes_rejects_non_hermitian():
    with pytest.raises(ContractError):
        hermitian_extremes([[0, 1], [0, 0]])


@given(st.integers(0, 10_000))
def test_rayleigh_quotients_between_extremes(seed):
    B = rand_matrix(4, seed)
    H = B + B.conj().T
    lo, hi = hermitian_extremes(H)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((100, 4)) + 1j * rng.standard_normal((100, 4))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    r = np.einsum("ki,ij,kj->k", X.conj(), H, X).real
    assert np.all(r >= lo - 1e-10) and np.all(r <= hi + 1e-10)


def test_resolvent_examples(nilpotent):
    assert np.allclose(resolvent(np.zeros((2, 2)), 2.0), 0.5 * np.eye(2))
    assert np.allclose(resolvent(nilpotent, 1.0), [[1, 2], [0, 1]])


def test_resolvent_singular_carries_sigma():
    with pytest.raises(SingularityError) as exc:
        resolvent(np.eye(2), 1.0)
    assert exc.value.sigma == 1.0


@pytest.mark.parametrize("A, sigma, expected", [
    (np.zeros((2, 2)), 2.0, 0.25),
    ([[0, 2], [0, 0]], 1.0, 3 - 2 * np.sqrt(2)),
    (np.diag([1.0, -1.0]), 2.0, 1.0 / 9.0),
])
def test_min_resolvent_modulus(A, sigma, expected):
    assert min_resolvent_modulus(A, sigma) == pytest.approx(expected, rel=1e-12)


def test_min_resolvent_modulus_against_charpoly(nilpotent):
    B = np.eye(2) - nilpotent
    assert min_resolvent_modulus(nilpotent, 1.0) == pytest.approx(norm_by_charpoly(B) ** -2,
                                                                 rel=1e-12)


@given(st.integers(0, 10_000), st.floats(0.5, 3.0), st.floats(0, 2 * np.pi))
def test_resolvent_identities(seed, rad, phase):
    A = rand_matrix(3, seed)
    c, r = gershgorin_enclosing_disk(A)
    sigma = c + (r + rad) * np.exp(1j * phase)
    R = resolvent(A, sigma)
    assert np.linalg.norm(R @ (sigma * np.eye(3) - A) - np.eye(3)) <= 1e-10
    prod = min_resolvent_modulus(A, sigma) * np.linalg.norm(sigma * np.eye(3) - A, 2) ** 2
    assert prod == pytest.approx(1.0, abs=1e-10)


def test_scalar_detection():
    assert is_scalar_multiple_of_identity(3j * np.eye(3))
    assert not is_scalar_multiple_of_identity([[0, 1], [0, 0]])


def test_tolerances_validated():
    with pytest.raises(InputError):
        Tolerances(eig_tol=0.0)
    assert Tolerances().as_dict()["quad_tol"] == 1e-8
