import numpy as np
import pytest
from hypothesis import given, strategies as st

from spectralset.errors import InputError
from spectralset.oracles import poly_of_matrix_powers
from spectralset.polynomial import Polynomial

from conftest import rand_matrix


def test_trailing_zeros_trimmed():
    p = Polynomial([1, 2, 0, 0])
    assert p.degree == 1
    assert Polynomial([0, 0]).is_zero()


def test_rejects_bad_coefficients():
    with pytest.raises(InputError):
        Polynomial([np.inf])
    with pytest.raises(InputError):
        Polynomial([])


@given(st.integers(0, 10_000), st.integers(0, 8), st.complex_numbers(max_magnitude=2))
def test_matrix_evaluation_against_powers(seed, deg, center):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
    A = rand_matrix(3, seed)
    p = Polynomial(c, center)
    ref = poly_of_matrix_powers(c, A, center)
    assert np.allclose(p.of_matrix(A), ref, atol=1e-10 * max(1, np.abs(ref).max()))


@given(st.integers(0, 10_000), st.complex_numbers(max_magnitude=2))
def test_to_monomial_same_values(seed, center):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    p = Polynomial(c, center)
    q = Polynomial(p.to_monomial())
    z = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    assert np.allclose(p(z), q(z), rtol=1e-9, atol=1e-9)


def test_monomial_and_scaling():
    p = Polynomial.monomial(3, 1.0)
    assert p(2.0) == pytest.approx(1.0)
    assert p.scaled(2.0)(3.0) == pytest.approx(16.0)
    n, w = p.matrix_norm_and_moduli(np.diag([1.0, 3.0]), np.array([0.0, 2.0]))
    assert n == pytest.approx(8.0)
    assert np.allclose(w, [1.0, 1.0])
