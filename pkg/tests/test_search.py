import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectralset.core import gershgorin_enclosing_disk
from spectralset.bounds import constant_thm22, conjecture_constant
from spectralset.errors import ContractError, DomainError, InputError
from spectralset.geometry import SupportFn, boundary_mesh
from spectralset.polynomial import Polynomial
from spectralset.potential import gamma_one, m_total, potential_profile
from spectralset.ranges import numrange_body
from spectralset.search import (conjecture_trial, ensembles, maximize_ratio,
                                perturbed_normal, random_unitary, ratio)

from conftest import rand_matrix


def disk_mesh(A, factor=1.3, n=256):
    c, r = gershgorin_enclosing_disk(A)
    return boundary_mesh(SupportFn.disk(c, factor * r), n)


def test_ratio_examples(nilpotent):
    mesh = boundary_mesh(SupportFn.disk(0, 1), 256)
    assert ratio(nilpotent, Polynomial([0, 1]), mesh) == pytest.approx(2.0)
    mesh3 = boundary_mesh(SupportFn.disk(0, 3), 256)
    assert ratio(nilpotent, Polynomial([0, 1]), mesh3) == pytest.approx(2 / 3)
    with pytest.raises(InputError):
        ratio(nilpotent, Polynomial([0]), mesh)
    with pytest.raises(DomainError):
        ratio(np.diag([0, 5.0]), Polynomial([0, 1]), mesh)


def test_normal_matrix_ratio_at_most_one():
    A = np.diag([1, 1j, -1])
    mesh = boundary_mesh(SupportFn.disk(0, 1.2), 256)
    res = maximize_ratio(A, mesh, degree=3, restarts=4, seed=0)
    assert res.ratio <= 1 + 1e-6


def test_nilpotent_max_ratio_on_unit_disk(nilpotent):
    # spectrum at 0, so p = z is the best non-constant polynomial
    mesh = boundary_mesh(SupportFn.disk(0, 1.5), 256)
    res = maximize_ratio(nilpotent, mesh, degree=3, restarts=4)
    assert res.ratio >= 2 / 1.5 - 1e-9


@settings(max_examples=6)
@given(st.integers(0, 1000))
def test_unitary_and_scaling_invariance(seed):
    A = rand_matrix(3, seed)
    mesh = disk_mesh(A)
    r0 = maximize_ratio(A, mesh, degree=2, restarts=3, seed=seed).ratio
    U = random_unitary(3, seed)
    r1 = ratio(U @ A @ U.conj().T, maximize_ratio(A, mesh, 2, 3, seed).polynomial, mesh)
    assert r1 == pytest.approx(r0, rel=1e-7)
    s = 1.7
    p = maximize_ratio(A, mesh, 2, 3, seed).polynomial
    ps = Polynomial(p.coeffs / s ** np.arange(p.coeffs.size), s * p.center)
    c, r = gershgorin_enclosing_disk(A)
    assert ratio(s * A, ps, boundary_mesh(SupportFn.disk(s * c, s * 1.3 * r), 256)) == pytest.approx(r0, rel=1e-5)


def test_warm_start_never_lost(nilpotent):
    mesh = boundary_mesh(SupportFn.disk(0.1, 2.2), 256)
    c = mesh.body.steiner_point()
    warm = ratio(nilpotent, Polynomial([0, 1], c), mesh)
    assert maximize_ratio(nilpotent, mesh, 3, 1).ratio >= warm - 1e-12


def test_determinism():
    A = rand_matrix(3, 4)
    mesh = disk_mesh(A)
    a = maximize_ratio(A, mesh, 3, 3, seed=11)
    b = maximize_ratio(A, mesh, 3, 3, seed=11)
    assert a.ratio == b.ratio and np.array_equal(a.polynomial.coeffs, b.polynomial.coeffs)


def test_ratio_below_thm22_constant():
    A = rand_matrix(3, 8)
    body = numrange_body(A, 256, 32)
    mesh = boundary_mesh(body, 256)
    prof = potential_profile(A, mesh)
    bound = constant_thm22(gamma_one(prof), m_total(prof))
    assert maximize_ratio(A, mesh, 3, 4).ratio <= bound + 1e-6


def test_free_constant_at_least_one():
    A = rand_matrix(2, 3)
    mesh = disk_mesh(A)
    assert maximize_ratio(A, mesh, 2, 2, free_constant=True).ratio >= 1 - 1e-9


def test_ensembles():
    for kind in ("ginibre", "jordan", "nilpotent_shift", "perturbed_normal"):
        a = ensembles(kind, 4, seed=3)
        assert a.shape == (4, 4)
        assert np.array_equal(a, ensembles(kind, 4, seed=3))
    A, N = perturbed_normal(4, 0, eps=0.05)
    assert np.linalg.norm(A - N, 2) == pytest.approx(0.05)
    assert np.allclose(N @ N.conj().T, N.conj().T @ N)
    with pytest.raises(InputError):
        ensembles("wigner", 3)
    with pytest.raises(InputError):
        ensembles("ginibre", 0)


def test_conjecture_trial_and_findings(tmp_path, nilpotent):
    path = tmp_path / "f.jsonl"
    tr = conjecture_trial(nilpotent, 0.6, degree=3, restarts=3, grid_n=256, fourier_k=32,
                          findings_path=path, log_all=True)
    assert tr.bound == pytest.approx(conjecture_constant(0.6))
    assert tr.max_ratio == pytest.approx(2 / 3, abs=1e-4)
    assert not tr.violation
    rec = json.loads(path.read_text().splitlines()[0])
    assert rec["degree"] == 3 and rec["violation"] is False and rec["matrix"]["n"] == 2
    with pytest.raises(ContractError):
        conjecture_trial(2 * np.eye(2), 0.8)
