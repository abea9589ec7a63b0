import math

import numpy as np
import pytest

from rpchain.chain import ChainFrame, partial_trace
from rpchain.config import DimensionError
from rpchain.fermions import (
    a_matrix,
    a_matrix_pd,
    covariance_formula,
    covariance_from_ground_state,
    jordan_wigner,
    majorana,
)
from rpchain.models import tfim_ground_state
from rpchain.rp import check_rp
from rpchain.symmetry import ReflectionFrame

X = np.array([[0, 1], [1, 0]])
Y = np.array([[0, -1j], [1j, 0]])


def test_first_majoranas():
    f = ChainFrame(1)
    assert np.allclose(majorana(1, f).matrix, np.kron(X, np.eye(2)))
    assert np.allclose(majorana(2, f).matrix, np.kron(Y, np.eye(2)))
    assert np.allclose(jordan_wigner(2, "odd_c", f).matrix, np.kron(np.diag([1, -1]), X))


def test_car_small():
    f = ChainFrame(1)
    c3, c4 = majorana(3, f).matrix, majorana(4, f).matrix
    assert np.allclose(c3 @ c4 + c4 @ c3, 0)
    assert np.allclose(c3 @ c3, np.eye(4))


@pytest.mark.parametrize("N", [1, 2])
def test_car_all(N):
    f = ChainFrame(N)
    cs = [majorana(m, f).matrix for m in range(1, 4 * N + 1)]
    for a, ca in enumerate(cs):
        for b, cb in enumerate(cs):
            anti = ca @ cb + cb @ ca
            assert np.abs(anti - 2 * (a == b) * np.eye(f.dim)).max() < 1e-12


def test_jordan_wigner_errors():
    with pytest.raises(DimensionError):
        jordan_wigner(1, "odd_c", ChainFrame(1, 3))
    with pytest.raises(ValueError):
        jordan_wigner(1, "middle", ChainFrame(1))
    with pytest.raises(DimensionError):
        majorana(5, ChainFrame(1))


def test_formula_entries():
    b = covariance_formula(2).b
    assert abs(b[0, 1] - 1j * 2 / (8 * math.sin(math.pi / 8))) < 1e-15
    assert abs(b[0, 1] - 0.6532815j) < 1e-7
    assert b[0, 2] == 0
    assert np.all(np.diag(b) == 0)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_formula_invariants(N):
    cov = covariance_formula(N)
    b = cov.b
    assert np.abs(b.real).max() == 0
    assert cov.antisymmetry_defect < 1e-15
    j, k = np.indices(b.shape)
    assert np.all(b[(k - j) % 2 == 0] == 0)
    assert cov.purity_defect < 1e-9


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_ground_state_covariance(N):
    check = covariance_from_ground_state(N)
    assert check.max_dev < 1e-9
    assert check.sector in ("spin", "majorana")
    c = check.covariance.b
    assert np.abs(np.diag(c)).max() < 1e-12
    assert np.abs(c + c.T).max() < 1e-11


def test_ground_state_covariance_range():
    with pytest.raises(ValueError):
        covariance_from_ground_state(6)


@pytest.mark.parametrize("N", [1, 2, 3, 4, 8, 16])
def test_a_matrix_positive_definite(N):
    rep = a_matrix_pd(N)
    assert rep.positive_definite and rep.min_eig > 0
    assert rep.hermiticity_defect < 1e-12
    assert rep.n_sites == 2 * N


def test_a_matrix_layout():
    b = covariance_formula(2).b
    a = a_matrix(2).a
    for j in range(4):
        for k in range(4):
            assert a[j, k] == -1j * b[j, 8 - 1 - k]


@pytest.mark.parametrize("N", [2, 3])
def test_analytic_and_gram_routes_agree(N):
    g = tfim_ground_state(N).state
    cert = check_rp(g, ReflectionFrame(g.frame))
    assert cert.verdict == "strictly_rp"
    assert a_matrix_pd(N).positive_definite


@pytest.mark.parametrize("N", [1, 2, 3])
def test_half_chain_restriction_is_faithful(N):
    g = tfim_ground_state(N).state
    assert np.linalg.eigvalsh(partial_trace(g, "left").data)[0] > 0


def test_purity_is_stated_for_real_part():
    b = covariance_formula(2).b
    assert np.abs(b @ b - np.eye(8)).max() < 1e-9


@pytest.mark.parametrize("N", [2, 4, 8, 16])
def test_a_matrix_min_eig_against_high_precision(N):
    from hp_oracle import a_matrix_min_eig

    precise = float(a_matrix_min_eig(N))
    assert precise > 0
    assert abs(a_matrix_pd(N).min_eig - precise) <= 1e-15 + 1e-10 * precise
