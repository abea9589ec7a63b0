import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rpchain.chain import ChainFrame, DenseOperator, QuantumState, assemble, term
from rpchain.config import DimensionError, PreconditionError
from rpchain.models import build_cluster_state, tfim_ground_state
from rpchain.chain import reduced_density
from rpchain.purify import canonical_purification
from rpchain.symmetry import (
    ReflectionFrame,
    RotationFrame,
    align_to_cone,
    apply_J,
    cone_matrix,
    conjugate_by_J,
    j_conjugate,
    j_fixed_basis,
    j_overlap,
    rotate,
    rotate_operator,
    vector_from_cone_matrix,
)

from conftest import random_matrix, random_vector


def basis_index(digits, d):
    out = 0
    for x in digits:
        out = out * d + x
    return out


def test_apply_J_reverses_basis_vectors():
    f = ChainFrame(2, 3)
    rf = ReflectionFrame(f)
    v = np.zeros(f.dim, complex)
    v[basis_index([0, 1, 0, 2], 3)] = 1
    out = apply_J(v, rf)
    assert out[basis_index([2, 0, 1, 0], 3)] == 1
    assert np.count_nonzero(out) == 1


def test_apply_J_is_antilinear():
    rf = ReflectionFrame(ChainFrame(1))
    v = np.array([1j, 0, 0, 0])
    assert np.allclose(apply_J(v, rf), [-1j, 0, 0, 0])


def test_canonical_purification_of_cluster_restriction_is_J_fixed():
    N = 2
    f = ChainFrame(N)
    rf = ReflectionFrame(f)
    rho = reduced_density(build_cluster_state(N), [1, 3])
    psi = canonical_purification(QuantumState.from_density(rho, f, "left", hermitize=True), rf)
    assert np.linalg.norm(apply_J(psi, rf) - psi.data) < 1e-10


def test_reflection_invariants(frames, rng):
    f, rf, _ = frames
    r = rf.matrix
    assert np.allclose(r @ r, np.eye(f.dim))
    v, w = random_vector(rng, f.dim), random_vector(rng, f.dim)
    assert np.allclose(apply_J(apply_J(v, rf), rf), v)
    lhs = np.vdot(apply_J(v, rf), apply_J(w, rf))
    assert abs(lhs - np.conj(np.vdot(v, w))) < 1e-12


def test_conjugate_by_J_examples():
    N = 2
    f = ChainFrame(N)
    rf = ReflectionFrame(f)
    x = assemble([term(1, {N: "X"})], f, "left")
    assert np.allclose(conjugate_by_J(x, rf).matrix, assemble([term(1, {N + 1: "X"})], f, "right").matrix)
    y = assemble([term(1, {1: "Y"})], f, "left")
    assert np.allclose(conjugate_by_J(y, rf).matrix, assemble([term(-1, {2 * N: "Y"})], f, "right").matrix)
    ident = DenseOperator(1j * np.eye(4), "left", f)
    assert np.allclose(conjugate_by_J(ident, rf).matrix, -1j * np.eye(4))
    with pytest.raises(DimensionError):
        conjugate_by_J(DenseOperator.identity(f), rf)


def test_conjugate_by_J_matches_full_conjugation(frames, rng):
    f, rf, _ = frames
    n = f.half_dim
    x = random_matrix(rng, n)
    full = np.kron(x, np.eye(n))
    jx = conjugate_by_J(DenseOperator(x, "left", f), rf).matrix
    assert np.allclose(j_conjugate(full, rf), np.kron(np.eye(n), jx))


def test_conjugate_by_J_is_multiplicative(frames, rng):
    f, rf, _ = frames
    n = f.half_dim
    x = DenseOperator(random_matrix(rng, n), "left", f)
    y = DenseOperator(random_matrix(rng, n), "left", f)
    lhs = conjugate_by_J(x @ y, rf).matrix
    rhs = conjugate_by_J(x, rf).matrix @ conjugate_by_J(y, rf).matrix
    assert np.abs(lhs - rhs).max() < 1e-12


def test_J_conjugates_expectations(frames, rng):
    f, rf, _ = frames
    g = random_matrix(rng, f.dim)
    a = g + g.conj().T
    v = random_vector(rng, f.dim)
    jv = apply_J(v, rf)
    assert abs(np.vdot(jv, a @ jv) - np.conj(np.vdot(v, j_conjugate(a, rf) @ v))) < 1e-11


def test_rotate_product_vector():
    f = ChainFrame(2, 3)
    rot = RotationFrame(f)
    v = np.zeros(f.dim)
    v[basis_index([0, 1, 2, 1], 3)] = 1
    out = rotate(v, rot, 1)
    assert out[basis_index([2, 1, 0, 1], 3)] == 1


def test_rotate_full_cycle(rng):
    for N in (1, 2, 3):
        f = ChainFrame(N)
        rot = RotationFrame(f)
        v = random_vector(rng, f.dim)
        assert np.array_equal(rotate(v, rot, N), v)
        assert np.allclose(rotate(rotate(v, rot, 1), rot, -1), v)


def test_rotation_matrix_relations(frames):
    f, rf, rot = frames
    u = rot.shift_matrix
    assert np.allclose(u @ u.T, np.eye(f.dim))
    assert np.allclose(np.linalg.matrix_power(u, f.n_half), np.eye(f.dim))
    # J U J = U^{-1}; U is real so this is R U R = U^T
    r = rf.matrix
    assert np.array_equal(r @ u @ r, u.T)


def test_rotate_operator_consistent(frames, rng):
    f, _, rot = frames
    a = random_matrix(rng, f.dim)
    v = random_vector(rng, f.dim)
    assert np.allclose(rotate_operator(a, rot) @ rotate(v, rot), rotate(a @ v, rot))


def test_tfim_ground_state_rotation_invariant():
    g = tfim_ground_state(2).state
    assert np.linalg.norm(rotate(g, RotationFrame(g.frame), 1) - g.data) < 1e-10


def test_cone_matrix_round_trip_and_J(frames, rng):
    f, rf, _ = frames
    v = random_vector(rng, f.dim)
    m = cone_matrix(v, f)
    assert np.array_equal(vector_from_cone_matrix(m, f), v)
    assert np.allclose(cone_matrix(apply_J(v, rf), f), m.conj().T)


@settings(max_examples=20, deadline=None)
@given(st.floats(0, 2 * np.pi), st.integers(0, 2**16))
def test_align_to_cone_removes_phase(phase, seed):
    f = ChainFrame(2)
    rf = ReflectionFrame(f)
    rng = np.random.default_rng(seed)
    g = random_matrix(rng, 4)
    m = g @ g.conj().T + 0.1 * np.eye(4)
    v = vector_from_cone_matrix(m, f)
    v /= np.linalg.norm(v)
    out = align_to_cone(np.exp(1j * phase) * v, rf)
    assert np.linalg.norm(out - v) < 1e-10
    assert abs(j_overlap(out, rf) - 1) < 1e-12


def test_align_to_cone_rejects_non_invariant():
    rf = ReflectionFrame(ChainFrame(1))
    with pytest.raises(PreconditionError):
        align_to_cone(np.array([0, 1, 0, 0]), rf)
    with pytest.raises(PreconditionError):
        align_to_cone(np.zeros(4), rf)


def test_j_fixed_basis(rng):
    f = ChainFrame(2)
    rf = ReflectionFrame(f)
    fixed = []
    for _ in range(3):
        v = random_vector(rng, f.dim)
        fixed.append(v + apply_J(v, rf))
    q, _ = np.linalg.qr(np.array(fixed).T)
    u, _ = np.linalg.qr(random_matrix(rng, 3))
    w = q @ u
    basis = j_fixed_basis(w, rf)
    assert np.allclose(basis.conj().T @ basis, np.eye(3), atol=1e-10)
    for col in basis.T:
        assert np.linalg.norm(apply_J(col, rf) - col) < 1e-10
    # same span
    assert np.linalg.norm(w @ (w.conj().T @ basis) - basis) < 1e-10
    with pytest.raises(PreconditionError):
        j_fixed_basis(np.eye(f.dim)[:, 1], rf)
