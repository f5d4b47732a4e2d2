import numpy as np
import pytest
from scipy.stats import chisquare

from trotterkit.fermions import build_fermion_hamiltonian
from trotterkit.givens import (
    GivensVector,
    rotation_matrix,
    rotation_unitary_fock,
    sample_random_basis,
    spatial_pairs,
    transform_integrals,
)

import oracles


def test_angle_vector_length_checked():
    with pytest.raises(ValueError, match="need 3 angles"):
        GivensVector(3, (0.0,))


def test_zero_vector_is_identity():
    theta = GivensVector.zero(3)
    assert theta.is_zero()
    assert np.allclose(rotation_matrix(theta), np.eye(3))


def test_single_pair_quarter_turn():
    theta = GivensVector.single_pair(2, (0, 1), np.pi / 2)
    assert np.allclose(rotation_matrix(theta), [[0.0, -1.0], [1.0, 0.0]], atol=1e-15)


def test_rotation_orthogonal_random():
    theta = sample_random_basis(42, 4)
    r = rotation_matrix(theta)
    assert np.max(np.abs(r.T @ r - np.eye(4))) < 1e-13


def test_pair_order_is_lexicographic():
    assert spatial_pairs(4) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_transform_identity_is_exact(h2_ints):
    out = transform_integrals(h2_ints, GivensVector.zero(2))
    assert out is h2_ints


def test_transform_quarter_turn_swaps_orbitals(h2_ints):
    theta = GivensVector.single_pair(2, (0, 1), np.pi / 2)
    out = transform_integrals(h2_ints, theta)
    h1 = h2_ints.spatial_one_body()
    h1t = out.spatial_one_body()
    assert h1t[0, 0] == pytest.approx(h1[1, 1], abs=1e-12)
    assert h1t[1, 1] == pytest.approx(h1[0, 0], abs=1e-12)
    h = build_fermion_hamiltonian(h2_ints).to_matrix()
    ht = build_fermion_hamiltonian(out).to_matrix()
    assert np.max(np.abs(np.linalg.eigvalsh(h) - np.linalg.eigvalsh(ht))) < 1e-12


def test_transform_matches_naive_four_index(model3_ints):
    theta = sample_random_basis(5, 3)
    fast = transform_integrals(model3_ints, theta)
    slow = oracles.transform_integrals_naive(model3_ints, rotation_matrix(theta))
    assert np.max(np.abs(fast.h1 - slow.h1)) < 1e-12
    assert np.max(np.abs(fast.h2 - slow.h2)) < 1e-12


def test_spectrum_invariance_random_angles(h2_ints):
    evals0 = np.linalg.eigvalsh(build_fermion_hamiltonian(h2_ints).to_matrix())
    for seed in range(6):
        theta = sample_random_basis(seed, 2)
        ht = build_fermion_hamiltonian(transform_integrals(h2_ints, theta)).to_matrix()
        assert np.max(np.abs(np.linalg.eigvalsh(ht) - evals0)) < 1e-10


def test_fock_unitary_identity():
    u = rotation_unitary_fock(GivensVector.zero(2), 4)
    assert np.allclose(u, np.eye(16))


def test_fock_unitary_is_unitary(h2_ints):
    theta = sample_random_basis(9, 2)
    u = rotation_unitary_fock(theta, 4)
    assert np.max(np.abs(u.conj().T @ u - np.eye(16))) < 1e-12


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_conjugation_matches_integral_transform(h2_ints, seed):
    # two independent construction paths of the transformed Hamiltonian
    theta = sample_random_basis(seed, 2)
    h0 = build_fermion_hamiltonian(h2_ints, prune=0.0).to_matrix()
    ht = build_fermion_hamiltonian(transform_integrals(h2_ints, theta), prune=0.0).to_matrix()
    u = rotation_unitary_fock(theta, h2_ints.n_spin)
    assert np.max(np.abs(u @ h0 @ u.conj().T - ht)) < 1e-10


def test_conjugation_multi_pair(model3_ints):
    theta = sample_random_basis(33, 3)
    h0 = build_fermion_hamiltonian(model3_ints, prune=0.0).to_matrix()
    ht = build_fermion_hamiltonian(
        transform_integrals(model3_ints, theta), prune=0.0
    ).to_matrix()
    u = rotation_unitary_fock(theta, model3_ints.n_spin)
    assert np.max(np.abs(u @ h0 @ u.conj().T - ht)) < 1e-10


def test_pi_rotation_fixed_point(h2_ints):
    # rotating a pair by pi negates both orbitals: integrals are unchanged
    theta = GivensVector.single_pair(2, (0, 1), np.pi)
    out = transform_integrals(h2_ints, theta)
    assert np.max(np.abs(out.h1 - h2_ints.h1)) < 1e-12
    assert np.max(np.abs(out.h2 - h2_ints.h2)) < 1e-12


def test_continuity_under_small_angle(h2_ints):
    h0 = build_fermion_hamiltonian(h2_ints).to_matrix()
    norms = []
    for delta in (1e-2, 1e-4, 1e-6):
        theta = GivensVector.single_pair(2, (0, 1), delta)
        ht = build_fermion_hamiltonian(transform_integrals(h2_ints, theta)).to_matrix()
        norms.append(np.linalg.norm(ht - h0))
    assert norms[0] > norms[1] > norms[2]
    assert norms[2] < 1e-4


def test_sampling_deterministic():
    a = sample_random_basis(123, 3)
    b = sample_random_basis(123, 3)
    c = sample_random_basis(124, 3)
    assert a == b
    assert a != c
    assert all(0.0 <= ang < 2.0 * np.pi for ang in a.angles)


def test_sampling_uniformity_chi_squared():
    rng = np.random.default_rng(2718)
    draws = np.concatenate([sample_random_basis(rng, 3).angles for _ in range(3500)])
    counts, _ = np.histogram(draws, bins=20, range=(0.0, 2.0 * np.pi))
    _, p_value = chisquare(counts)
    assert p_value > 0.01


def test_json_serialization():
    theta = sample_random_basis(1, 3)
    import json

    assert json.loads(theta.to_json()) == list(theta.angles)
