import numpy as np
import pytest

from trotterkit.fermions import build_fermion_hamiltonian
from trotterkit.paulis import (
    PauliString,
    PauliSum,
    jordan_wigner,
    jw_fermion_term,
    pauli_commutator,
    pauli_one_norm,
)

import oracles


def random_string(rng, n):
    x = int(rng.integers(1 << n))
    z = int(rng.integers(1 << n))
    return PauliString(n, x, z, bin(x & z).count("1") % 4)


def test_label_round_trip():
    for label in ("I", "X", "Y", "Z", "XIZY", "YYXZ"):
        ps = PauliString.from_label(label)
        assert ps.label() == label
        assert ps.coefficient() == 1.0


def test_string_matrices_match_kronecker():
    rng = np.random.default_rng(3)
    for _ in range(25):
        ps = random_string(rng, 3)
        ours = ps.to_matrix()
        ref = ps.coefficient() * oracles.pauli_label_matrix(ps.label())
        assert np.max(np.abs(ours - ref)) < 1e-14


def test_product_symplectic_sign_property():
    # ab = +-ba with sign from the symplectic inner product of the masks
    rng = np.random.default_rng(11)
    for _ in range(60):
        a = random_string(rng, 4)
        b = random_string(rng, 4)
        ab = (a * b).to_matrix()
        ba = (b * a).to_matrix()
        sign = 1.0 if a.commutes_with(b) else -1.0
        assert np.max(np.abs(ab - sign * ba)) < 1e-12


def test_commutator_single_qubit():
    x0 = PauliString.from_label("X")
    z0 = PauliString.from_label("Z")
    comm = pauli_commutator(x0, z0)
    assert comm.to_label_pairs() == [("Y", -2.0j)]


def test_commutator_disjoint_support():
    a = PauliString.from_label("XXI")
    b = PauliString.from_label("IIZ")
    assert len(pauli_commutator(a, b)) == 0


def test_commutator_matches_dense():
    a = PauliString.from_label("XY")
    b = PauliString.from_label("YZ")
    dense = (
        oracles.pauli_label_matrix("XY") @ oracles.pauli_label_matrix("YZ")
        - oracles.pauli_label_matrix("YZ") @ oracles.pauli_label_matrix("XY")
    )
    assert np.max(np.abs(pauli_commutator(a, b).to_matrix() - dense)) < 1e-13


def test_commutator_randomized_dense_oracle():
    rng = np.random.default_rng(7)
    for _ in range(40):
        a = random_string(rng, 4)
        b = random_string(rng, 4)
        ours = pauli_commutator(a, b).to_matrix()
        ref = a.to_matrix() @ b.to_matrix() - b.to_matrix() @ a.to_matrix()
        assert np.max(np.abs(ours - ref)) < 1e-12


def test_one_norm_excludes_identity():
    psum = PauliSum.from_labels([("X", 1.0), ("Z", -0.5), ("I", 7.0)])
    assert pauli_one_norm(psum) == pytest.approx(1.5)
    assert pauli_one_norm(PauliSum(2)) == 0.0


def test_sum_prunes_cancellations():
    psum = PauliSum.from_labels([("X", 1.0)])
    psum.add_term(next(iter(psum.terms)), -1.0)
    assert len(psum) == 0


def test_to_matrix_identity_and_z():
    assert np.allclose(PauliSum.from_labels([("I", 1.0)]).to_matrix(), np.eye(2))
    # qubit 0 = least significant bit: Z on qubit 0 alternates signs
    z0 = PauliSum.from_labels([("ZI", 1.0)]).to_matrix()
    assert np.allclose(z0, np.diag([1.0, -1.0, 1.0, -1.0]))


def test_to_matrix_random_sum_matches_kronecker():
    rng = np.random.default_rng(23)
    pairs = []
    for _ in range(6):
        ps = random_string(rng, 3)
        pairs.append((ps.label(), complex(rng.normal(), rng.normal())))
    psum = PauliSum.from_labels(pairs)
    assert np.max(np.abs(psum.to_matrix() - oracles.pauli_sum_matrix_bruteforce(psum))) < 1e-12


def test_apply_matches_matrix():
    rng = np.random.default_rng(17)
    psum = PauliSum.from_labels([("XYZ", 0.3), ("ZZI", -1.2j), ("IXI", 0.77)])
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    assert np.max(np.abs(psum.apply(psi) - psum.to_matrix() @ psi)) < 1e-13


def test_jw_number_operator():
    # a+_j a_j -> (I - Z_j)/2
    psum = jw_fermion_term("number", (1,), 2)
    expected = {("II", 0.5), ("IZ", -0.5)}
    assert set(psum.to_label_pairs()) == expected


def test_jw_adjacent_hopping():
    # a+_0 a_1 + h.c. -> (X0 X1 + Y0 Y1)/2
    psum = jw_fermion_term("hopping", (0, 1), 2)
    assert dict(psum.to_label_pairs()) == pytest.approx({"XX": 0.5, "YY": 0.5})


def test_jw_string_for_distant_hopping():
    psum = jw_fermion_term("hopping", (0, 2), 3)
    labels = dict(psum.to_label_pairs())
    assert set(labels) == {"XZX", "YZY"}


def test_jw_matches_fermionic_matrix_h2(h2_terms):
    psum = jordan_wigner(h2_terms)
    dense_jw = psum.to_matrix()
    dense_f = h2_terms.to_matrix()
    assert np.max(np.abs(dense_jw - dense_f)) < 1e-12
    assert psum.is_hermitian()
    assert psum.identity_coefficient().real != 0.0  # includes the constant


def test_jw_linearity(model3_ints):
    # scaled(0.5) halves weights and constant, so JW must scale linearly
    tl = build_fermion_hamiltonian(model3_ints)
    half = tl.scaled(0.5)
    m_full = jordan_wigner(tl).to_matrix()
    m_half = jordan_wigner(half).to_matrix()
    assert np.max(np.abs(m_full - 2.0 * m_half)) < 1e-12


def test_jw_term_strings_mutually_commute(h2_terms, model3_ints):
    for tl in (h2_terms, build_fermion_hamiltonian(model3_ints)):
        for term in tl.terms:
            strings = jw_fermion_term(term.kind, term.indices, tl.n_spin).strings()
            for i in range(len(strings)):
                for j in range(i + 1, len(strings)):
                    assert strings[i][0].commutes_with(strings[j][0])


def test_jw_term_strings_share_x_mask(h2_terms):
    for term in h2_terms.terms:
        strings = jw_fermion_term(term.kind, term.indices, h2_terms.n_spin).strings()
        masks = {ps.x_mask for ps, _ in strings}
        assert len(masks) == 1


def test_label_pairs_serialization_round_trip(h2_terms):
    psum = jordan_wigner(h2_terms)
    again = PauliSum.from_labels(psum.to_label_pairs())
    assert np.max(np.abs(again.to_matrix() - psum.to_matrix())) < 1e-14
