import numpy as np
import pytest
import scipy.linalg

from trotterkit.dense import exact_propagator, normalize_spectrum, term_exponential
from trotterkit.fermions import FermionTerm, FermionTermList, build_fermion_hamiltonian
from trotterkit.givens import GivensVector, rotation_unitary_fock, sample_random_basis
from trotterkit.paulis import jordan_wigner
from trotterkit.propagators import (
    OrderingSpec,
    PauliTerm,
    PropagatorSpec,
    align_terms,
    build_term_sequence,
    eta_basis_propagator,
    eta_ordering_propagator,
    order_terms,
    pauli_terms,
    random_permutation,
    trotter_propagator,
)

import oracles


def simple_terms():
    return [
        FermionTerm(0.5, "number", (0,)),
        FermionTerm(2.0, "hopping", (0, 1)),
        FermionTerm(-1.0, "number_number", (0, 1)),
    ]


def test_magnitude_ordering():
    ordered = order_terms(simple_terms(), OrderingSpec("magnitude"))
    assert [t.weight for t in ordered] == [2.0, -1.0, 0.5]


def test_magnitude_tie_break_by_signature():
    terms = [
        FermionTerm(1.0, "number", (1,)),
        FermionTerm(-1.0, "number", (0,)),
    ]
    ordered = order_terms(terms, OrderingSpec("magnitude"))
    assert [t.indices for t in ordered] == [(0,), (1,)]


def test_index_ordering_weight_independent():
    terms = simple_terms()
    ordered = order_terms(terms, OrderingSpec("index"))
    rescaled = [t.scaled(3.7) for t in terms]
    ordered2 = order_terms(rescaled, OrderingSpec("index"))
    assert [t.signature for t in ordered] == [t.signature for t in ordered2]
    assert [t.kind for t in ordered] == ["number", "hopping", "number_number"]


def test_random_ordering_deterministic():
    terms = simple_terms()
    a = order_terms(terms, OrderingSpec("random", seed=5))
    b = order_terms(terms, OrderingSpec("random", seed=5))
    assert [t.signature for t in a] == [t.signature for t in b]


def test_explicit_permutation_validation():
    with pytest.raises(ValueError, match="bijection"):
        order_terms(simple_terms(), OrderingSpec("explicit", permutation=(1, 2)))
    ordered = order_terms(simple_terms(), OrderingSpec("explicit", permutation=(3, 1, 2)))
    assert ordered[0].kind == "number_number"


def test_alignment_replays_reference_magnitude_order(h2_ints):
    # transform the basis, then align back to the reference magnitude order
    from trotterkit.givens import transform_integrals

    reference = build_fermion_hamiltonian(h2_ints)
    theta = sample_random_basis(3, 2)
    transformed = build_fermion_hamiltonian(transform_integrals(h2_ints, theta))
    ordered, missing = align_terms(list(transformed.terms), reference)
    ref_positions = {
        t.signature: i
        for i, t in enumerate(order_terms(reference, OrderingSpec("magnitude")))
    }
    matched = [t for t in ordered if t.signature in ref_positions]
    positions = [ref_positions[t.signature] for t in matched]
    assert positions == sorted(positions)
    assert not missing or all(isinstance(s, tuple) for s in missing)


def test_alignment_warns_on_unmatched_reference():
    ref = FermionTermList(2, tuple(simple_terms()))
    own = [FermionTerm(1.0, "number", (0,))]
    with pytest.warns(UserWarning, match="no matching term"):
        ordered = order_terms(own, OrderingSpec("alignment", alignment=ref))
    assert len(ordered) == 1


def test_trotter_single_term_equals_term_exponential():
    term = FermionTerm(0.8, "hopping", (0, 1))
    u = trotter_propagator([term], 0.6, 2)
    assert np.max(np.abs(u - term_exponential(term, 0.6, 2))) < 1e-13


def test_trotter_commuting_terms_equal_exact():
    terms = [
        FermionTerm(0.5, "number", (0,)),
        FermionTerm(-0.3, "number", (1,)),
        FermionTerm(0.9, "number_number", (0, 1)),
    ]
    h = sum(oracles.term_matrix_bruteforce(t, 2) for t in terms)
    u_trot = trotter_propagator(terms, 1.1, 2)
    assert np.max(np.abs(u_trot - exact_propagator(h, 1.1))) < 1e-12


def test_trotter_orientation_first_term_rightmost():
    t1 = PauliTerm(0.4, 1, 0, 1)  # X
    t2 = PauliTerm(-0.7, 0, 1, 1)  # Z
    u = trotter_propagator([t1, t2], 0.3, 1)
    ref = (
        scipy.linalg.expm(-1j * 0.3 * -0.7 * oracles.SZ)
        @ scipy.linalg.expm(-1j * 0.3 * 0.4 * oracles.SX)
    )
    assert np.max(np.abs(u - ref)) < 1e-14


def test_trotter_product_matches_expm_sequence(h2_terms):
    terms = order_terms(h2_terms, OrderingSpec("magnitude"))[:6]
    t = 0.35
    u = trotter_propagator(terms, t, h2_terms.n_spin)
    ref = np.eye(16, dtype=complex)
    for term in terms:
        ref = scipy.linalg.expm(-1j * t * oracles.term_matrix_bruteforce(term, 4)) @ ref
    assert np.max(np.abs(u - ref)) < 1e-12


def test_trotter_unitary_and_constant_phase(h2_terms):
    terms = order_terms(h2_terms, OrderingSpec("magnitude"))
    u0 = trotter_propagator(terms, 0.9, 4)
    uc = trotter_propagator(terms, 0.9, 4, constant=0.25)
    assert np.max(np.abs(u0.conj().T @ u0 - np.eye(16))) < 1e-11
    assert np.max(np.abs(uc - np.exp(-1j * 0.25 * 0.9) * u0)) < 1e-13


def test_trotter_converges_to_exact_first_order(h2_ints):
    tl = build_fermion_hamiltonian(h2_ints)
    hn, window = normalize_spectrum(tl.to_matrix())
    tln = tl.scaled(1.0 / window.width, -window.e_max / window.width)
    terms = order_terms(tln, OrderingSpec("magnitude"))
    t_total = 0.95 * np.pi
    u_exact = exact_propagator(hn, t_total)
    errs = []
    for s in (1, 2, 4, 8, 16, 32):
        u_s = np.linalg.matrix_power(
            trotter_propagator(terms, t_total / s, 4, tln.constant), s
        )
        errs.append(np.linalg.norm(u_s - u_exact, 2))
    errs = np.array(errs)
    slopes = np.log2(errs[:-1] / errs[1:])
    assert errs[-1] < errs[0] / 20
    assert abs(np.mean(slopes[2:]) - 1.0) < 0.2  # first-order formula


def test_qubit_representation_terms(h2_terms):
    psum = jordan_wigner(h2_terms)
    terms, constant = pauli_terms(psum)
    assert constant == pytest.approx(psum.identity_coefficient().real)
    assert all(isinstance(t, PauliTerm) for t in terms)
    # qubit trotter product is unitary and includes the constant phase
    u = trotter_propagator(terms, 0.7, 4, constant)
    assert np.max(np.abs(u.conj().T @ u - np.eye(16))) < 1e-11


def test_eta_basis_all_zero_equals_multi_step(h2_ints):
    tl = build_fermion_hamiltonian(h2_ints)
    terms = order_terms(tl, OrderingSpec("index"))
    t = 1.0
    spec = PropagatorSpec(
        ordering=OrderingSpec("index"), t=t, eta=3,
        bases=(GivensVector.zero(2),) * 3,
    )
    u_eta = eta_basis_propagator(h2_ints, spec)
    u_step = trotter_propagator(terms, t / 3, 4, tl.constant)
    assert np.max(np.abs(u_eta - np.linalg.matrix_power(u_step, 3))) < 1e-12


def test_eta_basis_single_zero_equals_plain(h2_ints):
    tl = build_fermion_hamiltonian(h2_ints)
    terms = order_terms(tl, OrderingSpec("index"))
    spec = PropagatorSpec(ordering=OrderingSpec("index"), t=0.8, eta=1,
                          bases=(GivensVector.zero(2),))
    u_eta = eta_basis_propagator(h2_ints, spec)
    assert np.max(np.abs(u_eta - trotter_propagator(terms, 0.8, 4, tl.constant))) < 1e-13


def test_eta_basis_equal_bases_structure(h2_ints):
    # all bases equal theta: U = (U_R^+ U_trot(theta-basis, t/eta) U_R)^eta
    from trotterkit.givens import transform_integrals

    theta = sample_random_basis(21, 2)
    eta, t = 2, 0.9
    spec = PropagatorSpec(ordering=OrderingSpec("index"), t=t, eta=eta,
                          bases=(theta, theta))
    u_eta = eta_basis_propagator(h2_ints, spec)
    tl_t = build_fermion_hamiltonian(transform_integrals(h2_ints, theta))
    terms_t = order_terms(tl_t, OrderingSpec("index"))
    u_r = rotation_unitary_fock(theta, 4)
    block = u_r.conj().T @ trotter_propagator(terms_t, t / eta, 4, tl_t.constant) @ u_r
    assert np.max(np.abs(u_eta - np.linalg.matrix_power(block, eta))) < 1e-12


def test_eta_ordering_identical_orderings(h2_terms):
    spec = PropagatorSpec(
        t=1.2, eta=4, orderings=tuple(OrderingSpec("index") for _ in range(4)),
    )
    u = eta_ordering_propagator(h2_terms, spec)
    terms = order_terms(h2_terms, OrderingSpec("index"))
    u_ref = np.linalg.matrix_power(
        trotter_propagator(terms, 0.3, 4, h2_terms.constant), 4
    )
    assert np.max(np.abs(u - u_ref)) < 1e-12


def test_eta_propagators_unitary(model3_ints):
    rng_orderings = tuple(
        OrderingSpec("random", seed=s) for s in range(3)
    )
    tl = build_fermion_hamiltonian(model3_ints)
    spec = PropagatorSpec(t=0.5, eta=3, orderings=rng_orderings)
    u = eta_ordering_propagator(tl, spec)
    assert np.max(np.abs(u.conj().T @ u - np.eye(64))) < 1e-11


def test_propagator_spec_validation():
    with pytest.raises(ValueError, match="not both"):
        PropagatorSpec(eta=2, bases=(GivensVector.zero(2),) * 2,
                       orderings=(OrderingSpec("index"),) * 2)
    with pytest.raises(ValueError, match="length eta"):
        PropagatorSpec(eta=3, bases=(GivensVector.zero(2),) * 2)
    with pytest.raises(ValueError, match="eta"):
        PropagatorSpec(eta=0)


def test_random_permutation_seeded():
    assert random_permutation(9, 6) == random_permutation(9, 6)
    assert sorted(random_permutation(9, 6)) == [1, 2, 3, 4, 5, 6]


def test_build_term_sequence_both_representations(h2_ints):
    for rep in ("fermionic", "qubit"):
        terms, constant = build_term_sequence(h2_ints, rep, OrderingSpec("magnitude"))
        assert len(terms) > 0
        weights = [abs(t.weight) for t in terms]
        assert weights == sorted(weights, reverse=True)
        assert isinstance(constant, float)
