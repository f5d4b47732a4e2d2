"""Trotter-error analysis for second-quantized electronic Hamiltonians.

The package quantifies first-order product-formula error as a function of
orbital basis (Givens-angle parameterization), Trotter series ordering,
and randomized propagator construction, using exact dense linear algebra
at desk scale.
"""

from .integrals import (
    FcidumpData,
    FcidumpError,
    SpinOrbitalIntegrals,
    parse_fcidump,
    to_spin_orbitals,
    write_fcidump,
)
from .fermions import (
    FermionTerm,
    FermionTermList,
    build_fermion_hamiltonian,
    one_norm,
    term_count,
)
from .paulis import PauliString, PauliSum, jordan_wigner, pauli_commutator, pauli_one_norm
from .givens import (
    GivensVector,
    rotation_matrix,
    rotation_unitary_fock,
    sample_random_basis,
    transform_integrals,
)
from .dense import (
    DenseOperator,
    SpectrumWindow,
    StateVector,
    effective_hamiltonian,
    exact_propagator,
    ground_state,
    normalize_spectrum,
    term_exponential,
    trotter_time_step,
)
from .propagators import (
    OrderingSpec,
    PropagatorSpec,
    eta_basis_propagator,
    eta_ordering_propagator,
    order_terms,
    trotter_propagator,
)
from .metrics import (
    AlphaBound,
    PerturbativeEstimate,
    TrotterErrorReport,
    acf_offset,
    alpha_bound,
    delta_e0_acf,
    delta_e0_heff,
    delta_e_pt,
    epsilon_2,
    fidelity_error,
    lambda_squared_bound,
    wavefunction_difference,
)

__version__ = "0.1.0"

__all__ = [
    "FcidumpData",
    "FcidumpError",
    "SpinOrbitalIntegrals",
    "parse_fcidump",
    "to_spin_orbitals",
    "write_fcidump",
    "FermionTerm",
    "FermionTermList",
    "build_fermion_hamiltonian",
    "one_norm",
    "term_count",
    "PauliString",
    "PauliSum",
    "jordan_wigner",
    "pauli_commutator",
    "pauli_one_norm",
    "GivensVector",
    "rotation_matrix",
    "rotation_unitary_fock",
    "sample_random_basis",
    "transform_integrals",
    "DenseOperator",
    "SpectrumWindow",
    "StateVector",
    "effective_hamiltonian",
    "exact_propagator",
    "ground_state",
    "normalize_spectrum",
    "term_exponential",
    "trotter_time_step",
    "OrderingSpec",
    "PropagatorSpec",
    "eta_basis_propagator",
    "eta_ordering_propagator",
    "order_terms",
    "trotter_propagator",
    "AlphaBound",
    "PerturbativeEstimate",
    "TrotterErrorReport",
    "acf_offset",
    "alpha_bound",
    "delta_e0_acf",
    "delta_e0_heff",
    "delta_e_pt",
    "epsilon_2",
    "fidelity_error",
    "lambda_squared_bound",
    "wavefunction_difference",
    "__version__",
]
