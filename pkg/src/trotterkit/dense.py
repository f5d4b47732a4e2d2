"""Dense operator and statevector backend.

All full-matrix operations (propagators, effective Hamiltonians,
eigensolves) are limited to ``DENSE_QUBIT_LIMIT`` qubits; statevector-only
paths may go up to ``STATEVECTOR_QUBIT_LIMIT``.  Eigenproblems use dense
hermitian solvers; unitaries are eigendecomposed through a complex Schur
factorization, which is exact for normal matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .fermions import FermionTerm, fermion_term_matrix
from .paulis import jw_fermion_term

DENSE_QUBIT_LIMIT = 12
STATEVECTOR_QUBIT_LIMIT = 20

FLAG_TOL = 1e-10


class DimensionError(ValueError):
    """Operation requested beyond the configured dense/statevector limits."""


class BranchCutError(ArithmeticError):
    """A unitary eigenphase fell on the principal-logarithm branch cut."""


def check_dense_limit(n_qubits: int) -> None:
    if n_qubits > DENSE_QUBIT_LIMIT:
        raise DimensionError(
            f"{n_qubits} qubits exceeds the dense limit of {DENSE_QUBIT_LIMIT}"
        )


def check_statevector_limit(n_qubits: int) -> None:
    if n_qubits > STATEVECTOR_QUBIT_LIMIT:
        raise DimensionError(
            f"{n_qubits} qubits exceeds the statevector limit of {STATEVECTOR_QUBIT_LIMIT}"
        )


@dataclass(frozen=True)
class StateVector:
    """Normalized 2^N-dimensional complex state."""

    amplitudes: np.ndarray
    n_qubits: int

    @classmethod
    def from_array(cls, amplitudes: np.ndarray) -> "StateVector":
        amplitudes = np.asarray(amplitudes, dtype=complex)
        n = int(round(math.log2(amplitudes.shape[0])))
        if 1 << n != amplitudes.shape[0]:
            raise ValueError("statevector length must be a power of two")
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"statevector norm {norm} deviates from 1")
        return cls(amplitudes, n)


@dataclass(frozen=True)
class DenseOperator:
    """2^N x 2^N complex matrix with verified structure flags."""

    matrix: np.ndarray
    hermitian: bool = False
    unitary: bool = False

    @classmethod
    def hermitian_op(cls, matrix: np.ndarray) -> "DenseOperator":
        matrix = np.asarray(matrix, dtype=complex)
        dev = np.max(np.abs(matrix - matrix.conj().T))
        if dev > FLAG_TOL:
            raise ValueError(f"matrix is not hermitian (deviation {dev:.3e})")
        return cls(matrix, hermitian=True)

    @classmethod
    def unitary_op(cls, matrix: np.ndarray) -> "DenseOperator":
        matrix = np.asarray(matrix, dtype=complex)
        dev = np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0])))
        if dev > FLAG_TOL:
            raise ValueError(f"matrix is not unitary (deviation {dev:.3e})")
        return cls(matrix, unitary=True)

    @property
    def n_qubits(self) -> int:
        return int(round(math.log2(self.matrix.shape[0])))


@dataclass(frozen=True)
class SpectrumWindow:
    """Extreme eigenvalues used for spectrum normalization."""

    e_min: float
    e_max: float

    def __post_init__(self):
        if not self.e_min < self.e_max:
            raise ValueError(f"need e_min < e_max, got [{self.e_min}, {self.e_max}]")

    @property
    def width(self) -> float:
        return self.e_max - self.e_min


def as_matrix(op) -> np.ndarray:
    """Accept a DenseOperator or a plain ndarray."""
    return op.matrix if isinstance(op, DenseOperator) else np.asarray(op)


# ---------------------------------------------------------------------------
# eigensolves
# ---------------------------------------------------------------------------

def ground_state(h) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of a hermitian matrix.

    The eigenvector phase is fixed so its largest-magnitude amplitude is
    real positive, which makes degenerate cases deterministic.
    """
    mat = as_matrix(h)
    if isinstance(h, DenseOperator) and not h.hermitian:
        raise ValueError("ground_state requires a hermitian operator")
    if not isinstance(h, DenseOperator):
        dev = np.max(np.abs(mat - mat.conj().T))
        if dev > FLAG_TOL:
            raise ValueError(f"ground_state requires a hermitian matrix (dev {dev:.3e})")
    evals, evecs = np.linalg.eigh(mat)
    vec = evecs[:, 0]
    pivot = int(np.argmax(np.abs(vec)))
    phase = vec[pivot] / abs(vec[pivot])
    vec = vec / phase
    return float(evals[0]), vec


def unitary_eig(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and orthonormal eigenvectors of a unitary matrix.

    Uses the complex Schur form; for normal matrices the triangular factor
    is diagonal, so Q holds orthonormal eigenvectors.
    """
    t, q = scipy.linalg.schur(u, output="complex")
    off = np.max(np.abs(t - np.diag(np.diag(t))))
    if off > 1e-8:
        raise ValueError(f"matrix is not normal (Schur off-diagonal {off:.3e})")
    return np.diag(t).copy(), q


def exact_propagator(h, t: float) -> np.ndarray:
    """``exp(-i H t)`` through a hermitian eigendecomposition."""
    mat = as_matrix(h)
    dev = np.max(np.abs(mat - mat.conj().T))
    if dev > FLAG_TOL:
        raise ValueError(f"exact_propagator requires hermitian input (dev {dev:.3e})")
    evals, evecs = np.linalg.eigh(mat)
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def effective_hamiltonian(u, t: float, branch_tol: float = 1e-8) -> np.ndarray:
    """Principal-branch ``H_eff = i log(U) / t`` as a hermitian matrix.

    Raises :class:`BranchCutError` when any eigenphase sits within
    ``branch_tol`` of the branch cut at pi.
    """
    if t <= 0:
        raise ValueError("time step must be positive")
    mat = as_matrix(u)
    dev = np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))
    if dev > FLAG_TOL:
        raise ValueError(f"effective_hamiltonian requires unitary input (dev {dev:.3e})")
    lams, q = unitary_eig(mat)
    phases = np.angle(lams)  # in (-pi, pi]
    if np.any(np.abs(np.abs(phases) - np.pi) < branch_tol):
        raise BranchCutError("unitary eigenphase within tolerance of the branch cut")
    energies = -phases / t
    h_eff = (q * energies) @ q.conj().T
    return 0.5 * (h_eff + h_eff.conj().T)


def normalize_spectrum(h) -> tuple[np.ndarray, SpectrumWindow]:
    """Affine map sending the spectrum onto ``[-1, 0]``.

    Returns ``H' = (H - e_max I) / (e_max - e_min)`` and the window needed
    to recover physical units.
    """
    mat = as_matrix(h)
    evals = np.linalg.eigvalsh(mat)
    window = SpectrumWindow(float(evals[0]), float(evals[-1]))
    shifted = (mat - window.e_max * np.eye(mat.shape[0])) / window.width
    return shifted, window


def trotter_time_step(e0: float) -> float:
    """Largest sampling-safe step, ``0.95 * pi / |E0|``."""
    if e0 == 0.0:
        raise ValueError("cannot derive a time step from zero energy")
    return 0.95 * math.pi / abs(e0)


# ---------------------------------------------------------------------------
# term exponentials
# ---------------------------------------------------------------------------

def term_exp_pair_diagonals(
    strings, weight_t: float, dim: int
) -> tuple[int, np.ndarray, np.ndarray] | None:
    """Two-diagonal form of a grouped-term exponential.

    Every JW string of one grouped term carries the same x-mask (the
    term's excitation pattern), so ``prod_m exp(-i w t c_m P_m)`` closes on
    the pairs ``(|b>, |b^x>)`` and equals ``diag(a) + X(x) diag(b)``:
    ``E|b> = a[b] |b> + b_[b] |b^x>``.  Returns ``(x, a, b_)``, or None if
    the strings do not share an x-mask (caller must fall back).
    """
    x_common = None
    for ps, _ in strings:
        if x_common is None:
            x_common = ps.x_mask
        elif ps.x_mask != x_common:
            return None
    if x_common is None:
        return 0, np.ones(dim, dtype=complex), np.zeros(dim, dtype=complex)

    idx = np.arange(dim)
    perm = idx ^ x_common
    a = np.ones(dim, dtype=complex)
    b_ = np.zeros(dim, dtype=complex)
    for ps, coeff in strings:
        angle = weight_t * coeff.real
        c, s = math.cos(angle), math.sin(angle)
        n_y = bin(ps.x_mask & ps.z_mask).count("1")
        val = ((1j) ** (n_y % 4)) * (1.0 - 2.0 * (np.bitwise_count(idx & ps.z_mask) & 1))
        if x_common == 0:
            a = a * (c - 1j * s * val)
            continue
        val_perm = val[perm]
        a, b_ = c * a - 1j * s * val_perm * b_, c * b_ - 1j * s * val * a
    return x_common, a, b_


def pauli_exp_apply(key: tuple[int, int], coeff: float, angle: float, psi: np.ndarray) -> np.ndarray:
    """``exp(-i * angle * coeff * P) |psi>`` for one label Pauli."""
    x, z = key
    a = angle * coeff
    if x == 0 and z == 0:
        return np.exp(-1j * a) * psi
    idx = np.arange(psi.shape[0])
    n_y = bin(x & z).count("1")
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & z) & 1)
    p_psi = np.empty_like(psi, dtype=complex)
    p_psi[idx ^ x] = (((1j) ** (n_y % 4)) * signs) * psi
    return math.cos(a) * psi - 1j * math.sin(a) * p_psi


def term_exponential(term, t: float, n_qubits: int) -> np.ndarray:
    """Exact unitary ``exp(-i H_k t)`` for one weighted term.

    Pauli terms use the closed form ``cos(ht) I - i sin(ht) P``; fermionic
    terms combine the closed-form exponentials of their mutually commuting
    JW strings (two-diagonal form).  If the commutation assertion ever
    fails, the code falls back to a dense eigendecomposition.
    """
    check_dense_limit(n_qubits)
    dim = 1 << n_qubits
    from .propagators import PauliTerm

    if isinstance(term, PauliTerm):
        pair = term_exp_pair_diagonals([(term, 1.0 + 0.0j)], term.weight * t, dim)
    elif isinstance(term, FermionTerm):
        psum = jw_fermion_term(term.kind, term.indices, n_qubits)
        strings = psum.strings()
        if not _strings_commute(strings):
            mat = term.weight * fermion_term_matrix(term.kind, term.indices, n_qubits)
            return exact_propagator(mat, t)
        pair = term_exp_pair_diagonals(strings, term.weight * t, dim)
    else:
        raise TypeError(f"unsupported term type {type(term)!r}")

    if pair is None:  # mixed x-masks: exact dense route
        mat = term.weight * fermion_term_matrix(term.kind, term.indices, n_qubits)
        return exact_propagator(mat, t)
    x, diag_a, diag_b = pair
    mat = np.diag(diag_a)
    if x != 0:
        idx = np.arange(dim)
        mat[idx ^ x, idx] += diag_b
    return mat


def _strings_commute(strings) -> bool:
    for i in range(len(strings)):
        for j in range(i + 1, len(strings)):
            if not strings[i][0].commutes_with(strings[j][0]):
                return False
    return True


def apply_term_exponential(term, t: float, n_qubits: int, psi: np.ndarray) -> np.ndarray:
    """Statevector version of :func:`term_exponential` (no dense matrix)."""
    check_statevector_limit(n_qubits)
    from .propagators import PauliTerm

    if isinstance(term, PauliTerm):
        return pauli_exp_apply((term.x_mask, term.z_mask), term.weight, t, psi)
    psum = jw_fermion_term(term.kind, term.indices, n_qubits)
    strings = psum.strings()
    if not _strings_commute(strings):
        raise AssertionError("JW strings of a grouped term must commute")
    pair = term_exp_pair_diagonals(strings, term.weight * t, psi.shape[0])
    if pair is None:
        for ps, coeff in strings:
            psi = pauli_exp_apply((ps.x_mask, ps.z_mask), coeff.real * term.weight, t, psi)
        return psi
    x, diag_a, diag_b = pair
    if x == 0:
        return diag_a * psi
    perm = np.arange(psi.shape[0]) ^ x
    return diag_a * psi + diag_b[perm] * psi[perm]
