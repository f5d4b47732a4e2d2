"""Trotter-error measures, perturbative estimates, and commutator bounds.

Exact ground-state error is available through two independent routes:
diagonalization of the effective Hamiltonian (:func:`delta_e0_heff`) and
spectral-peak extraction from autocorrelation functions
(:func:`delta_e0_acf`).  Perturbative estimates follow the second-order
effective-Hamiltonian expansion; commutator bounds use the first-order
product-formula bound and its 1-norm relaxation.

All statevector contractions realize a term action ``H_k |psi>`` through
the term's Jordan-Wigner strings, never through dense term matrices.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import dense
from .dense import check_dense_limit, effective_hamiltonian, exact_propagator
from .fermions import FermionTerm, fermion_term_matrix
from .paulis import PauliSum, jw_fermion_term
from .propagators import PauliTerm, apply_trotter_step, trotter_propagator

DEGENERACY_TOL = 1e-10
DEFAULT_ACF_PRECISION = 1e-5
MAX_ACF_STEPS = 1 << 22
VECTOR_CACHE_BUDGET_BYTES = 1 << 30


@dataclass(frozen=True)
class TrotterErrorReport:
    """Ground-state Trotter error from one exact-error evaluation."""

    e0_exact: float
    e0_trotter: float
    delta_e0: float
    method: str  # "heff_diag" | "acf_ift"
    t: float
    epsilon: float | None = None
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "e0_exact": self.e0_exact,
            "e0_trotter": self.e0_trotter,
            "delta_e0": self.delta_e0,
            "method": self.method,
            "t": self.t,
            "epsilon": self.epsilon,
            "metadata": self.metadata,
        }
        return json.dumps(payload, indent=2)


def _term_sum_apply(terms, psi: np.ndarray, n_qubits: int) -> np.ndarray:
    """Apply a sum of terms to a statevector."""
    out = np.zeros_like(psi, dtype=complex)
    for term in terms:
        out += apply_term(term, psi, n_qubits)
    return out


def apply_term(term, psi: np.ndarray, n_qubits: int) -> np.ndarray:
    """``H_k |psi>`` via the term's JW Pauli strings."""
    if isinstance(term, PauliTerm):
        ps_sum = PauliSum(n_qubits, {(term.x_mask, term.z_mask): term.weight})
        return ps_sum.apply(psi)
    if isinstance(term, FermionTerm):
        psum = jw_fermion_term(term.kind, term.indices, n_qubits)
        return term.weight * psum.apply(psi)
    raise TypeError(f"unsupported term type {type(term)!r}")


def term_matrix(term, n_qubits: int) -> np.ndarray:
    """Dense matrix of one weighted term."""
    if isinstance(term, PauliTerm):
        return PauliSum(n_qubits, {(term.x_mask, term.z_mask): term.weight}).to_matrix()
    if isinstance(term, FermionTerm):
        return term.weight * fermion_term_matrix(term.kind, term.indices, n_qubits)
    raise TypeError(f"unsupported term type {type(term)!r}")


def term_operator_norm(term) -> float:
    """Spectral norm of the unit-weight operator part ``F_k`` (or ``P_k``).

    Every grouped fermionic pattern is a projector or a partial isometry
    plus its adjoint, and Pauli strings are unitary, so the norm is 1.
    """
    return 1.0


# ---------------------------------------------------------------------------
# exact error, effective-Hamiltonian route
# ---------------------------------------------------------------------------

def delta_e0_heff(u_trotter, h, t: float, **metadata) -> TrotterErrorReport:
    """Ground-state error via diagonalization of ``i log(U_Trotter)/t``."""
    h_eff = effective_hamiltonian(u_trotter, t)
    e0_trotter = float(np.linalg.eigvalsh(h_eff)[0])
    e0_exact = float(np.linalg.eigvalsh(dense.as_matrix(h))[0])
    return TrotterErrorReport(
        e0_exact=e0_exact,
        e0_trotter=e0_trotter,
        delta_e0=e0_trotter - e0_exact,
        method="heff_diag",
        t=t,
        metadata=dict(metadata),
    )


# ---------------------------------------------------------------------------
# exact error, ACF/IFT route
# ---------------------------------------------------------------------------

def _spectral_peak_energy(signal: np.ndarray, t: float) -> float:
    """Lowest-energy spectral peak of an autocorrelation signal.

    Peak = lowest-energy cyclic local maximum of ``|DFT|^2`` above 1e-3 of
    the global maximum, refined by 3-point quadratic interpolation.
    """
    n = signal.shape[0]
    power = np.abs(np.fft.fft(signal)) ** 2
    is_max = (power >= np.roll(power, 1)) & (power >= np.roll(power, -1))
    candidates = np.flatnonzero(is_max & (power >= 1e-3 * power.max()))
    if candidates.size == 0:
        raise ValueError("no spectral peak found")
    # E(m) = -2*pi*m_signed / (n*t); larger signed m = lower energy
    m_signed = np.where(candidates > n // 2, candidates - n, candidates)
    m_star = int(candidates[np.argmax(m_signed)])

    p_prev = power[(m_star - 1) % n]
    p_here = power[m_star]
    p_next = power[(m_star + 1) % n]
    denom = p_prev - 2.0 * p_here + p_next
    shift = 0.0 if denom == 0.0 else 0.5 * (p_prev - p_next) / denom
    m_peak = m_star + shift
    if m_peak > n / 2:
        m_peak -= n
    return float(-2.0 * math.pi * m_peak / (n * t))


def acf_steps_for_precision(t: float, eps: float = DEFAULT_ACF_PRECISION) -> int:
    """Smallest power-of-two step count whose grid spacing is below eps."""
    n = 2 * math.pi / (t * eps)
    steps = 1 << max(4, math.ceil(math.log2(n)))
    if steps > MAX_ACF_STEPS:
        raise ValueError(f"precision {eps} needs {steps} steps > cap {MAX_ACF_STEPS}")
    return steps


def delta_e0_acf(
    h,
    terms,
    t: float,
    n_qubits: int,
    constant: float = 0.0,
    n_steps: int | None = None,
    eps: float = DEFAULT_ACF_PRECISION,
    **metadata,
) -> TrotterErrorReport:
    """Ground-state error from spectral peaks of the two autocorrelation signals.

    Both signals start from the exact ground state; the trotterized one is
    sampled by repeatedly applying the propagator to the statevector.
    """
    mat = dense.as_matrix(h)
    evals = np.linalg.eigvalsh(mat)
    e_abs_max = float(max(abs(evals[0]), abs(evals[-1])))
    if e_abs_max * t >= math.pi:
        raise ValueError(
            f"time step violates the sampling guard: |E|max * t = {e_abs_max * t:.4f} >= pi"
        )
    if n_steps is None:
        n_steps = acf_steps_for_precision(t, eps)
    epsilon = 2.0 * math.pi / (n_steps * t)

    e0, psi0 = dense.ground_state(mat)
    u_exact = exact_propagator(mat, t)
    u_trot = trotter_propagator(terms, t, n_qubits, constant)

    acf_exact = np.empty(n_steps, dtype=complex)
    acf_trot = np.empty(n_steps, dtype=complex)
    psi_e = psi0.copy()
    psi_t = psi0.copy()
    for k in range(n_steps):
        acf_exact[k] = np.vdot(psi0, psi_e)
        acf_trot[k] = np.vdot(psi0, psi_t)
        psi_e = u_exact @ psi_e
        psi_t = u_trot @ psi_t

    e0_est = _spectral_peak_energy(acf_exact, t)
    e0_trot_est = _spectral_peak_energy(acf_trot, t)
    return TrotterErrorReport(
        e0_exact=e0_est,
        e0_trotter=e0_trot_est,
        delta_e0=e0_trot_est - e0_est,
        method="acf_ift",
        t=t,
        epsilon=epsilon,
        metadata=dict(metadata),
    )


# ---------------------------------------------------------------------------
# single-step wave-function error measures
# ---------------------------------------------------------------------------

def _initial_state(h, psi0: np.ndarray | None) -> np.ndarray:
    if psi0 is not None:
        return np.asarray(psi0, dtype=complex)
    _, vec = dense.ground_state(dense.as_matrix(h))
    return vec


def fidelity_error(h, terms, t: float, n_qubits: int, constant: float = 0.0,
                   psi0: np.ndarray | None = None) -> complex:
    """``f(t) = 1 - <U psi | U_Trotter psi>`` after a single step."""
    psi = _initial_state(h, psi0)
    psi_exact = exact_propagator(dense.as_matrix(h), t) @ psi
    psi_trot = apply_trotter_step(terms, t, n_qubits, psi.copy(), constant)
    return complex(1.0 - np.vdot(psi_exact, psi_trot))


def acf_offset(h, terms, t: float, n_qubits: int, constant: float = 0.0,
               psi0: np.ndarray | None = None) -> float:
    """``g(t) = |<psi|U psi> - <psi|U_Trotter psi>|`` after a single step."""
    psi = _initial_state(h, psi0)
    psi_exact = exact_propagator(dense.as_matrix(h), t) @ psi
    psi_trot = apply_trotter_step(terms, t, n_qubits, psi.copy(), constant)
    return float(abs(np.vdot(psi, psi_exact) - np.vdot(psi, psi_trot)))


def wavefunction_difference(h, terms, t: float, n_qubits: int, constant: float = 0.0,
                            psi0: np.ndarray | None = None) -> float:
    """L2 norm of the single-step state difference."""
    psi = _initial_state(h, psi0)
    psi_exact = exact_propagator(dense.as_matrix(h), t) @ psi
    psi_trot = apply_trotter_step(terms, t, n_qubits, psi.copy(), constant)
    return float(np.linalg.norm(psi_exact - psi_trot))


# ---------------------------------------------------------------------------
# perturbative estimates
# ---------------------------------------------------------------------------

def _cached_term_vectors(terms, psi0: np.ndarray, n_qubits: int,
                         budget: int = VECTOR_CACHE_BUDGET_BYTES) -> np.ndarray | None:
    needed = len(terms) * psi0.shape[0] * 16
    if needed > budget:
        return None
    cache = np.empty((len(terms), psi0.shape[0]), dtype=complex)
    for k, term in enumerate(terms):
        cache[k] = apply_term(term, psi0, n_qubits)
    return cache


def v2_expectation(terms, psi0: np.ndarray, n_qubits: int,
                   budget: int = VECTOR_CACHE_BUDGET_BYTES) -> float:
    """Signed ground-state expectation of the double-commutator sum.

    Evaluates ``-(1/3) sum_{a<b} sum_{c>=b} (1 - delta_bc/2)
    <psi0|[H_c, [H_b, H_a]]|psi0>`` by statevector contraction, using
    ``<psi|[H_c, D]|psi> = 2 Re <H_c psi, D psi>`` for hermitian ``H_c``
    and anti-hermitian ``D = [H_b, H_a]``.

    Term indices a, b, c refer to positions in the given ordered sequence.
    """
    gamma = len(terms)
    if gamma < 2:
        return 0.0
    psi0 = np.asarray(psi0, dtype=complex)
    cache = _cached_term_vectors(terms, psi0, n_qubits, budget)

    def vec(k: int) -> np.ndarray:
        return cache[k] if cache is not None else apply_term(terms[k], psi0, n_qubits)

    total = 0.0
    for b in range(1, gamma):
        v_b = vec(b)
        # weights (1 - delta_bc/2) for c >= b
        if cache is not None:
            tail = cache[b:]
        for a in range(b):
            d_ab = apply_term(terms[b], vec(a), n_qubits) - apply_term(terms[a], v_b, n_qubits)
            if cache is not None:
                overlaps = 2.0 * np.real(np.conjugate(tail) @ d_ab)
                overlaps[0] *= 0.5
                total += float(np.sum(overlaps))
            else:
                for c in range(b, gamma):
                    w = 0.5 if c == b else 1.0
                    total += w * 2.0 * float(np.real(np.vdot(vec(c), d_ab)))
    return -total / 3.0


def epsilon_2(terms, psi0: np.ndarray, n_qubits: int,
              budget: int = VECTOR_CACHE_BUDGET_BYTES) -> float:
    """Time-independent perturbative error estimate ``|<psi0|v2|psi0>|``."""
    return abs(v2_expectation(terms, psi0, n_qubits, budget))


def v1_applied(terms, psi0: np.ndarray, n_qubits: int) -> np.ndarray:
    """``V_1 |psi0>`` with ``V_1 = -(i/2) sum_{a<b} [H_b, H_a]``.

    Uses prefix/suffix accumulation: 2*Gamma term applications in total.
    """
    gamma = len(terms)
    psi0 = np.asarray(psi0, dtype=complex)
    if gamma < 2:
        return np.zeros_like(psi0)
    vs = [apply_term(term, psi0, n_qubits) for term in terms]
    out = np.zeros_like(psi0)
    prefix = np.zeros_like(psi0)
    suffix = np.zeros_like(psi0)
    # sum_{a<b} H_b H_a psi = sum_b H_b (sum_{a<b} v_a)
    for b in range(gamma):
        if b > 0:
            prefix += vs[b - 1]
            out += apply_term(terms[b], prefix, n_qubits)
    # subtract sum_{a<b} H_a H_b psi = sum_a H_a (sum_{b>a} v_b)
    for a in range(gamma - 1, -1, -1):
        if a < gamma - 1:
            suffix += vs[a + 1]
            out -= apply_term(terms[a], suffix, n_qubits)
    return -0.5j * out


@dataclass(frozen=True)
class PerturbativeEstimate:
    """Second-order perturbative estimate of the ground-state Trotter error.

    ``value_abs_first`` takes the absolute value of the double-commutator
    expectation before adding the (signed) second-order sum, as the
    estimate is usually written; ``value_abs_last`` is the magnitude of
    the fully signed total, which approximates ``|Delta E0|`` as t -> 0.
    """

    v2_expectation: float
    v1_second_order: float
    t: float
    excluded_degenerate: int = 0

    @property
    def v2_term(self) -> float:
        return abs(self.v2_expectation) * self.t**2

    @property
    def v1_term(self) -> float:
        return self.v1_second_order * self.t**2

    @property
    def signed_total(self) -> float:
        return (self.v2_expectation + self.v1_second_order) * self.t**2

    @property
    def value_abs_first(self) -> float:
        return self.v2_term + self.v1_term

    @property
    def value_abs_last(self) -> float:
        return abs(self.signed_total)


def delta_e_pt(terms, eigenvalues: np.ndarray, eigenvectors: np.ndarray,
               t: float, n_qubits: int) -> PerturbativeEstimate:
    """Second-order perturbative error estimate from a full eigensystem.

    ``eigenvalues``/``eigenvectors`` are the dense eigensystem of the
    Hamiltonian (ascending).  Degenerate excited states within 1e-10 of
    the ground energy are excluded with a warning.
    """
    psi0 = eigenvectors[:, 0]
    e0 = float(eigenvalues[0])
    v2 = v2_expectation(terms, psi0, n_qubits)
    w = v1_applied(terms, psi0, n_qubits)
    amps = eigenvectors.conj().T @ w
    second = 0.0
    excluded = 0
    for n in range(1, eigenvalues.shape[0]):
        gap = e0 - float(eigenvalues[n])
        if abs(gap) < DEGENERACY_TOL:
            if abs(amps[n]) ** 2 > 0.0:
                excluded += 1
            continue
        second += float(abs(amps[n]) ** 2) / gap
    if excluded:
        warnings.warn(f"excluded {excluded} degenerate states from the PT sum")
    return PerturbativeEstimate(
        v2_expectation=v2, v1_second_order=second, t=t, excluded_degenerate=excluded
    )


# ---------------------------------------------------------------------------
# commutator bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaBound:
    """First-order commutator bound and the error bounds it implies."""

    alpha: float
    t: float | None = None

    @property
    def energy_bound(self) -> float | None:
        return None if self.t is None else self.t * self.alpha / 2.0

    @property
    def propagator_bound(self) -> float | None:
        return None if self.t is None else self.t**2 * self.alpha / 2.0


def alpha_bound(terms, n_qubits: int, t: float | None = None) -> AlphaBound:
    """``alpha = sum_a || sum_{b>a} [H_b, H_a] ||_2`` for the given order.

    Assembled with suffix sums (two dense products per term); each norm is
    the largest magnitude eigenvalue of the hermitian ``i * M_a``.
    """
    check_dense_limit(n_qubits)
    gamma = len(terms)
    if gamma < 2:
        return AlphaBound(0.0, t)
    dim = 1 << n_qubits
    suffix = np.zeros((dim, dim), dtype=complex)
    alpha = 0.0
    for a in range(gamma - 1, -1, -1):
        h_a = term_matrix(terms[a], n_qubits)
        if a < gamma - 1:
            m_a = suffix @ h_a - h_a @ suffix
            norms = np.linalg.eigvalsh(1j * m_a)
            alpha += float(max(abs(norms[0]), abs(norms[-1])))
        suffix += h_a
    return AlphaBound(float(alpha), t)


def lambda_squared_bound(terms) -> float:
    """1-norm relaxation ``alpha' >= alpha``.

    ``alpha' = sum_{a<b} 2 |h_a||h_b| ||F_a|| ||F_b||``; with unit operator
    norms this is ``(sum_k m_k)^2 - sum_k m_k^2`` over ``m_k = |h_k|``.
    """
    m = np.array([abs(term.weight) * term_operator_norm(term) for term in terms])
    if m.size < 2:
        return 0.0
    return float(np.sum(m) ** 2 - np.sum(m**2))


def pearson_r2(x: np.ndarray, y: np.ndarray) -> float:
    """Squared Pearson correlation coefficient."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("need two equal-length samples with at least 2 points")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(np.sum(xc**2)) * float(np.sum(yc**2)))
    if denom == 0.0:
        raise ValueError("zero variance sample")
    r = float(np.sum(xc * yc)) / denom
    return r * r
