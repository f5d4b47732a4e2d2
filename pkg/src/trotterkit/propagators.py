"""Ordered Trotter products and randomized propagator constructions.

Product orientation, fixed globally: in ``prod_k exp(-i H_k t)`` the first
term of the ordered sequence acts first on the state, i.e. it is the
rightmost matrix factor.  The same orientation applies to the sub-step
index ``n`` of the eta-propagators.

The identity offset of a term list (core energy, normalization shift) is
folded into the propagator as a global phase ``exp(-i * constant * t)`` so
that effective-Hamiltonian spectra line up with the full Hamiltonian.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import dense
from .dense import check_dense_limit
from .fermions import (
    DEFAULT_PRUNE,
    FermionTerm,
    FermionTermList,
    build_fermion_hamiltonian,
)
from .givens import GivensVector, rotation_unitary_fock, transform_integrals
from .integrals import SpinOrbitalIntegrals
from .paulis import PauliSum, _key_label


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string treated as a Trotter term."""

    weight: float
    x_mask: int
    z_mask: int
    n_qubits: int

    @property
    def signature(self) -> tuple:
        return ("pauli", self.x_mask, self.z_mask)

    @property
    def index_key(self) -> tuple:
        return (self.label(),)

    def label(self) -> str:
        return _key_label((self.x_mask, self.z_mask), self.n_qubits)

    def scaled(self, factor: float) -> "PauliTerm":
        return PauliTerm(self.weight * factor, self.x_mask, self.z_mask, self.n_qubits)


def pauli_terms(psum: PauliSum) -> tuple[list[PauliTerm], float]:
    """Split a hermitian PauliSum into Trotter terms and the identity offset."""
    if not psum.is_hermitian():
        raise ValueError("qubit Hamiltonian must be hermitian")
    terms = []
    constant = 0.0
    for (x, z), coeff in psum.terms.items():
        if x == 0 and z == 0:
            constant = float(coeff.real)
        else:
            terms.append(PauliTerm(float(coeff.real), x, z, psum.n_qubits))
    terms.sort(key=lambda t: t.index_key)
    return terms, constant


@dataclass(frozen=True)
class OrderingSpec:
    """How to order terms in the Trotter series.

    modes:
      * ``magnitude``: stable descending ``|h_k|``, signature tie-break.
      * ``index``: lexicographic on (kind rank, index tuple); independent of
        weights and therefore of the orbital basis.
      * ``explicit``: apply ``permutation`` (a bijection on 1..Gamma, 1-based)
        to the index-ordered sequence.
      * ``random``: seeded shuffle of the index-ordered sequence.
      * ``alignment``: replay the magnitude order of ``alignment`` (a
        reference term list) by signature matching; unmatched terms are
        appended in index order.
    """

    mode: str = "magnitude"
    seed: int | None = None
    permutation: tuple[int, ...] | None = None
    alignment: object | None = None

    def __post_init__(self):
        allowed = {"magnitude", "index", "explicit", "random", "alignment"}
        if self.mode not in allowed:
            raise ValueError(f"ordering mode {self.mode!r} not in {sorted(allowed)}")
        if self.mode == "explicit" and self.permutation is None:
            raise ValueError("explicit ordering needs a permutation")
        if self.mode == "random" and self.seed is None:
            raise ValueError("random ordering needs a seed")
        if self.mode == "alignment" and self.alignment is None:
            raise ValueError("alignment ordering needs a reference term list")


def _as_term_sequence(source) -> list:
    if isinstance(source, FermionTermList):
        return list(source.terms)
    if isinstance(source, PauliSum):
        return pauli_terms(source)[0]
    return list(source)


def _index_sorted(terms: list) -> list:
    return sorted(terms, key=lambda t: t.index_key)


def _magnitude_sorted(terms: list) -> list:
    return sorted(terms, key=lambda t: (-abs(t.weight), t.index_key))


def align_terms(terms: list, reference) -> tuple[list, list]:
    """Order ``terms`` by the magnitude order of ``reference`` signatures.

    Returns ``(ordered, missing)`` where ``missing`` lists reference
    signatures with no counterpart; unmatched own terms go to the back in
    index order.
    """
    ref_terms = _magnitude_sorted(_as_term_sequence(reference))
    position = {t.signature: i for i, t in enumerate(ref_terms)}
    matched = [t for t in terms if t.signature in position]
    unmatched = _index_sorted([t for t in terms if t.signature not in position])
    matched.sort(key=lambda t: position[t.signature])
    own = {t.signature for t in terms}
    missing = [sig for sig, _ in sorted(position.items(), key=lambda kv: kv[1]) if sig not in own]
    return matched + unmatched, missing


def order_terms(source, spec: OrderingSpec) -> list:
    """Return the Trotter term sequence for the requested ordering."""
    terms = _as_term_sequence(source)
    if spec.mode == "magnitude":
        return _magnitude_sorted(terms)
    if spec.mode == "index":
        return _index_sorted(terms)
    base = _index_sorted(terms)
    if spec.mode == "explicit":
        perm = spec.permutation
        if sorted(perm) != list(range(1, len(base) + 1)):
            raise ValueError(
                f"permutation must be a bijection on 1..{len(base)}, got length {len(perm)}"
            )
        return [base[p - 1] for p in perm]
    if spec.mode == "random":
        rng = np.random.default_rng(spec.seed)
        return [base[i] for i in rng.permutation(len(base))]
    # alignment
    ordered, missing = align_terms(terms, spec.alignment)
    if missing:
        warnings.warn(f"{len(missing)} reference signatures had no matching term")
    return ordered


def random_permutation(rng: np.random.Generator | int, size: int) -> tuple[int, ...]:
    """Seeded 1-based permutation usable as ``OrderingSpec.permutation``."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    return tuple(int(i) + 1 for i in rng.permutation(size))


# ---------------------------------------------------------------------------
# propagator construction
# ---------------------------------------------------------------------------

def trotter_propagator(
    terms: list, t: float, n_qubits: int, constant: float = 0.0
) -> np.ndarray:
    """First-order product ``exp(-i*c*t) * prod_k exp(-i H_k t)``.

    ``terms[0]`` acts first on the state (rightmost factor).  Consecutive
    diagonal terms are fused into a single pass over the accumulator.
    """
    check_dense_limit(n_qubits)
    dim = 1 << n_qubits
    acc = np.eye(dim, dtype=complex)
    work = np.empty_like(acc)
    idx = np.arange(dim)
    pending_diag: np.ndarray | None = None
    for term in terms:
        pair = _term_pair_diagonals(term, t, n_qubits, dim)
        if pair is None:
            if pending_diag is not None:
                acc *= pending_diag[:, None]
                pending_diag = None
            acc = dense.term_exponential(term, t, n_qubits) @ acc
            continue
        x, diag_a, diag_b = pair
        if x == 0:
            pending_diag = diag_a if pending_diag is None else diag_a * pending_diag
            continue
        if pending_diag is not None:
            diag_a = diag_a * pending_diag
            diag_b = diag_b * pending_diag
            pending_diag = None
        perm = idx ^ x
        np.take(acc, perm, axis=0, out=work)
        work *= diag_b[perm][:, None]
        acc *= diag_a[:, None]
        acc += work
    if pending_diag is not None:
        acc *= pending_diag[:, None]
    if constant != 0.0:
        acc *= np.exp(-1j * constant * t)
    return acc


def _term_pair_diagonals(term, t: float, n_qubits: int, dim: int):
    """Two-diagonal exponential data for one term, or None for fallback."""
    from .paulis import jw_fermion_term

    if isinstance(term, PauliTerm):
        # a PauliTerm exposes x_mask/z_mask just like a PauliString
        return dense.term_exp_pair_diagonals([(term, 1.0 + 0.0j)], term.weight * t, dim)
    if isinstance(term, FermionTerm):
        psum = jw_fermion_term(term.kind, term.indices, n_qubits)
        strings = psum.strings()
        if not dense._strings_commute(strings):
            return None
        return dense.term_exp_pair_diagonals(strings, term.weight * t, dim)
    raise TypeError(f"unsupported term type {type(term)!r}")


def apply_trotter_step(terms: list, t: float, n_qubits: int, psi: np.ndarray,
                       constant: float = 0.0) -> np.ndarray:
    """One Trotter step applied to a statevector (terms[0] first)."""
    for term in terms:
        psi = dense.apply_term_exponential(term, t, n_qubits, psi)
    if constant != 0.0:
        psi = np.exp(-1j * constant * t) * psi
    return psi


@dataclass(frozen=True)
class PropagatorSpec:
    """Recipe for an eta-basis or eta-ordering propagator.

    Exactly one of ``bases`` / ``orderings`` must be populated when
    ``eta > 1``; each list must have length ``eta``.  ``scale``/``shift``
    apply the spectrum normalization to every constituent term list
    (weights times ``scale``, constant ``c*scale + shift``).
    """

    representation: str = "fermionic"
    ordering: OrderingSpec = field(default_factory=OrderingSpec)
    t: float = 1.0
    eta: int = 1
    bases: tuple[GivensVector, ...] | None = None
    orderings: tuple[OrderingSpec, ...] | None = None
    prune: float = DEFAULT_PRUNE
    scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if self.representation not in ("fermionic", "qubit"):
            raise ValueError(f"unknown representation {self.representation!r}")
        if self.eta < 1:
            raise ValueError("eta must be >= 1")
        if self.bases is not None and self.orderings is not None:
            raise ValueError("populate bases or orderings, not both")
        for name, seq in (("bases", self.bases), ("orderings", self.orderings)):
            if seq is not None and len(seq) != self.eta:
                raise ValueError(f"{name} must have length eta={self.eta}")


def build_term_sequence(
    ints: SpinOrbitalIntegrals,
    representation: str,
    ordering: OrderingSpec,
    prune: float = DEFAULT_PRUNE,
    scale: float = 1.0,
    shift: float = 0.0,
) -> tuple[list, float]:
    """Integrals -> pruned, scaled, ordered term sequence plus constant."""
    ferm = build_fermion_hamiltonian(ints, prune=prune)
    ferm = ferm.scaled(scale, shift)
    if representation == "fermionic":
        return order_terms(ferm, ordering), ferm.constant
    from .paulis import jordan_wigner

    psum = jordan_wigner(ferm)
    terms, constant = pauli_terms(psum)
    return order_terms(terms, ordering), constant


def eta_basis_propagator(h_ints: SpinOrbitalIntegrals, spec: PropagatorSpec) -> np.ndarray:
    """``U_rot``: per-sub-step basis change, shared fixed ordering.

    For each sub-step the integrals are transformed, the term list rebuilt
    and re-pruned, and the constituent conjugated back to the reference
    basis; sub-step n = 1 acts first on the state.
    """
    if spec.bases is None:
        raise ValueError("eta_basis_propagator needs PropagatorSpec.bases")
    n_spin = h_ints.n_spin
    check_dense_limit(n_spin)
    dim = 1 << n_spin
    t_n = spec.t / spec.eta
    acc = np.eye(dim, dtype=complex)
    for theta in spec.bases:
        terms, constant = build_term_sequence(
            transform_integrals(h_ints, theta),
            spec.representation,
            spec.ordering,
            prune=spec.prune,
            scale=spec.scale,
            shift=spec.shift,
        )
        constituent = trotter_propagator(terms, t_n, n_spin, constant)
        if theta.is_zero():
            block = constituent
        else:
            u_r = rotation_unitary_fock(theta, n_spin)
            block = u_r.conj().T @ constituent @ u_r
        acc = block @ acc
    return acc


def eta_ordering_propagator(source, spec: PropagatorSpec,
                            n_qubits: int | None = None,
                            constant: float | None = None) -> np.ndarray:
    """``U_reo``: fixed basis, one term permutation per sub-step.

    ``source`` is a FermionTermList or PauliSum (already scaled); sub-step
    n = 1 acts first on the state.
    """
    if spec.orderings is None:
        raise ValueError("eta_ordering_propagator needs PropagatorSpec.orderings")
    if isinstance(source, FermionTermList):
        n_qubits = source.n_spin
        constant = source.constant if constant is None else constant
    elif isinstance(source, PauliSum):
        n_qubits = source.n_qubits
        if constant is None:
            constant = float(source.identity_coefficient().real)
    elif n_qubits is None:
        raise ValueError("explicit term sequences need n_qubits")
    check_dense_limit(n_qubits)
    constant = constant or 0.0
    dim = 1 << n_qubits
    t_n = spec.t / spec.eta
    acc = np.eye(dim, dtype=complex)
    for ordering in spec.orderings:
        terms = order_terms(source, ordering)
        acc = trotter_propagator(terms, t_n, n_qubits, constant) @ acc
    return acc
