"""Pauli-string algebra in the symplectic (bit-mask) representation.

Encoding:

* A Pauli string on ``n`` qubits is ``i**phase_pow * X(x_mask) * Z(z_mask)``
  where ``X(x) = prod_j X_j**x_j`` and ``Z(z) = prod_j Z_j**z_j``.
  ``Y_j = i * X_j * Z_j``, so the standard (hermitian) label Pauli for a
  mask pair carries ``phase_pow = n_y mod 4`` with ``n_y = popcount(x & z)``.
* Qubit ``j`` is the j-th least significant bit of the computational-basis
  index; label strings read left to right as qubit 0, 1, ...
* :class:`PauliSum` maps ``(x_mask, z_mask)`` to the coefficient of the
  *label* Pauli, so hermitian sums have real coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

COEFF_PRUNE_TOL = 1e-14

_LABEL_FOR_BITS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS_FOR_LABEL = {v: k for k, v in _LABEL_FOR_BITS.items()}
_I_POW = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """One Pauli string, ``i**phase_pow * X(x_mask) * Z(z_mask)``."""

    n_qubits: int
    x_mask: int
    z_mask: int
    phase_pow: int = 0

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Build from a label like ``"XIZY"`` (leftmost character = qubit 0)."""
        x = z = 0
        for j, ch in enumerate(label):
            try:
                bx, bz = _BITS_FOR_LABEL[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {ch!r}") from None
            x |= bx << j
            z |= bz << j
        n_y = _popcount(x & z)
        return cls(len(label), x, z, n_y % 4)

    @property
    def n_y(self) -> int:
        return _popcount(self.x_mask & self.z_mask)

    def label(self) -> str:
        return "".join(
            _LABEL_FOR_BITS[(self.x_mask >> j) & 1, (self.z_mask >> j) & 1]
            for j in range(self.n_qubits)
        )

    def coefficient(self) -> complex:
        """Scalar such that ``self == coefficient * label Pauli``."""
        return _I_POW[(self.phase_pow - self.n_y) % 4]

    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def is_hermitian(self) -> bool:
        # hermitian iff the scalar in front of the label Pauli is real
        return (self.phase_pow - self.n_y) % 2 == 0

    def commutes_with(self, other: "PauliString") -> bool:
        """Symplectic commutation test: O(1) in the number of qubits."""
        anti = _popcount(self.x_mask & other.z_mask) + _popcount(self.z_mask & other.x_mask)
        return anti % 2 == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit count mismatch")
        # move Z(z1) past X(x2): one sign per overlapping bit
        extra = 2 * _popcount(self.z_mask & other.x_mask)
        return PauliString(
            self.n_qubits,
            self.x_mask ^ other.x_mask,
            self.z_mask ^ other.z_mask,
            (self.phase_pow + other.phase_pow + extra) % 4,
        )

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.n_qubits
        cols = np.arange(dim)
        signs = 1.0 - 2.0 * (np.bitwise_count(cols & self.z_mask) & 1)
        mat = np.zeros((dim, dim), dtype=complex)
        mat[cols ^ self.x_mask, cols] = _I_POW[self.phase_pow % 4] * signs
        return mat

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """Apply to a statevector without materializing the matrix."""
        dim = psi.shape[0]
        cols = np.arange(dim)
        signs = 1.0 - 2.0 * (np.bitwise_count(cols & self.z_mask) & 1)
        out = np.empty_like(psi, dtype=complex)
        out[cols ^ self.x_mask] = (_I_POW[self.phase_pow % 4] * signs) * psi
        return out


def _mul_keys(k1: tuple[int, int], k2: tuple[int, int]) -> tuple[tuple[int, int], complex]:
    """Product of two label Paulis: returns (key, scalar phase)."""
    x1, z1 = k1
    x2, z2 = k2
    x, z = x1 ^ x2, z1 ^ z2
    pw = (
        _popcount(x1 & z1)
        + _popcount(x2 & z2)
        - _popcount(x & z)
        + 2 * _popcount(z1 & x2)
    ) % 4
    return (x, z), _I_POW[pw]


def _key_label(key: tuple[int, int], n: int) -> str:
    x, z = key
    return "".join(_LABEL_FOR_BITS[(x >> j) & 1, (z >> j) & 1] for j in range(n))


class PauliSum:
    """Weighted sum of label Pauli strings, keyed by ``(x_mask, z_mask)``."""

    __slots__ = ("n_qubits", "terms")

    def __init__(self, n_qubits: int, terms: dict[tuple[int, int], complex] | None = None):
        self.n_qubits = n_qubits
        self.terms: dict[tuple[int, int], complex] = dict(terms) if terms else {}

    @classmethod
    def from_labels(cls, pairs: dict[str, complex] | list[tuple[str, complex]]) -> "PauliSum":
        items = pairs.items() if isinstance(pairs, dict) else pairs
        items = list(items)
        if not items:
            raise ValueError("cannot infer qubit count from empty input")
        n = len(items[0][0])
        out = cls(n)
        for label, coeff in items:
            ps = PauliString.from_label(label)
            out.add_term((ps.x_mask, ps.z_mask), coeff)
        return out

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(n_qubits, {(0, 0): coeff})

    def copy(self) -> "PauliSum":
        return PauliSum(self.n_qubits, self.terms)

    def add_term(self, key: tuple[int, int], coeff: complex) -> None:
        new = self.terms.get(key, 0.0) + coeff
        if abs(new) <= COEFF_PRUNE_TOL:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit count mismatch")
        out = self.copy()
        for key, coeff in other.terms.items():
            out.add_term(key, coeff)
        return out

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (other * -1.0)

    def __mul__(self, factor: complex) -> "PauliSum":
        if abs(factor) == 0.0:
            return PauliSum(self.n_qubits)
        return PauliSum(self.n_qubits, {k: c * factor for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        """Operator product of two sums."""
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit count mismatch")
        out = PauliSum(self.n_qubits)
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key, phase = _mul_keys(k1, k2)
                out.add_term(key, c1 * c2 * phase)
        return out

    def dagger(self) -> "PauliSum":
        return PauliSum(self.n_qubits, {k: c.conjugate() for k, c in self.terms.items()})

    def __len__(self) -> int:
        return len(self.terms)

    def identity_coefficient(self) -> complex:
        return self.terms.get((0, 0), 0.0)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(c.imag) <= tol for c in self.terms.values())

    def strings(self) -> list[tuple[PauliString, complex]]:
        """Deterministically ordered (string, coefficient) pairs."""
        out = []
        for (x, z) in sorted(self.terms):
            ps = PauliString(self.n_qubits, x, z, _popcount(x & z) % 4)
            out.append((ps, self.terms[(x, z)]))
        return out

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.n_qubits
        cols = np.arange(dim)
        mat = np.zeros((dim, dim), dtype=complex)
        for (x, z), coeff in self.terms.items():
            n_y = _popcount(x & z)
            signs = 1.0 - 2.0 * (np.bitwise_count(cols & z) & 1)
            mat[cols ^ x, cols] += (coeff * _I_POW[n_y % 4]) * signs
        return mat

    def apply(self, psi: np.ndarray) -> np.ndarray:
        dim = psi.shape[0]
        cols = np.arange(dim)
        out = np.zeros(dim, dtype=complex)
        for (x, z), coeff in self.terms.items():
            n_y = _popcount(x & z)
            signs = 1.0 - 2.0 * (np.bitwise_count(cols & z) & 1)
            # cols ^ x is a permutation, so fancy-index accumulation is safe
            out[cols ^ x] += (coeff * _I_POW[n_y % 4]) * signs * psi
        return out

    def to_label_pairs(self) -> list[tuple[str, complex]]:
        """JSON-friendly ``(label, coefficient)`` list, deterministic order."""
        return [(_key_label(k, self.n_qubits), self.terms[k]) for k in sorted(self.terms)]

    def __repr__(self) -> str:
        body = " + ".join(f"{c:g}*{lbl}" for lbl, c in self.to_label_pairs()[:6])
        more = "" if len(self) <= 6 else f" + ... ({len(self)} terms)"
        return f"PauliSum({body}{more})"


def pauli_one_norm(psum: PauliSum) -> float:
    """Sum of absolute coefficients, identity excluded (``lambda_Q``)."""
    return float(sum(abs(c) for k, c in psum.terms.items() if k != (0, 0)))


def pauli_commutator(a: PauliString, b: PauliString) -> PauliSum:
    """``[a, b]``; empty sum when the strings commute."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("qubit count mismatch")
    out = PauliSum(a.n_qubits)
    if a.commutes_with(b):
        return out
    prod = a * b
    out.add_term((prod.x_mask, prod.z_mask), 2.0 * prod.coefficient())
    return out


# ---------------------------------------------------------------------------
# Jordan-Wigner mapping
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _jw_ladder(j: int, dagger: bool, n_qubits: int) -> PauliSum:
    """JW image of ``a_j`` (or ``a+_j``): ``Z_0..Z_{j-1} (X_j -+ i Y_j)/2``."""
    string_z = (1 << j) - 1
    out = PauliSum(n_qubits)
    out.add_term((1 << j, string_z), 0.5)  # X_j with Z string below
    sign = -0.5j if dagger else 0.5j
    out.add_term((1 << j, string_z | (1 << j)), sign)  # Y_j with Z string below
    return out


def jw_ladder_product(ops: tuple[tuple[int, bool], ...], n_qubits: int) -> PauliSum:
    """JW image of a product of ladder operators, leftmost factor first."""
    out = PauliSum.identity(n_qubits)
    for j, dagger in ops:
        out = out @ _jw_ladder(j, dagger, n_qubits)
    return out


def jordan_wigner(term_list) -> PauliSum:
    """Map a :class:`~trotterkit.fermions.FermionTermList` to a qubit Hamiltonian.

    The identity coefficient absorbs the term list's constant offset.
    """
    n = term_list.n_spin
    out = PauliSum.identity(n, term_list.constant)
    for term in term_list.terms:
        out = out + term.weight * jw_fermion_term(term.kind, term.indices, n)
    return out


@lru_cache(maxsize=65536)
def jw_fermion_term(kind: str, indices: tuple[int, ...], n_qubits: int) -> PauliSum:
    """JW image of the unit-weight hermitian fermionic operator ``F_k``."""
    from .fermions import ladder_sequence, is_self_adjoint_kind

    ops = ladder_sequence(kind, indices)
    psum = jw_ladder_product(ops, n_qubits)
    if not is_self_adjoint_kind(kind):
        psum = psum + psum.dagger()
    return psum
