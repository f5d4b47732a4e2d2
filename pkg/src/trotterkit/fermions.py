"""Grouped hermitian fermionic Hamiltonian terms.

The second-quantized Hamiltonian is regrouped into a list of hermitian
terms ``H_k = h_k * F_k`` where each ``F_k`` is one of five patterns:

==================  =========================================  indices
number              ``a+_i a_i``                               (i,)
hopping             ``a+_i a_j + a+_j a_i``                    (i, j), i < j
number_number       ``a+_p a+_q a_q a_p``                      (p, q), p < q
number_excitation   ``a+_p a+_q a_q a_r + h.c.`` (one shared)  (c1, c2, a1, a2)
double_excitation   ``a+_p a+_q a_r a_s + h.c.`` (none shared) (c1, c2, a1, a2)
==================  =========================================  =======

Two-body operators are canonicalized with ascending creation indices
(``c1 < c2``) and descending annihilation indices (``a1 > a2``) using the
fermionic anti-commutation signs; coefficients of a canonical key and its
hermitian conjugate are merged into a single real weight.  The stored
4-index tuple is the lexicographically smaller of the pair, which makes
``(kind, indices)`` a basis-independent signature.

Weights carry all numerical prefactors: the realized matrix of a term is
``weight * F_k`` with ``F_k`` exactly as in the table (norm 1 for every
pattern).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

DEFAULT_PRUNE = 1e-8

KIND_RANK = {
    "number": 0,
    "hopping": 1,
    "number_number": 2,
    "number_excitation": 3,
    "double_excitation": 4,
}

_SELF_ADJOINT_KINDS = frozenset({"number", "number_number"})


def is_self_adjoint_kind(kind: str) -> bool:
    return kind in _SELF_ADJOINT_KINDS


def ladder_sequence(kind: str, indices: tuple[int, ...]) -> tuple[tuple[int, bool], ...]:
    """Ladder-operator product realizing ``F_k`` (without the ``+ h.c.`` part).

    Entries are ``(mode, dagger)``, leftmost operator first.
    """
    if kind == "number":
        (i,) = indices
        return ((i, True), (i, False))
    if kind == "hopping":
        i, j = indices
        return ((i, True), (j, False))
    if kind == "number_number":
        p, q = indices
        return ((p, True), (q, True), (q, False), (p, False))
    if kind in ("number_excitation", "double_excitation"):
        c1, c2, a1, a2 = indices
        return ((c1, True), (c2, True), (a1, False), (a2, False))
    raise ValueError(f"unknown term kind {kind!r}")


@dataclass(frozen=True)
class FermionTerm:
    """One hermitian grouped term ``h_k * F_k``."""

    weight: float
    kind: str
    indices: tuple[int, ...]

    @property
    def signature(self) -> tuple:
        """Canonical, basis-independent identity of the operator part."""
        return (self.kind, self.indices)

    @property
    def index_key(self) -> tuple:
        """Sort key for the deterministic index ordering."""
        return (KIND_RANK[self.kind], self.indices)

    def scaled(self, factor: float) -> "FermionTerm":
        return FermionTerm(self.weight * factor, self.kind, self.indices)


@dataclass(frozen=True)
class FermionTermList:
    """Ordered hermitian term list plus an identity-energy offset."""

    n_spin: int
    terms: tuple[FermionTerm, ...]
    constant: float = 0.0

    def __len__(self) -> int:
        return len(self.terms)

    def scaled(self, factor: float, shift: float = 0.0) -> "FermionTermList":
        """Affine rescale: weights by ``factor``, constant to ``c*factor + shift``."""
        return FermionTermList(
            self.n_spin,
            tuple(t.scaled(factor) for t in self.terms),
            self.constant * factor + shift,
        )

    def to_matrix(self) -> np.ndarray:
        """Dense realization via occupation-number ladder algebra.

        Independent of the Jordan-Wigner route in :mod:`trotterkit.paulis`.
        """
        dim = 1 << self.n_spin
        mat = np.zeros((dim, dim), dtype=complex)
        for term in self.terms:
            mat += term.weight * fermion_term_matrix(term.kind, term.indices, self.n_spin)
        mat += self.constant * np.eye(dim)
        return mat

    def to_json(self) -> str:
        payload = {
            "n_spin": self.n_spin,
            "constant": self.constant,
            "terms": [
                {"kind": t.kind, "indices": list(t.indices), "weight": t.weight}
                for t in self.terms
            ],
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "FermionTermList":
        payload = json.loads(text)
        terms = tuple(
            FermionTerm(t["weight"], t["kind"], tuple(t["indices"]))
            for t in payload["terms"]
        )
        return cls(payload["n_spin"], terms, payload["constant"])


# ---------------------------------------------------------------------------
# dense ladder-operator realization (bit tricks, O(2^N) per operator string)
# ---------------------------------------------------------------------------

def _apply_ladder_product(
    ops: tuple[tuple[int, bool], ...], n_spin: int
) -> tuple[np.ndarray, np.ndarray]:
    """Apply a ladder product to all basis states at once.

    Returns ``(rows, amps)`` with one output entry per input column ``b``:
    ``Op|b> = amps[b] |rows[b]>`` (``amps[b] == 0`` when annihilated).
    JW sign convention: ``a_j|b> = (-1)^popcount(b & (2^j - 1)) |b ^ 2^j>``.
    """
    dim = 1 << n_spin
    idx = np.arange(dim)
    amp = np.ones(dim)
    for j, dagger in reversed(ops):  # rightmost factor acts first
        bit = (idx >> j) & 1
        alive = bit == (0 if dagger else 1)
        parity = np.bitwise_count(idx & ((1 << j) - 1)) & 1
        amp = np.where(alive, amp * (1.0 - 2.0 * parity), 0.0)
        idx = np.where(alive, idx ^ (1 << j), idx)
    return idx, amp


def fermion_term_matrix(kind: str, indices: tuple[int, ...], n_spin: int) -> np.ndarray:
    """Dense matrix of the unit-weight operator ``F_k`` (hermitian)."""
    dim = 1 << n_spin
    cols = np.arange(dim)
    rows, amps = _apply_ladder_product(ladder_sequence(kind, indices), n_spin)
    mat = np.zeros((dim, dim), dtype=complex)
    mat[rows, cols] = amps
    if not is_self_adjoint_kind(kind):
        mat = mat + mat.conj().T
    return mat


# ---------------------------------------------------------------------------
# Hamiltonian grouping
# ---------------------------------------------------------------------------

def _canonical_two_body(p: int, q: int, r: int, s: int) -> tuple[tuple[int, int, int, int], int]:
    """Canonicalize ``a+_p a+_q a_r a_s`` to ``c1 < c2``, ``a1 > a2`` with sign."""
    sign = 1
    if p > q:
        p, q = q, p
        sign = -sign
    if r < s:
        r, s = s, r
        sign = -sign
    return (p, q, r, s), sign


def build_fermion_hamiltonian(ints, prune: float = DEFAULT_PRUNE) -> FermionTermList:
    """Group spin-orbital integrals into hermitian terms, prune tiny weights.

    Terms with ``|h_k| < prune`` are dropped; the output order is the
    deterministic index ordering (by kind rank, then indices).
    """
    if prune < 0:
        raise ValueError("prune threshold must be non-negative")
    n = ints.n_spin
    h1, h2 = ints.h1, ints.h2

    acc1: dict[tuple[int, int], float] = {}
    nz = np.argwhere(np.abs(h1) > 0.0)
    for i, j in nz:
        i, j = int(i), int(j)
        if i > j:
            continue
        if i == j:
            acc1[(i, i)] = acc1.get((i, i), 0.0) + float(h1[i, i])
        else:
            upper, lower = float(h1[i, j]), float(h1[j, i])
            if abs(upper - lower) > 1e-12 * max(1.0, abs(upper)):
                warnings.warn(f"one-body integrals not symmetric at {(i, j)}")
            acc1[(i, j)] = acc1.get((i, j), 0.0) + 0.5 * (upper + lower)

    acc2: dict[tuple[int, int, int, int], float] = {}
    for p, q, r, s in np.argwhere(np.abs(h2) > 0.0):
        p, q, r, s = int(p), int(q), int(r), int(s)
        if p == q or r == s:
            continue  # annihilated by fermionic antisymmetry
        key, sign = _canonical_two_body(p, q, r, s)
        acc2[key] = acc2.get(key, 0.0) + 0.5 * sign * float(h2[p, q, r, s])

    terms: list[FermionTerm] = []

    for (i, j), w in acc1.items():
        kind = "number" if i == j else "hopping"
        idx = (i,) if i == j else (i, j)
        terms.append(FermionTerm(w, kind, idx))

    seen = set()
    for key, w in acc2.items():
        c1, c2, a1, a2 = key
        hc_key = (a2, a1, c2, c1)
        if key in seen:
            continue
        seen.add(key)
        if hc_key == key:
            # self-adjoint: a+_p a+_q a_q a_p
            terms.append(FermionTerm(w, "number_number", (c1, c2)))
            continue
        seen.add(hc_key)
        w_hc = acc2.get(hc_key, 0.0)
        if abs(w - w_hc) > 1e-10 * max(1.0, abs(w)):
            warnings.warn(f"non-hermitian two-body pair at {key}: {w} vs {w_hc}")
        weight = 0.5 * (w + w_hc)
        rep = min(key, hc_key)
        shared = len({rep[0], rep[1]} & {rep[2], rep[3]})
        kind = "number_excitation" if shared == 1 else "double_excitation"
        terms.append(FermionTerm(weight, kind, rep))

    kept = tuple(
        sorted(
            (t for t in terms if abs(t.weight) >= prune and t.weight != 0.0),
            key=lambda t: t.index_key,
        )
    )
    return FermionTermList(n_spin=n, terms=kept, constant=ints.core_energy)


def one_norm(term_list: FermionTermList) -> float:
    """``lambda_F``: sum of absolute term weights, constant excluded."""
    return float(sum(abs(t.weight) for t in term_list.terms))


def term_count(term_list: FermionTermList) -> int:
    """``Gamma``: number of non-negligible terms."""
    return len(term_list.terms)
