"""Orbital bases as Givens-angle vectors and integral transformations.

A basis is parameterized by one angle per spatial pair ``(p, q)``, ``p < q``,
listed in lexicographically ascending pair order.  The spatial rotation is
the ordered product of elementary Givens matrices, first pair leftmost:

    R(theta) = G(0,1) G(0,2) ... G(m-2,m-1),
    G(p,q): rows p,q mixed by [[cos, -sin], [sin, cos]].

``theta = 0`` is the reference basis.  Both spin blocks share the same
spatial rotation.  The Fock-space unitary returned by
:func:`rotation_unitary_fock` satisfies ``U H(h) U+ = H(h~)`` where ``h~``
are the integrals returned by :func:`transform_integrals` for the same
angles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .integrals import SpinOrbitalIntegrals


def spatial_pairs(n_spatial: int) -> list[tuple[int, int]]:
    """All spatial pairs ``(p, q)``, ``p < q``, lexicographically ascending."""
    return [(p, q) for p in range(n_spatial) for q in range(p + 1, n_spatial)]


@dataclass(frozen=True)
class GivensVector:
    """Angle vector for one orbital transformation, radians in [0, 2*pi)."""

    n_spatial: int
    angles: tuple[float, ...]

    def __post_init__(self):
        expected = self.n_spatial * (self.n_spatial - 1) // 2
        if len(self.angles) != expected:
            raise ValueError(
                f"need {expected} angles for {self.n_spatial} spatial orbitals, "
                f"got {len(self.angles)}"
            )

    @classmethod
    def zero(cls, n_spatial: int) -> "GivensVector":
        return cls(n_spatial, (0.0,) * (n_spatial * (n_spatial - 1) // 2))

    @classmethod
    def single_pair(cls, n_spatial: int, pair: tuple[int, int], angle: float) -> "GivensVector":
        pairs = spatial_pairs(n_spatial)
        if tuple(pair) not in pairs:
            raise ValueError(f"{pair} is not an ascending spatial pair for m={n_spatial}")
        angles = [0.0] * len(pairs)
        angles[pairs.index(tuple(pair))] = float(angle)
        return cls(n_spatial, tuple(angles))

    def is_zero(self) -> bool:
        return all(a == 0.0 for a in self.angles)

    def to_json(self) -> str:
        import json

        return json.dumps(list(self.angles))


def rotation_matrix(theta: GivensVector) -> np.ndarray:
    """Spatial orthogonal matrix, ordered product of elementary rotations."""
    m = theta.n_spatial
    rot = np.eye(m)
    for (p, q), angle in zip(spatial_pairs(m), theta.angles):
        if angle == 0.0:
            continue
        g = np.eye(m)
        c, s = np.cos(angle), np.sin(angle)
        g[p, p] = c
        g[p, q] = -s
        g[q, p] = s
        g[q, q] = c
        rot = rot @ g
    return rot


def spin_rotation_matrix(theta: GivensVector) -> np.ndarray:
    """Spin-orbital rotation: the spatial matrix copied onto both spin blocks."""
    r = rotation_matrix(theta)
    m = theta.n_spatial
    out = np.zeros((2 * m, 2 * m))
    out[0::2, 0::2] = r
    out[1::2, 1::2] = r
    return out


def transform_integrals(ints: SpinOrbitalIntegrals, theta: GivensVector) -> SpinOrbitalIntegrals:
    """Rotate integrals at the spatial level, then re-expand in spin.

    The four-index transform runs as four successive one-index
    contractions, O(m^5) instead of O(m^8).
    """
    if ints.n_spatial != theta.n_spatial:
        raise ValueError(
            f"integral set has {ints.n_spatial} spatial orbitals, "
            f"angle vector expects {theta.n_spatial}"
        )
    if theta.is_zero():
        return ints
    r = rotation_matrix(theta)
    h1s = r @ ints.spatial_one_body() @ r.T
    g = ints.spatial_two_body()
    g = np.einsum("pa,aqrs->pqrs", r, g)
    g = np.einsum("qb,pbrs->pqrs", r, g)
    g = np.einsum("rc,pqcs->pqrs", r, g)
    g = np.einsum("sd,pqrd->pqrs", r, g)

    from .integrals import from_spatial_tensors

    return from_spatial_tensors(h1s, g, core_energy=ints.core_energy)


def rotation_unitary_fock(theta: GivensVector, n_spin: int) -> np.ndarray:
    """Fock-space unitary implementing the basis change on 2^N dimensions.

    Built by exponentiating the anti-hermitian one-body generator whose
    single-particle matrix is ``log R_spin``; the exponential uses a
    hermitian eigendecomposition.  Satisfies
    ``U @ H(h) @ U.conj().T == H(transform_integrals(h, theta))``.
    """
    dim = 1 << n_spin
    if theta.is_zero():
        return np.eye(dim, dtype=complex)
    if 2 * theta.n_spatial != n_spin:
        raise ValueError("angle vector incompatible with spin-orbital count")

    r_spin = spin_rotation_matrix(theta)
    gen = np.real(scipy.linalg.logm(r_spin))
    gen = 0.5 * (gen - gen.T)  # enforce antisymmetry against round-off

    kappa = _one_body_operator(gen, n_spin)
    herm = 1j * kappa  # anti-hermitian generator times i
    evals, evecs = np.linalg.eigh(herm)
    return (evecs * np.exp(-1j * evals)) @ evecs.conj().T


def _one_body_operator(coeff: np.ndarray, n_spin: int) -> np.ndarray:
    """Dense matrix of ``sum_ij coeff[i,j] a+_i a_j``."""
    from .fermions import _apply_ladder_product

    dim = 1 << n_spin
    cols = np.arange(dim)
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(n_spin):
        for j in range(n_spin):
            c = coeff[i, j]
            if c == 0.0:
                continue
            rows, amps = _apply_ladder_product(((i, True), (j, False)), n_spin)
            out[rows, cols] += c * amps
    return out


def sample_random_basis(rng: np.random.Generator | int, n_spatial: int) -> GivensVector:
    """Uniformly random angle vector; deterministic for a given seed/generator."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    count = n_spatial * (n_spatial - 1) // 2
    angles = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return GivensVector(n_spatial, tuple(float(a) for a in angles))
