"""FCIDUMP ingestion and spin-orbital integral tensors.

Conventions used throughout the package:

* FCIDUMP files carry spatial-orbital integrals in chemists' notation
  ``(ij|kl)`` with 8-fold permutational symmetry and 1-based indices.
* Internally everything is 0-based; the conversion happens once, here.
* Spatial orbital ``p`` (0-based) maps to spin orbitals ``2p`` (alpha)
  and ``2p + 1`` (beta).
* The spin-orbital two-body tensor is stored in physicists' notation,
  ``h_pqrs = (ps|qr)``, so the Hamiltonian reads
  ``H = sum_ij h1[i,j] a+_i a_j + 1/2 sum_pqrs h2[p,q,r,s] a+_p a+_q a_r a_s``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


class FcidumpError(ValueError):
    """Raised on malformed FCIDUMP input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _canonical_pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i >= j else (j, i)


def _canonical_quad(i: int, j: int, k: int, l: int) -> tuple[int, int, int, int]:
    """Canonical representative of the 8-fold symmetric (ij|kl) orbit."""
    ij = _canonical_pair(i, j)
    kl = _canonical_pair(k, l)
    return ij + kl if ij >= kl else kl + ij


@dataclass
class FcidumpData:
    """Spatial-orbital integrals exactly as stored in an FCIDUMP file.

    ``one_body`` and ``two_body`` are keyed by canonical 0-based index
    tuples (``i >= j``, and ``(ij) >= (kl)`` for the two-body orbit); every
    symmetry partner of a stored key refers to the same value.
    """

    n_spatial: int
    n_electrons: int
    ms2: int = 0
    core_energy: float = 0.0
    one_body: dict[tuple[int, int], float] = field(default_factory=dict)
    two_body: dict[tuple[int, int, int, int], float] = field(default_factory=dict)

    def one_body_matrix(self) -> np.ndarray:
        """Dense symmetric h_ij over spatial orbitals."""
        m = self.n_spatial
        h = np.zeros((m, m))
        for (i, j), v in self.one_body.items():
            h[i, j] = v
            h[j, i] = v
        return h

    def two_body_tensor(self) -> np.ndarray:
        """Dense chemists' (ij|kl) over spatial orbitals, 8-fold expanded."""
        m = self.n_spatial
        g = np.zeros((m, m, m, m))
        for (i, j, k, l), v in self.two_body.items():
            for a, b, c, d in (
                (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
            ):
                g[a, b, c, d] = v
        return g


@dataclass(frozen=True)
class SpinOrbitalIntegrals:
    """Spin-orbital integrals in physicists' notation (see module docstring)."""

    n_spin: int
    h1: np.ndarray
    h2: np.ndarray
    core_energy: float = 0.0

    def __post_init__(self):
        n = self.n_spin
        if self.h1.shape != (n, n):
            raise ValueError(f"h1 shape {self.h1.shape} != ({n}, {n})")
        if self.h2.shape != (n, n, n, n):
            raise ValueError(f"h2 shape {self.h2.shape} incompatible with N={n}")

    @property
    def n_spatial(self) -> int:
        return self.n_spin // 2

    def spatial_one_body(self) -> np.ndarray:
        """Spatial h_ij recovered from the alpha block."""
        return self.h1[0::2, 0::2].copy()

    def spatial_two_body(self) -> np.ndarray:
        """Spatial physicists' tensor recovered from the (a,b,b,a) spin block."""
        return self.h2[0::2, 1::2, 1::2, 0::2].copy()


# ---------------------------------------------------------------------------
# parsing / writing
# ---------------------------------------------------------------------------

def _parse_header(lines: list[str]) -> tuple[dict[str, int], int]:
    """Parse the namelist header; returns (fields, index of first data line)."""
    header = ""
    end = None
    for ln, raw in enumerate(lines):
        stripped = raw.strip()
        body = stripped
        if "&END" in stripped.upper():
            body = stripped[: stripped.upper().index("&END")]
            end = ln
        elif stripped == "/" or stripped.endswith("/"):
            body = stripped.rstrip("/")
            end = ln
        header += " " + body
        if end is not None:
            break
    if end is None:
        raise FcidumpError("no namelist terminator ('&END' or '/') found")

    header = header.replace("&FCI", " ").replace("&fci", " ")
    fields: dict[str, int] = {}
    for chunk in header.replace(",", " ").split():
        if "=" not in chunk:
            continue
        key, _, value = chunk.partition("=")
        key = key.strip().upper()
        if key in ("NORB", "NELEC", "MS2"):
            try:
                fields[key] = int(value)
            except ValueError as exc:
                raise FcidumpError(f"non-integer value for {key}: {value!r}") from exc
        # unknown keys (ORBSYM, ISYM, ...) are ignored
    for required in ("NORB", "NELEC"):
        if required not in fields:
            raise FcidumpError(f"header is missing {required}")
    return fields, end + 1


def parse_fcidump(text: str) -> FcidumpData:
    """Parse Molpro-style FCIDUMP text into :class:`FcidumpData`.

    Accepts both ``&END`` and ``/`` namelist terminators, Fortran ``D``
    exponents, and ignores unknown namelist keys.  Duplicate index tuples
    overwrite the stored value with a warning.
    """
    lines = text.splitlines()
    fields, start = _parse_header(lines)
    norb = fields["NORB"]
    if norb <= 0:
        raise FcidumpError(f"NORB must be positive, got {norb}")
    data = FcidumpData(
        n_spatial=norb,
        n_electrons=fields["NELEC"],
        ms2=fields.get("MS2", 0),
    )

    for ln in range(start, len(lines)):
        stripped = lines[ln].strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 5:
            raise FcidumpError(
                f"expected 'value i j k l', got {len(parts)} fields", line=ln + 1
            )
        try:
            value = float(parts[0].replace("D", "E").replace("d", "e"))
        except ValueError as exc:
            raise FcidumpError(f"non-numeric value {parts[0]!r}", line=ln + 1) from exc
        try:
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError as exc:
            raise FcidumpError(f"non-integer index in {parts[1:]}", line=ln + 1) from exc

        for idx in (i, j, k, l):
            if idx < 0 or idx > norb:
                raise FcidumpError(f"index {idx} out of range [0, {norb}]", line=ln + 1)

        if i == j == k == l == 0:
            data.core_energy = value
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpError(f"bad one-body index pattern {(i, j, k, l)}", line=ln + 1)
            key2 = _canonical_pair(i - 1, j - 1)
            if key2 in data.one_body:
                warnings.warn(f"duplicate one-body entry {key2}, overwriting")
            data.one_body[key2] = value
        else:
            if 0 in (i, j, k, l):
                raise FcidumpError(f"bad two-body index pattern {(i, j, k, l)}", line=ln + 1)
            key4 = _canonical_quad(i - 1, j - 1, k - 1, l - 1)
            if key4 in data.two_body:
                warnings.warn(f"duplicate two-body entry {key4}, overwriting")
            data.two_body[key4] = value
    return data


def write_fcidump(data: FcidumpData) -> str:
    """Serialize back to FCIDUMP text (full double precision, round-trips)."""
    out = [
        f"&FCI NORB={data.n_spatial},NELEC={data.n_electrons},MS2={data.ms2},",
        "&END",
    ]
    fmt = " {:.17g} {:4d} {:4d} {:4d} {:4d}"
    for (i, j, k, l), v in sorted(data.two_body.items()):
        out.append(fmt.format(v, i + 1, j + 1, k + 1, l + 1))
    for (i, j), v in sorted(data.one_body.items()):
        out.append(fmt.format(v, i + 1, j + 1, 0, 0))
    out.append(fmt.format(data.core_energy, 0, 0, 0, 0))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# spin-orbital expansion
# ---------------------------------------------------------------------------

def to_spin_orbitals(data: FcidumpData) -> SpinOrbitalIntegrals:
    """Expand spatial chemists' integrals to spin-orbital physicists' tensors.

    ``h_pqrs = (ps|qr)`` restricted by the spin selection rule
    ``sigma(p) == sigma(s)`` and ``sigma(q) == sigma(r)``; the one-body
    matrix expands block-diagonally in spin.
    """
    m = data.n_spatial
    n = 2 * m
    h1s = data.one_body_matrix()
    g_chem = data.two_body_tensor()
    # physicists' spatial tensor: h_pqrs = (ps|qr)
    g_phys = g_chem.transpose(0, 2, 3, 1)

    h1 = np.zeros((n, n))
    h2 = np.zeros((n, n, n, n))
    for s1 in (0, 1):
        h1[s1::2, s1::2] = h1s
        for s2 in (0, 1):
            h2[s1::2, s2::2, s2::2, s1::2] = g_phys
    return SpinOrbitalIntegrals(n_spin=n, h1=h1, h2=h2, core_energy=data.core_energy)


def from_spatial_tensors(
    h1_spatial: np.ndarray,
    g_physicists: np.ndarray,
    core_energy: float = 0.0,
) -> SpinOrbitalIntegrals:
    """Spin-expand explicit spatial tensors (physicists' two-body convention)."""
    m = h1_spatial.shape[0]
    n = 2 * m
    h1 = np.zeros((n, n))
    h2 = np.zeros((n, n, n, n))
    for s1 in (0, 1):
        h1[s1::2, s1::2] = h1_spatial
        for s2 in (0, 1):
            h2[s1::2, s2::2, s2::2, s1::2] = g_physicists
    return SpinOrbitalIntegrals(n_spin=n, h1=h1, h2=h2, core_energy=core_energy)
