import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from trotterkit.fermions import build_fermion_hamiltonian
from trotterkit.integrals import from_spatial_tensors, parse_fcidump, to_spin_orbitals

FIXTURES = Path(__file__).resolve().parent / "fixtures"

# frozen reference values for the H2/sto-3g golden fixture (R = 1.4 bohr);
# produced by the closed-form generator in scripts/make_h2_fixture.py and
# cross-checked against the standard literature numbers
H2_E_FCI_TOTAL = -1.137275943839772
H2_E_FCI_ELECTRONIC = -1.8515616581254863
H2_CORE = 1.0 / 1.4


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


@pytest.fixture(scope="session")
def h2_ints():
    return to_spin_orbitals(parse_fcidump(fixture_text("h2_sto3g.fcidump")))


@pytest.fixture(scope="session")
def h2_terms(h2_ints):
    return build_fermion_hamiltonian(h2_ints)


@pytest.fixture(scope="session")
def hf_like_ints():
    return to_spin_orbitals(parse_fcidump(fixture_text("hf_like.fcidump")))


@pytest.fixture(scope="session")
def model3_ints():
    return to_spin_orbitals(parse_fcidump(fixture_text("model3.fcidump")))


@pytest.fixture(scope="session")
def model4_ints():
    return to_spin_orbitals(parse_fcidump(fixture_text("model4.fcidump")))


@pytest.fixture(scope="session")
def hubbard_atom_ints():
    import numpy as np

    eps, u = -0.8, 1.7
    return from_spatial_tensors(np.array([[eps]]), np.full((1, 1, 1, 1), u))
