import numpy as np
import pytest

from trotterkit.integrals import (
    FcidumpError,
    parse_fcidump,
    to_spin_orbitals,
    write_fcidump,
)

from conftest import H2_CORE, fixture_text


HEADER = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n"


def test_parse_header_and_core_energy():
    data = parse_fcidump(HEADER + "0.7137 0 0 0 0\n")
    assert data.n_spatial == 2
    assert data.n_electrons == 2
    assert data.ms2 == 0
    assert data.core_energy == 0.7137


def test_parse_slash_terminator_and_fortran_exponent():
    text = "&FCI NORB=1,NELEC=2,MS2=0,ORBSYM=1,ISYM=1\n/\n1.0D-01 1 1 0 0\n"
    data = parse_fcidump(text)
    assert data.one_body[(0, 0)] == pytest.approx(0.1)


def test_one_body_symmetry_completion():
    data = parse_fcidump(HEADER + "0.5 1 2 0 0\n")
    assert data.one_body_matrix()[0, 1] == 0.5
    assert data.one_body_matrix()[1, 0] == 0.5


def test_two_body_eightfold_expansion():
    data = parse_fcidump(HEADER + "0.25 1 2 1 1\n")
    g = data.two_body_tensor()
    val = 0.25
    for key in [(0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0)]:
        assert g[key] == val


def test_duplicate_entry_overwrites_with_warning():
    text = HEADER + "0.5 1 1 0 0\n0.7 1 1 0 0\n"
    with pytest.warns(UserWarning, match="duplicate"):
        data = parse_fcidump(text)
    assert data.one_body[(0, 0)] == 0.7


@pytest.mark.parametrize(
    "text, match",
    [
        ("&FCI NELEC=2,MS2=0\n&END\n", "missing NORB"),
        ("&FCI NORB=2,MS2=0\n&END\n", "missing NELEC"),
        (HEADER + "0.5 3 1 0 0\n", "out of range"),
        (HEADER + "abc 1 1 0 0\n", "non-numeric"),
        (HEADER + "0.5 1 1 0\n", "expected"),
        (HEADER + "0.5 0 1 0 0\n", "one-body index"),
        ("no header at all\n", "terminator"),
    ],
)
def test_parse_errors(text, match):
    with pytest.raises(FcidumpError, match=match):
        parse_fcidump(text)


def test_parse_error_carries_line_number():
    with pytest.raises(FcidumpError, match="line 3"):
        parse_fcidump(HEADER + "oops 1 1 0 0\n")


def test_round_trip_identity():
    data = parse_fcidump(fixture_text("h2_sto3g.fcidump"))
    again = parse_fcidump(write_fcidump(data))
    assert again.n_spatial == data.n_spatial
    assert again.core_energy == data.core_energy
    for key, val in data.one_body.items():
        assert again.one_body[key] == pytest.approx(val, rel=1e-15)
    for key, val in data.two_body.items():
        assert again.two_body[key] == pytest.approx(val, rel=1e-15)


def test_spin_expansion_hubbard_atom():
    # single orbital, (11|11) = u: the raw tensor holds u wherever the spin
    # rules permit; mixed-spin patterns are the ones that survive grouping
    u = 1.3
    data = parse_fcidump("&FCI NORB=1,NELEC=2,MS2=0\n&END\n" + f"{u} 1 1 1 1\n")
    ints = to_spin_orbitals(data)
    assert ints.n_spin == 2
    assert ints.h2[0, 1, 1, 0] == u
    assert ints.h2[1, 0, 0, 1] == u
    assert ints.h2[0, 0, 0, 0] == u
    assert ints.h2[1, 1, 1, 1] == u
    # spin-forbidden patterns vanish
    assert ints.h2[0, 1, 0, 1] == 0.0
    assert ints.h2[0, 0, 1, 1] == 0.0


def test_spin_expansion_selection_rules(h2_ints):
    n = h2_ints.n_spin
    spin = np.arange(n) % 2
    nz = np.argwhere(h2_ints.h2 != 0.0)
    for p, q, r, s in nz:
        assert spin[p] == spin[s]
        assert spin[q] == spin[r]
    nz1 = np.argwhere(h2_ints.h1 != 0.0)
    for i, j in nz1:
        assert spin[i] == spin[j]


def test_spin_tensor_symmetries(h2_ints):
    h2 = h2_ints.h2
    assert np.allclose(h2, h2.transpose(1, 0, 3, 2))  # h_pqrs = h_qpsr
    assert np.allclose(h2, h2.transpose(3, 2, 1, 0))  # h_pqrs = h_srqp
    assert np.allclose(h2_ints.h1, h2_ints.h1.T)


def test_all_zero_integrals():
    data = parse_fcidump(HEADER + "0.0 0 0 0 0\n")
    ints = to_spin_orbitals(data)
    assert not np.any(ints.h1)
    assert not np.any(ints.h2)


def test_h2_spectrum_matches_reference_fci(h2_ints):
    # full Fock-space spectrum of the rebuilt Hamiltonian, plus core energy,
    # contains the FCI ground energy as its minimum
    from conftest import H2_E_FCI_TOTAL
    from trotterkit.fermions import build_fermion_hamiltonian

    h = build_fermion_hamiltonian(h2_ints).to_matrix()
    evals = np.linalg.eigvalsh(h)
    assert evals[0] == pytest.approx(H2_E_FCI_TOTAL, abs=1e-9)
    assert h2_ints.core_energy == pytest.approx(H2_CORE, rel=1e-12)
