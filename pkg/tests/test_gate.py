import itertools
import math

import numpy as np
import pytest
from scipy.linalg import expm

from cqedgate.errors import ParameterDomainError
from cqedgate.gate import (FockRegister, apply_beamsplitter, apply_nonlinear_phase,
                           beamsplitter_unitary, fock_basis, gate_fidelity, gate_operator,
                           local_phase_normal_form, logical_block, logical_states,
                           nonlinear_phase_operator, two_photon_phase_gate)

from oracles import linear_optics_amplitude

R2 = math.sqrt(2)


def reg(terms, n=2, cutoff=2):
    return FockRegister.from_occupations(terms, n, cutoff, normalize=False)


def test_basis_enumeration():
    assert fock_basis(2, 2) == ((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0))
    assert len(fock_basis(4, 2)) == 15
    with pytest.raises(ParameterDomainError):
        FockRegister.from_occupations({(3, 0): 1}, 2, 2)


def test_single_photon_split():
    out = apply_beamsplitter(reg({(1, 0): 1}), 0, 1)
    assert out.amplitude((1, 0)) == pytest.approx(1 / R2, abs=1e-15)
    assert out.amplitude((0, 1)) == pytest.approx(1j / R2, abs=1e-15)


def test_hong_ou_mandel():
    out = apply_beamsplitter(reg({(1, 1): 1}), 0, 1)
    assert out.amplitude((1, 1)) == 0
    assert out.amplitude((2, 0)) == pytest.approx(1j / R2, abs=1e-15)
    assert out.amplitude((0, 2)) == pytest.approx(1j / R2, abs=1e-15)


def test_hom_block_against_direct_expm():
    # two-photon block in the order |2,0>, |1,1>, |0,2>
    gen = np.array([[0, R2, 0], [R2, 0, R2], [0, R2, 0]])
    U3 = expm(1j * math.pi / 4 * gen)
    U = beamsplitter_unitary(2, 2, 0, 1)
    b = fock_basis(2, 2)
    idx = [b.index(s) for s in ((2, 0), (1, 1), (0, 2))]
    np.testing.assert_allclose(U[np.ix_(idx, idx)], U3, atol=1e-14)


def test_double_beamsplitter_is_swap():
    r = apply_beamsplitter(apply_beamsplitter(reg({(1, 0): 1}), 0, 1), 0, 1)
    assert r.amplitude((0, 1)) == pytest.approx(1j, abs=1e-15)
    assert abs(r.amplitude((1, 0))) < 1e-15


def test_permanent_oracle_all_amplitudes():
    n = 3
    U = beamsplitter_unitary(n, 2, 0, 2)
    U1 = np.eye(n, dtype=complex)
    c = math.cos(math.pi / 4)
    U1[np.ix_([0, 2], [0, 2])] = [[c, 1j * c], [1j * c, c]]
    basis = fock_basis(n, 2)
    for (k, a), (m, b) in itertools.product(enumerate(basis), repeat=2):
        assert U[m, k] == pytest.approx(linear_optics_amplitude(U1, a, b), abs=1e-13)


@pytest.mark.parametrize("n_modes,cutoff", [(2, 2), (3, 3), (4, 2)])
def test_unitarity_and_number_conservation(n_modes, cutoff):
    basis = fock_basis(n_modes, cutoff)
    tot = np.array([sum(s) for s in basis])
    for i, j in itertools.permutations(range(n_modes), 2):
        U = beamsplitter_unitary(n_modes, cutoff, i, j)
        assert np.max(np.abs(U.conj().T @ U - np.eye(len(basis)))) < 1e-12
        assert np.all(np.abs(U[tot[:, None] != tot[None, :]]) == 0)
    S = nonlinear_phase_operator(n_modes, cutoff, 0)
    assert np.max(np.abs(S.conj().T @ S - np.eye(len(basis)))) < 1e-12


def test_beamsplitter_domain():
    with pytest.raises(ParameterDomainError):
        beamsplitter_unitary(2, 2, 0, 0)
    with pytest.raises(ParameterDomainError):
        beamsplitter_unitary(2, 2, 0, 2)
    with pytest.raises(ParameterDomainError):
        nonlinear_phase_operator(2, 2, 5)


def test_pi_shifter_on_superposition():
    r = FockRegister.from_occupations({(0,): 1, (1,): 1, (2,): 1}, 1, 2)
    out = apply_nonlinear_phase(r, 0)
    expect = np.array([1, 1, -1]) / math.sqrt(3)
    np.testing.assert_array_equal(out.amplitudes, expect.astype(complex))
    assert out.norm() == pytest.approx(1.0, abs=1e-12)


def test_gate_is_cz_up_to_local_phases():
    M, leak = logical_block(gate_operator())
    assert leak < 1e-12
    nf = local_phase_normal_form(M)
    assert nf.distance < 1e-10
    assert abs(abs(nf.phi) - math.pi) < 1e-12


def test_gate_on_logical_inputs():
    for k, occ in enumerate(logical_states()):
        r = FockRegister.from_occupations({occ: 1}, 4)
        out = two_photon_phase_gate(r)
        assert abs(abs(out.amplitude(occ)) - 1) < 1e-12
        assert out.norm() == pytest.approx(1, abs=1e-12)


def test_shifters_off_is_identity():
    M, leak = logical_block(gate_operator(shifters=False))
    np.testing.assert_allclose(M, np.eye(4), atol=1e-14)
    assert leak < 1e-14


def test_gate_domain():
    with pytest.raises(ParameterDomainError):
        two_photon_phase_gate(FockRegister.from_occupations({(1, 1, 0, 0): 1}, 4))
    with pytest.raises(ParameterDomainError):
        two_photon_phase_gate(FockRegister.from_occupations({(0, 1, 1): 1}, 3))


def test_fidelities():
    f = gate_fidelity()
    assert f.process == pytest.approx(1, abs=1e-14)
    assert f.worst_case == pytest.approx(1, abs=1e-14)
    off = gate_fidelity(phase=0.0)
    assert off.process == pytest.approx(0.25, abs=1e-14)
    lossy = gate_fidelity(amp=math.sqrt(0.99))
    assert lossy.worst_case == pytest.approx(0.99, rel=1e-12)
    # direct 4x4 oracle for the process figure
    ideal, _ = logical_block(gate_operator())
    M, _ = logical_block(gate_operator(amp=math.sqrt(0.99)))
    assert lossy.process == pytest.approx(abs(np.trace(ideal.conj().T @ M)) ** 2 / 16, rel=1e-14)
    assert lossy.process > lossy.worst_case
