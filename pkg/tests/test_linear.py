import math
import warnings

import numpy as np
import pytest

from cqedgate.circuit import CircuitParams, FluxBias
from cqedgate.errors import NumericalError, ParameterDomainError
from cqedgate.linear import (PerturbativeRegimeWarning, analytic_model, dressed_states,
                             effective_hamiltonian, kerr_comparison, nonlinearity,
                             normal_modes, v2_normal_mode_operator, v2_terms)
from cqedgate.spectrum import BasisSpec, solve

from oracles import two_mode_v2_element

ON = FluxBias(1.681152969642418, 0.0)


def test_decoupled_limit():
    nm = normal_modes(2.2, 4.4, 0.0)
    assert nm.theta == 0.0 and nm.Omega1 == 2.2 and nm.Omega2 == 4.4


def test_small_coupling_series():
    w, wq = 2.0, 5.0
    g = 1e-3 * (wq - w)
    nm = normal_modes(w, wq, g)
    assert nm.theta == pytest.approx(-g / (wq - w), rel=1e-5)
    ev, vec = np.linalg.eigh([[w, g], [g, wq]])
    assert nm.Omega1 == pytest.approx(ev[0], abs=1e-14)
    assert nm.Omega2 == pytest.approx(ev[1], abs=1e-14)
    # the lower eigenvector is (cos theta, sin theta) up to sign
    assert abs(vec[0, 0] * math.cos(nm.theta) + vec[1, 0] * math.sin(nm.theta)) == pytest.approx(1)


def test_normal_modes_domain():
    with pytest.raises(ParameterDomainError):
        normal_modes(5.0, 4.0, 0.1)
    with pytest.raises(ParameterDomainError):
        normal_modes(2.0, 4.0, float("nan"))


def test_dressed_states_normalized():
    for th in np.linspace(-0.7, 0.7, 15):
        nm = normal_modes(2.0, 4.0, -math.tan(2 * th) * 2.0 / 2)
        ds = dressed_states(nm)
        for st in (ds.s10, ds.s01, ds.s20):
            assert sum(v * v for v in st.values()) == pytest.approx(1, abs=1e-14)
        assert sum(ds.s10[k] * ds.s01[k] for k in ds.s10) == pytest.approx(0, abs=1e-14)
    ds0 = dressed_states(normal_modes(2.0, 4.0, 0.0))
    assert ds0.s20 == {(2, 0): 1.0, (1, 1): 0.0, (0, 2): 0.0}


def test_dressed_states_match_exact_diagonalization():
    p = CircuitParams.reference()
    m = analytic_model(p, ON)
    sp = solve(p, ON, BasisSpec())
    nq = sp.dims[1]
    nm = normal_modes(m.omega, m.omega_q, m.g1)
    ds = dressed_states(nm)
    v = sp.eigenvectors[:, sp.index_of((1, 0))]
    amp = np.array([v[1 * nq + 0], v[0 * nq + 1]])
    ref = np.array([ds.s10[(1, 0)], ds.s10[(0, 1)]])
    assert abs(amp @ ref) / np.linalg.norm(amp) > 0.99


def test_effective_hamiltonian_trivial_cases():
    nm = normal_modes(2.0, 4.3, -0.05)
    eh = effective_hamiltonian(nm, 0.0)
    assert (eh.E_a, eh.E_b, eh.E_c, eh.lambda2_eff) == (nm.Omega1, 2 * nm.Omega1, nm.Omega2, 0.0)
    nm0 = normal_modes(2.0, 4.3, 0.0)
    eh0 = effective_hamiltonian(nm0, 0.01)
    assert nm0.r1 == 0.0 and nm0.r2 == pytest.approx(-math.sqrt(2))
    assert eh0.lambda2_eff == pytest.approx(-math.sqrt(2) * 0.01)


def test_effective_hamiltonian_shifts_equal_and_opposite():
    nm = normal_modes(2.24, 4.44, -0.0675)
    eh = effective_hamiltonian(nm, -0.0046)
    shift = eh.lambda1 ** 2 / nm.Omega1
    assert eh.E_a == pytest.approx(nm.Omega1 - shift)
    assert eh.E_b - 2 * eh.E_a == pytest.approx(3 * shift, rel=1e-9)


def test_effective_hamiltonian_vs_four_level_oracle():
    p = CircuitParams.reference()
    m = analytic_model(p, ON)
    nm = normal_modes(m.omega, m.omega_q, m.g1)
    eh = effective_hamiltonian(nm, m.eta2_prime)
    full = np.zeros((4, 4))
    full[1, 1], full[2, 2], full[3, 3] = nm.Omega1, 2 * nm.Omega1, nm.Omega2
    full[1, 2] = full[2, 1] = nm.r1 * m.eta2_prime
    full[2, 3] = full[3, 2] = nm.r2 * m.eta2_prime
    exact = np.linalg.eigvalsh(full)[2:]
    block = np.linalg.eigvalsh(eh.matrix()[2:, 2:])
    scale = abs(m.eta2_prime) ** 3 / abs(nm.Omega1) ** 2 * 10
    np.testing.assert_allclose(block, exact, atol=max(scale, 1e-12))


def test_effective_hamiltonian_singular_and_warning():
    nm = normal_modes(0.05, 4.0, -0.5)
    with pytest.warns(PerturbativeRegimeWarning):
        effective_hamiltonian(nm, 0.5)
    from dataclasses import replace
    with pytest.raises(NumericalError):
        effective_hamiltonian(replace(nm, Omega1=0.0), 0.1)


def _eh(dp, g2):
    from cqedgate.linear import EffectiveHamiltonian
    return EffectiveHamiltonian(0, 0, dp, 0, g2, dp, 1.0)


def test_nonlinearity_values():
    assert nonlinearity(_eh(-0.1, 0.0)) == 0.0
    assert nonlinearity(_eh(-0.2, 0.005)) == pytest.approx(0.5 * nonlinearity(_eh(-0.1, 0.005)))
    nl = nonlinearity(_eh(-0.1, 0.005))
    assert nl == pytest.approx(2.5e-4, rel=1e-12)
    ev = np.linalg.eigvalsh([[0.0, 0.005], [0.005, -0.1]])
    assert nl == pytest.approx(ev[1], rel=1e-2)
    assert nonlinearity(_eh(-0.1, 0.005), exact=True) == pytest.approx(ev[1], rel=1e-12)


def test_nonlinearity_regime_checks():
    with pytest.warns(PerturbativeRegimeWarning):
        nonlinearity(_eh(0.005, 0.005))
    with pytest.raises(NumericalError):
        nonlinearity(_eh(0.0, 0.005))
    assert nonlinearity(_eh(0.0, 0.005), exact=True) == -0.005


def test_kerr_comparison():
    k = kerr_comparison(0.05, 0.0, 0.3, 0.05, 0.0)
    assert k[1] == 0 and k[3] == 0
    kn, kl, tn, tl = kerr_comparison(0.05, 1e-4, 0.3)
    assert tl / kl == pytest.approx(2.0)
    k2 = kerr_comparison(0.05, 1e-4, 0.6)
    assert k2[0] / kn == pytest.approx(1 / 8) and k2[2] / tn == pytest.approx(0.5)
    with pytest.raises(ParameterDomainError):
        kerr_comparison(0.05, 1e-4, 0.0)


@pytest.mark.parametrize("theta", [0.0, -0.03, 0.2, -0.6])
def test_v2_expansion_matches_change_of_basis(theta):
    eta2p = -0.0046
    ref_b_c, ref_b_a = two_mode_v2_element(theta, eta2p)
    op = v2_normal_mode_operator(theta, eta2p, cutoff=5)
    i20, i01, i10 = 2 * 5 + 0, 0 * 5 + 1, 1 * 5 + 0
    assert op[i20, i01] == pytest.approx(ref_b_c, abs=1e-10)
    assert op[i20, i10] == pytest.approx(ref_b_a, abs=1e-10)
    r2 = -math.sqrt(2) * math.cos(theta) ** 3
    assert op[i20, i01] == pytest.approx(r2 * eta2p, abs=1e-12)


def test_v2_full_operator_is_rotation_of_bare_operator():
    theta, eta2p, n = 0.3, 0.01, 6
    a1 = np.diag(np.sqrt(np.arange(1.0, n)), 1)
    eye = np.eye(n)
    a, b = np.kron(a1, eye), np.kron(eye, a1)
    V = -eta2p * (a.T @ a.T @ b)
    V = V + V.T
    c, s = math.cos(theta), math.sin(theta)
    cdag, ddag = c * a.T + s * b.T, -s * a.T + c * b.T
    vac = np.zeros(n * n)
    vac[0] = 1.0
    pairs = [(i, j) for i in range(n) for j in range(n) if i + j <= 2]
    states = [np.linalg.matrix_power(cdag, i) @ np.linalg.matrix_power(ddag, j) @ vac
              / math.sqrt(math.factorial(i) * math.factorial(j)) for i, j in pairs]
    ref = np.array([[u @ V @ w for w in states] for u in states])
    op = v2_normal_mode_operator(theta, eta2p, cutoff=n)
    keep = [i * n + j for i, j in pairs]
    np.testing.assert_allclose(op[np.ix_(keep, keep)], ref, atol=1e-12)
    assert len(v2_terms(theta, eta2p)) == 6


def test_analytic_model_fields():
    p = CircuitParams.reference()
    m = analytic_model(p, ON)
    assert m.delta == pytest.approx(-0.041, abs=1e-9)
    assert m.Z == pytest.approx(449.0)
    assert m.g2 == pytest.approx(math.sqrt(2) * abs(m.eta2_prime) * math.cos(m.theta) ** 3)
    assert m.delta_prime == pytest.approx(m.Omega2 - 2 * m.Omega1)
    assert m.N_l == pytest.approx(-m.g2 ** 2 / m.delta_prime)
    d = m.as_dict()
    assert set(d) >= {"mu", "L_r", "C_r", "omega", "omega_q", "Delta", "delta", "eta1", "eta2",
                      "eta3", "g1", "g2", "theta", "Omega1", "Omega2", "N_l"}
