"""Property checks shared by the hypothesis suite and the acceptance run.

Each check takes plain parameters and raises AssertionError on failure.
Draws that land outside a model's domain return False so callers can
count them.
"""
import math

import numpy as np

from cqedgate.circuit import CircuitParams, FluxBias
from cqedgate.errors import ParameterDomainError
from cqedgate.gate import FockRegister, apply_beamsplitter, apply_nonlinear_phase
from cqedgate.linear import analytic_model, dressed_states, normal_modes
from cqedgate.spectrum import BasisSpec, build_hamiltonian, diagonalize, qubit_problem, solve

SMALL = BasisSpec(6, 64, 2 * math.pi, 6)


def circuit(wc, wj, k, wr, z, chi):
    return CircuitParams(wc, wj, k * wj, wr, z, chi)


def random_circuit(rng):
    return circuit(rng.uniform(0.5, 2.0), rng.uniform(1.0, 8.0), rng.uniform(2.2, 5.0),
                   rng.uniform(1.5, 3.0), rng.uniform(200.0, 600.0), rng.uniform(0.0, 0.25))


def random_flux(rng):
    return FluxBias(*rng.uniform(-2 * math.pi, 2 * math.pi, 2))


def canonical(omega, delta, g1):
    nm = normal_modes(omega, omega + delta, g1)
    assert nm.canonical_residual() < 1e-12
    R = np.array([[nm.mu1, nm.nu1], [nm.mu2, nm.nu2]])
    H = np.array([[omega, g1], [g1, omega + delta]])
    D = R @ H @ R.T
    scale = max(abs(omega), abs(delta), abs(g1), 1.0)
    assert abs(D[0, 1]) < 1e-12 * scale
    assert abs(D[0, 0] - nm.Omega1) < 1e-12 * scale
    assert abs(D[1, 1] - nm.Omega2) < 1e-12 * scale
    ds = dressed_states(nm)
    for s in (ds.s10, ds.s01, ds.s20):
        assert abs(sum(v * v for v in s.values()) - 1.0) < 1e-12
    return True


def hermitian(p, b, basis=SMALL):
    H = build_hamiltonian(p, b, basis)
    assert np.max(np.abs(H - H.conj().T)) <= 1e-12 * max(1.0, np.max(np.abs(H)))
    return True


def normalized(p, b, basis=SMALL, n=6):
    sp = solve(p, b, basis)
    V = sp.eigenvectors[:, :n]
    assert np.max(np.abs(V.conj().T @ V - np.eye(n))) < 1e-10
    try:
        m = analytic_model(p, b)
    except ParameterDomainError:
        return True
    ds = dressed_states(normal_modes(m.omega, m.omega_q, m.g1))
    for s in (ds.s10, ds.s01, ds.s20):
        assert abs(sum(v * v for v in s.values()) - 1.0) < 1e-12
    return True


def register_norm(amps, ops):
    """Random two-photon register through beamsplitters and shifters keeps unit norm."""
    reg = FockRegister(3, 2, amps / np.linalg.norm(amps))
    for kind, i, j in ops:
        if kind == 0 and i != j:
            reg = apply_beamsplitter(reg, i, j)
        elif kind == 1:
            reg = apply_nonlinear_phase(reg, i)
    assert abs(reg.norm() - 1.0) < 1e-12
    return True


def periodic(p, x, y, basis=SMALL):
    b1 = FluxBias(x, y)
    b2 = FluxBias(x + 2 * math.pi, y + 2 * math.pi)
    e1 = solve(p, b1, basis).eigenvalues[:6]
    e2 = solve(p, b2, basis).eigenvalues[:6]
    assert np.max(np.abs(e1 - e2)) < 1e-9 * max(1.0, np.max(np.abs(e1)))
    try:
        m1 = analytic_model(p, b1)
    except ParameterDomainError:
        return True
    m2 = analytic_model(p, b2)
    for k in ("omega", "omega_q", "eta1", "eta2", "eta3", "g1", "g2"):
        a, c = getattr(m1, k), getattr(m2, k)
        assert abs(a - c) <= 1e-9 * max(1.0, abs(a)), k
    return True


def decoupled(p, b, basis=SMALL):
    """chi = 0 decouples exactly; couplings shrink linearly as chi -> 0."""
    q0 = p.replace(chi=0.0)
    sp = solve(q0, b, basis)
    qb = qubit_problem(q0, b, basis)
    wr = q0.omega_r_target
    ref = np.sort((np.arange(basis.n_fock)[:, None] * wr + qb.energies[None, :]).ravel())
    assert np.max(np.abs(sp.eigenvalues[:6] - ref[:6])) < 1e-9
    try:
        m0 = analytic_model(q0, b)
        m1 = analytic_model(p.replace(chi=1e-4), b)
        m2 = analytic_model(p.replace(chi=2e-4), b)
    except ParameterDomainError:
        return True
    for k in ("eta1", "eta3", "g1"):
        assert getattr(m0, k) == 0.0
        r = getattr(m2, k) / getattr(m1, k) if getattr(m1, k) else 2.0
        assert abs(r - 2.0) < 1e-3, (k, r)
    assert m0.eta2 == 0.0 and m0.g2 == 0.0
    return True
