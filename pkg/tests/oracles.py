"""Independent reference implementations used only by the tests."""
import math

import numpy as np
from scipy import constants
from scipy.linalg import cosm, expm, sinm
from scipy.optimize import fsolve


def mu_codata(Z):
    G0 = 2 * constants.e ** 2 / constants.h
    return math.sqrt(2 * math.pi * G0 * Z)


def equilibrium_fsolve(p, phi_x, phi_xp, lam):
    """Solve the two equilibrium conditions with a generic root finder."""
    def F(v):
        f, pc = v
        bb = phi_x - f - phi_xp - p.chi * pc
        return [p.omega_L * f - p.omega_J * (math.sin(phi_x - f) + math.sin(bb)),
                pc - lam * p.chi * math.sin(bb)]
    sol, info, ier, _ = fsolve(F, [0.0, 0.0], full_output=True, xtol=1e-14)
    assert ier == 1
    return sol


def damped_fixed_point(p, phi_x, phi_xp, lam, damping=0.2, n=20000):
    f = pc = 0.0
    for _ in range(n):
        bb = phi_x - f - phi_xp - p.chi * pc
        f_new = p.omega_J * (math.sin(phi_x - f) + math.sin(bb)) / p.omega_L
        pc_new = lam * p.chi * math.sin(bb)
        f += damping * (f_new - f)
        pc += damping * (pc_new - pc)
    return f, pc


def ho_qubit(p, phi_x, phi_xp, n_ho=70, n_big=160):
    """Qubit spectrum in a harmonic-oscillator basis (unshifted phase variable).

    Returns energies, eigenvectors and matrices of phi-dependent operators in
    the HO basis, all truncated to ``n_ho``.
    """
    w0 = math.sqrt(p.omega_C * p.omega_L)
    x0 = math.sqrt(p.omega_C / (2 * w0)) * math.sqrt(2)  # phi = x0 (b + b^+)/sqrt(2)
    b = np.diag(np.sqrt(np.arange(1.0, n_big)), 1)
    X = (b + b.T) / math.sqrt(2)
    P = 1j * (b.T - b) / math.sqrt(2)
    phi = x0 * X
    N = P / x0
    eye = np.eye(n_big)
    cos_part = cosm(phi + (phi_xp / 2) * eye)
    H = (0.5 * p.omega_C * (N @ N).real
         - 2 * p.omega_J * math.cos(phi_xp / 2) * cos_part.real
         + 0.5 * p.omega_L * ((phi + phi_x * eye) @ (phi + phi_x * eye)))
    H = H[:n_ho, :n_ho]
    sin_c = sinm(phi + phi_xp * eye).real[:n_ho, :n_ho]
    cos_c = cosm(phi + phi_xp * eye).real[:n_ho, :n_ho]
    e, v = np.linalg.eigh(0.5 * (H + H.T))
    return e, v, sin_c, cos_c, N[:n_ho, :n_ho]


def coupled_levels_ho(p, phi_x, phi_xp, bq, n_fock=12, n_q=12, n_ho=70):
    """Full coupled spectrum with the qubit in an HO basis."""
    e, v, S, C, N = ho_qubit(p, phi_x, phi_xp, n_ho)
    e, v = e[:n_q], v[:, :n_q]
    S = v.T @ S @ v
    C = v.T @ C @ v
    Nq = v.T @ N @ v
    a = np.diag(np.sqrt(np.arange(1.0, n_fock + 2)), 1)
    x_big = a + a.T
    x2 = (x_big @ x_big)[:n_fock, :n_fock]
    a = a[:n_fock, :n_fock]
    x = a + a.T
    y = 1j * (a - a.T)
    H = (bq.omega_r * np.kron(np.diag(np.arange(n_fock)), np.eye(n_q))
         + np.kron(np.eye(n_fock), np.diag(e))
         + bq.eta1 * np.kron(x, S) + bq.eta2 * np.kron(x2, C) + bq.eta3 * np.kron(y, Nq))
    return np.linalg.eigvalsh(H)


def permanent(M):
    n = M.shape[0]
    if n == 0:
        return 1.0
    total = 0.0
    import itertools
    for perm in itertools.permutations(range(n)):
        total = total + np.prod([M[i, perm[i]] for i in range(n)])
    return total


def linear_optics_amplitude(U1, n_in, n_out):
    """<n_out| U |n_in> for a passive linear-optics transform ``U1`` (mode matrix)."""
    rows = [i for i, k in enumerate(n_out) for _ in range(k)]
    cols = [j for j, k in enumerate(n_in) for _ in range(k)]
    if len(rows) != len(cols):
        return 0.0
    sub = U1[np.ix_(rows, cols)]
    norm = math.sqrt(np.prod([math.factorial(k) for k in n_in])
                     * np.prod([math.factorial(k) for k in n_out]))
    return permanent(sub) / norm


def two_mode_v2_element(theta, eta2p, cutoff=5):
    """<2bar 0bar| V2 |0bar 1bar> by explicit change of basis in bare Fock space."""
    a1 = np.diag(np.sqrt(np.arange(1.0, cutoff)), 1)
    eye = np.eye(cutoff)
    a = np.kron(a1, eye)
    b = np.kron(eye, a1)
    V = -eta2p * (a.T @ a.T @ b)
    V = V + V.T
    c, s = math.cos(theta), math.sin(theta)
    cdag = c * a.T + s * b.T
    ddag = -s * a.T + c * b.T
    vac = np.zeros(cutoff ** 2)
    vac[0] = 1.0
    s20 = cdag @ cdag @ vac / math.sqrt(2)
    s01 = ddag @ vac
    s10 = cdag @ vac
    return s20 @ V @ s01, s20 @ V @ s10


def hold_phase_2x2(eb, ec, lam, tau):
    """Phase of the |b>-like eigenstate from exact 2x2 diagonalization."""
    ev = np.linalg.eigvalsh(np.array([[eb, lam], [lam, ec]]))
    e = ev[np.argmin(np.abs(ev - eb))]
    return e * tau
