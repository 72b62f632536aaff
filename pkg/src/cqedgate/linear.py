"""Linearized resonator-qubit model: normal modes, effective Hamiltonian, N_l."""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .circuit import (CircuitParams, FluxBias, coupling_coefficients,
                      derive_base_quantities, dressed_frequencies,
                      linearization_point)
from .errors import NumericalError, ParameterDomainError

SQRT2 = math.sqrt(2.0)


class PerturbativeRegimeWarning(UserWarning):
    """Raised when a perturbative formula is used outside its validity range."""


@dataclass(frozen=True)
class NormalModes:
    """Rotation diagonalizing the linear resonator-qubit block.

    ``c = mu1 a + nu1 b`` and ``d = mu2 a + nu2 b``.
    """

    theta: float
    Omega1: float
    Omega2: float
    mu1: float
    nu1: float
    mu2: float
    nu2: float
    r1: float
    r2: float

    def canonical_residual(self) -> float:
        return max(abs(self.mu1 ** 2 + self.nu1 ** 2 - 1.0),
                   abs(self.mu2 ** 2 + self.nu2 ** 2 - 1.0),
                   abs(self.mu1 * self.mu2 + self.nu1 * self.nu2))


def normal_modes(omega: float, omega_q: float, g1: float) -> NormalModes:
    """Normal modes of ``omega a^+a + omega_q b^+b + g1 (a b^+ + a^+ b)``.

    Requires ``Delta = omega_q - omega > 0``; the mixing angle is taken on
    the branch (-pi/4, pi/4] so that it vanishes with ``g1``.
    """
    Delta = omega_q - omega
    if not Delta > 0:
        raise ParameterDomainError(f"Delta = {Delta:.6g} GHz must be > 0")
    if not math.isfinite(g1):
        raise ParameterDomainError("g1 must be finite")
    theta = 0.5 * math.atan(-2.0 * g1 / Delta)
    # root written to avoid cancellation when g1 << Delta
    root = math.hypot(Delta, 2.0 * g1)
    Omega1 = omega + 0.5 * (Delta - root)
    Omega2 = omega_q + 0.5 * (root - Delta)
    c, s = math.cos(theta), math.sin(theta)
    return NormalModes(theta, Omega1, Omega2, c, s, -s, c,
                       SQRT2 * c * c * s, -SQRT2 * c ** 3)


@dataclass(frozen=True)
class DressedStates:
    """Bare-basis amplitudes of the three dressed states used by the protocol.

    Keys of each dict are bare labels ``(n_photon, n_qubit)``.
    """

    s10: dict
    s01: dict
    s20: dict


def dressed_states(nm: NormalModes) -> DressedStates:
    c, s = math.cos(nm.theta), math.sin(nm.theta)
    return DressedStates(
        {(1, 0): c, (0, 1): s},
        {(1, 0): -s, (0, 1): c},
        {(2, 0): c * c, (1, 1): SQRT2 * c * s, (0, 2): s * s},
    )


@dataclass(frozen=True)
class EffectiveHamiltonian:
    """Four-level effective Hamiltonian after eliminating the |a>-|b> coupling.

    Basis order ``(0, a, b, c)``; energies in GHz.
    """

    E_a: float
    E_b: float
    E_c: float
    lambda1: float
    lambda2_eff: float
    delta_prime: float
    Omega1: float

    def matrix(self) -> np.ndarray:
        h = np.diag([0.0, self.E_a, self.E_b, self.E_c])
        h[2, 3] = h[3, 2] = self.lambda2_eff
        return h


def effective_hamiltonian(nm: NormalModes, eta2_prime: float) -> EffectiveHamiltonian:
    """Shifted levels and |b>-|c> coupling from second-order elimination."""
    if nm.Omega1 == 0.0:
        raise NumericalError("Omega1 = 0: adiabatic elimination is singular")
    lam1 = nm.r1 * eta2_prime
    if abs(lam1) > 0.1 * abs(nm.Omega1):
        warnings.warn(f"|lambda1/Omega1| = {abs(lam1 / nm.Omega1):.3g} is not small",
                      PerturbativeRegimeWarning, stacklevel=2)
    shift = lam1 * lam1 / nm.Omega1
    return EffectiveHamiltonian(nm.Omega1 - shift, 2.0 * nm.Omega1 + shift, nm.Omega2,
                                lam1, nm.r2 * eta2_prime,
                                nm.Omega2 - 2.0 * nm.Omega1, nm.Omega1)


def dressing_shift(delta_prime, g2):
    """Exact level shift of |b> from a 2x2 coupling ``g2`` to a level at ``delta_prime``."""
    delta_prime = np.asarray(delta_prime, dtype=float)
    out = 0.5 * delta_prime - np.sign(delta_prime) * np.sqrt(0.25 * delta_prime ** 2 + g2 * g2)
    return out if out.ndim else float(out)


def nonlinearity(eh: EffectiveHamiltonian, exact: bool = False) -> float:
    """Two-photon nonlinearity N_l (GHz).

    The perturbative value is ``-g2**2 / delta_prime``. ``exact=True``
    returns the exact 2x2 dressing instead, which stays finite near the
    crossing.
    """
    dp = eh.delta_prime
    g2 = abs(eh.lambda2_eff)
    if dp == 0.0:
        if exact:
            return -g2
        raise NumericalError("delta_prime = 0: perturbative N_l diverges")
    if not exact and abs(dp) <= 2.0 * g2:
        warnings.warn(f"|delta'| = {abs(dp):.3g} <= 2 g2 = {2 * g2:.3g}; "
                      "perturbative N_l is unreliable", PerturbativeRegimeWarning,
                      stacklevel=2)
    if exact:
        return dressing_shift(dp, g2)
    return -g2 * g2 / dp


def kerr_comparison(g1, gamma, delta, g2=None, omega=0.0):
    """Scaling of nonlinearity and qubit-induced loss: Kerr vs this scheme.

    Returns ``(kerr_nl, kerr_loss, this_nl, this_loss)``; these are scaling
    figures, not absolute rates. ``g2`` defaults to ``g1`` and the
    single-photon detuning is ``delta + omega``.
    """
    if delta == 0:
        raise ParameterDomainError("delta must be non-zero")
    g2 = g1 if g2 is None else g2
    Delta = delta + omega
    kerr_nl = g1 ** 4 / delta ** 3
    kerr_loss = gamma * g1 ** 2 / delta ** 2
    this_nl = g2 ** 2 / delta
    this_loss = gamma * (g1 ** 2 / Delta ** 2 + g2 ** 2 / delta ** 2)
    return kerr_nl, kerr_loss, this_nl, this_loss


# Normal-ordered monomials c^+^i d^+^j c^k d^l of a^+^2 b in the rotated
# modes, as functions of (cos theta, sin theta).
_V2_TERMS = (
    ((2, 0, 1, 0), lambda c, s: c * c * s),
    ((2, 0, 0, 1), lambda c, s: c ** 3),
    ((1, 1, 1, 0), lambda c, s: -2.0 * c * s * s),
    ((1, 1, 0, 1), lambda c, s: -2.0 * c * c * s),
    ((0, 2, 1, 0), lambda c, s: s ** 3),
    ((0, 2, 0, 1), lambda c, s: s * s * c),
)


def v2_terms(theta: float, eta2_prime: float) -> dict:
    """Coefficients of ``V2 = -eta2' (a^+^2 b + h.c.)`` in normal-mode monomials.

    Only the ``a^+^2 b`` half is listed; the Hermitian conjugate follows.
    Keys are exponent tuples ``(i, j, k, l)`` of ``c^+^i d^+^j c^k d^l``.
    """
    c, s = math.cos(theta), math.sin(theta)
    return {k: -eta2_prime * fn(c, s) for k, fn in _V2_TERMS}


def _ladder(n):
    return np.diag(np.sqrt(np.arange(1, n)), 1)


def v2_normal_mode_operator(theta: float, eta2_prime: float, cutoff: int = 4) -> np.ndarray:
    """V2 assembled from :func:`v2_terms` on a two-mode Fock space.

    Basis index ``n_c * cutoff + n_d``; valid among states whose images stay
    below the cutoff.
    """
    a = _ladder(cutoff)
    eye = np.eye(cutoff)
    cc = np.kron(a, eye)
    dd = np.kron(eye, a)
    mp = np.linalg.matrix_power
    op = np.zeros((cutoff ** 2, cutoff ** 2))
    for (i, j, k, l), coef in v2_terms(theta, eta2_prime).items():
        op += coef * mp(cc.T, i) @ mp(dd.T, j) @ mp(cc, k) @ mp(dd, l)
    return op + op.T


@dataclass(frozen=True)
class LinearModel:
    """Every derived scalar of the analytic model at one flux point."""

    phi_x: float
    phi_x_prime: float
    mu: float
    L_r: float
    C_r: float
    Z: float
    phi_cl: float
    f: float
    r: float
    s: float
    t: float
    u: float
    omega: float
    omega_q: float
    Delta: float
    delta: float
    eta1: float
    eta2: float
    eta3: float
    eta2_prime: float
    g1: float
    g2: float
    theta: float
    Omega1: float
    Omega2: float
    delta_prime: float
    lambda1: float
    N_l: float
    N_l_exact: float
    residual: float

    def as_dict(self) -> dict:
        return asdict(self)


def analytic_model(p: CircuitParams, b: FluxBias, self_consistent=True) -> LinearModel:
    """Evaluate the full analytic chain at a flux point."""
    bq = derive_base_quantities(p)
    lp = linearization_point(p, b, self_consistent=self_consistent)
    fr = dressed_frequencies(p, b, lp, bq)
    cp = coupling_coefficients(p, b, lp, fr, bq=bq)
    nm = normal_modes(fr.omega, fr.omega_q, cp.g1)
    g2 = abs(cp.eta2_prime * nm.r2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PerturbativeRegimeWarning)
        eh = effective_hamiltonian(nm, cp.eta2_prime)
        nl = nonlinearity(eh) if eh.delta_prime != 0 else math.nan
    return LinearModel(
        b.phi_x, b.phi_x_prime, bq.mu, bq.L_r, bq.C_r, math.sqrt(bq.L_r / bq.C_r), lp.phi_cl, lp.f,
        lp.r, lp.s, lp.t, lp.u, fr.omega, fr.omega_q, fr.Delta, fr.delta,
        cp.eta1, cp.eta2, cp.eta3, cp.eta2_prime, cp.g1, g2, nm.theta,
        nm.Omega1, nm.Omega2, eh.delta_prime, eh.lambda1, nl,
        nonlinearity(eh, exact=True), lp.residual)
