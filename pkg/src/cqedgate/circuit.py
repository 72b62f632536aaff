"""Circuit parameters, classical operating point and linearized couplings.

All energies are ordinary frequencies E/h in GHz. SI quantities only
appear inside :func:`derive_base_quantities`.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import constants

from . import _kernels
from .errors import ConvergenceError, ParameterDomainError, UnstablePotentialError

TWO_PI = 2.0 * math.pi
#: conductance quantum 2e^2/h, siemens
G0 = 2.0 * constants.e ** 2 / constants.h
#: flux quantum h/2e, webers
PHI0 = constants.h / (2.0 * constants.e)

EQ_TOL = 1e-13
EQ_MAX_ITER = 200
EQ_DAMPING = 0.5
EQ_NEWTON_AFTER = 50


class FluxRegimeWarning(UserWarning):
    """Emitted when E_J exceeds 10 E_C (outside the flux-qubit regime)."""


@dataclass(frozen=True)
class CircuitParams:
    """Fixed hardware parameters of the resonator/SQUID circuit.

    Parameters
    ----------
    omega_C, omega_J, omega_L : float
        Charging, single-junction Josephson and outer-loop inductive
        energies, GHz.
    omega_r_target : float
        Design resonator frequency, GHz.
    Z : float
        Resonator characteristic impedance, ohm.
    chi : float
        Inductive coupling fraction, in (0, 1). ``chi = 0`` is accepted as
        the decoupled limit.
    kappa, gamma : float
        Cavity and qubit decay rates, GHz.
    """

    omega_C: float
    omega_J: float
    omega_L: float
    omega_r_target: float
    Z: float
    chi: float
    kappa: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        errs = validate_circuit(self)
        if errs:
            raise ParameterDomainError("; ".join(errs))
        if self.omega_J > 10.0 * self.omega_C:
            warnings.warn(
                f"omega_J/omega_C = {self.omega_J / self.omega_C:.3g} > 10: "
                "outside the flux-qubit regime", FluxRegimeWarning, stacklevel=3)

    @classmethod
    def reference(cls, **overrides) -> "CircuitParams":
        """Reference parameter set (omega_L = 3 omega_J, chi = 0.17)."""
        kw = dict(omega_C=1.0, omega_J=5.0, omega_L=15.0, omega_r_target=2.225,
                  Z=449.0, chi=0.17, kappa=1e-6, gamma=1e-4)
        kw.update(overrides)
        return cls(**kw)

    def replace(self, **kw) -> "CircuitParams":
        d = self.__dict__.copy()
        d.update(kw)
        return CircuitParams(**d)


def validate_circuit(p) -> list[str]:
    """Return a list of invariant violations (empty when valid)."""
    errs = []
    for name in ("omega_C", "omega_J", "omega_L", "omega_r_target", "Z"):
        v = getattr(p, name)
        if not (np.isfinite(v) and v > 0):
            errs.append(f"{name} must be finite and > 0 (got {v!r})")
    if not (np.isfinite(p.chi) and 0.0 <= p.chi < 1.0):
        errs.append(f"chi must lie in [0, 1) (got {p.chi!r})")
    for name in ("kappa", "gamma"):
        v = getattr(p, name)
        if not (np.isfinite(v) and v >= 0):
            errs.append(f"{name} must be finite and >= 0 (got {v!r})")
    return errs


def wrap_flux(x: float) -> float:
    """Reduce a flux angle to the canonical window [-2pi, 2pi)."""
    if -TWO_PI <= x < TWO_PI:
        return float(x)
    y = math.fmod(x + TWO_PI, 2.0 * TWO_PI)
    if y < 0:
        y += 2.0 * TWO_PI
    y -= TWO_PI
    # fmod rounding can land exactly on the open end
    return -TWO_PI if y >= TWO_PI else y


@dataclass(frozen=True)
class FluxBias:
    """Reduced external fluxes (radians), wrapped on construction.

    The unwrapped inputs are kept in ``raw`` for reporting.
    """

    phi_x: float
    phi_x_prime: float
    raw: tuple = field(default=(), compare=False)

    def __post_init__(self):
        px, pxp = float(self.phi_x), float(self.phi_x_prime)
        if not (math.isfinite(px) and math.isfinite(pxp)):
            raise ParameterDomainError("flux bias must be finite")
        object.__setattr__(self, "raw", self.raw or (px, pxp))
        object.__setattr__(self, "phi_x", wrap_flux(px))
        object.__setattr__(self, "phi_x_prime", wrap_flux(pxp))


@dataclass(frozen=True)
class BaseQuantities:
    """Flux-independent derived quantities.

    ``ell_ej`` is the dimensionless (2pi/Phi0)^2 L_r E_J; ``eta*`` are GHz.
    """

    mu: float
    L_r: float
    C_r: float
    ell_ej: float
    eta1: float
    eta2: float
    eta3: float
    omega_r: float


def derive_base_quantities(p: CircuitParams) -> BaseQuantities:
    """Resonator inductance/capacitance, zero-point flux and eta coefficients.

    ``mu`` uses the bare inductance together with the design frequency,
    so ``L_r C_r = 1/(2 pi f_r)^2`` holds exactly.
    """
    if p.Z <= 0 or p.omega_r_target <= 0:
        raise ParameterDomainError("Z and omega_r_target must be positive")
    f_r = p.omega_r_target * 1e9
    L_r = p.Z / (TWO_PI * f_r)
    C_r = 1.0 / (TWO_PI * f_r * p.Z)
    mu = math.sqrt(TWO_PI * G0 * p.Z)
    E_J = constants.h * p.omega_J * 1e9
    ell_ej = (TWO_PI / PHI0) ** 2 * L_r * E_J
    eta1 = p.chi * p.omega_J * mu
    eta2 = eta1 * eta1 / (2.0 * p.omega_J)
    eta3 = eta1 * p.omega_r_target / (2.0 * p.omega_J)
    return BaseQuantities(mu, L_r, C_r, ell_ej, eta1, eta2, eta3, p.omega_r_target)


@dataclass(frozen=True)
class LinearizationPoint:
    """Classical operating point and its trigonometric coefficients."""

    phi_cl: float
    f: float
    beta_cl: float
    r: float
    s: float
    t: float
    u: float
    residual: float = 0.0
    n_iter: int = 0


def equilibrium_residual(p: CircuitParams, b: FluxBias, f: float, phi_cl: float,
                         bq: BaseQuantities | None = None) -> float:
    """Max-norm residual (radians) of the coupled equilibrium conditions."""
    bq = bq or derive_base_quantities(p)
    a = b.phi_x - f
    bb = b.phi_x - f - b.phi_x_prime - p.chi * phi_cl
    r1 = f - p.omega_J * (math.sin(a) + math.sin(bb)) / p.omega_L
    r2 = phi_cl - bq.ell_ej * p.chi * math.sin(bb)
    return max(abs(r1), abs(r2))


def _point(b: FluxBias, p: CircuitParams, f: float, phi_cl: float, res, nit):
    beta = -b.phi_x + f
    arg = beta + b.phi_x_prime + p.chi * phi_cl
    return LinearizationPoint(phi_cl, f, beta, math.sin(beta), math.sin(arg),
                              math.cos(beta), math.cos(arg), float(res), int(nit))


def linearization_point(p: CircuitParams, b: FluxBias, *, self_consistent=True,
                        tol=EQ_TOL) -> LinearizationPoint:
    """Classical resonator flux ``phi_cl`` and qubit offset ``f``.

    Parameters
    ----------
    self_consistent : bool
        When True (default) both conditions are solved jointly; the first
        undamped step of the iteration coincides with the closed-form
        expressions. When False the explicit closed forms are returned,
        with ``phi_cl`` evaluated at ``f = 0``.

    Raises
    ------
    ConvergenceError
        If the iteration does not meet ``tol`` within 200 iterations.
    """
    bq = derive_base_quantities(p)
    if not self_consistent:
        d = b.phi_x - b.phi_x_prime
        lam = bq.ell_ej
        phi_cl = lam * p.chi * math.sin(d) / (1.0 + lam * p.chi ** 2 * math.cos(d))
        bb = d - p.chi * phi_cl
        f = (p.omega_J * (math.sin(b.phi_x) + math.sin(bb))
             / (p.omega_L + p.omega_J * (math.cos(b.phi_x) + math.cos(bb))))
        return _point(b, p, f, phi_cl, equilibrium_residual(p, b, f, phi_cl, bq), 1)
    f, pc, nit, res, st = _kernels.solve_equilibrium(
        b.phi_x, b.phi_x_prime, p.chi, p.omega_J, p.omega_L, bq.ell_ej,
        EQ_DAMPING, tol, EQ_MAX_ITER, EQ_NEWTON_AFTER)
    if st[0] != _kernels.OK:
        raise ConvergenceError(
            f"equilibrium iteration did not converge in {EQ_MAX_ITER} steps "
            f"at phi_x={b.phi_x:.6g}, phi_x'={b.phi_x_prime:.6g}", residual=res[0])
    return _point(b, p, f[0], pc[0], res[0], nit[0])


def linearization_grid(p: CircuitParams, phi_x, phi_x_prime):
    """Vectorized equilibrium over arrays; returns ``(f, phi_cl, converged)``."""
    bq = derive_base_quantities(p)
    px = np.vectorize(wrap_flux)(np.asarray(phi_x, float))
    pxp = np.vectorize(wrap_flux)(np.broadcast_to(np.asarray(phi_x_prime, float), px.shape))
    f, pc, _, _, st = _kernels.solve_equilibrium(
        px.ravel(), pxp.ravel(), p.chi, p.omega_J, p.omega_L, bq.ell_ej,
        EQ_DAMPING, EQ_TOL, EQ_MAX_ITER, EQ_NEWTON_AFTER)
    return f.reshape(px.shape), pc.reshape(px.shape), (st == _kernels.OK).reshape(px.shape)


@dataclass(frozen=True)
class DressedFrequencies:
    omega: float
    omega_q: float
    Delta: float
    delta: float


def dressed_frequencies(p: CircuitParams, b: FluxBias, lp: LinearizationPoint,
                        bq: BaseQuantities | None = None) -> DressedFrequencies:
    """Loaded resonator frequency, qubit frequency and the two detunings (GHz).

    Raises
    ------
    UnstablePotentialError
        If the quadratic qubit potential is not confining.
    """
    bq = bq or derive_base_quantities(p)
    load = 1.0 + bq.ell_ej * p.chi ** 2 * lp.u
    if load <= 0:
        raise UnstablePotentialError("resonator effective inductance is not positive")
    omega = bq.omega_r * math.sqrt(load)
    stiff = p.omega_L + p.omega_J * (lp.t + lp.u)
    if stiff <= 0:
        raise UnstablePotentialError(
            f"omega_L + omega_J (t+u) = {stiff:.6g} <= 0: qubit potential unstable")
    omega_q = math.sqrt(p.omega_C * stiff)
    return DressedFrequencies(omega, omega_q, omega_q - omega, omega_q - 2.0 * omega)


@dataclass(frozen=True)
class Couplings:
    """Linear and nonlinear coupling coefficients (GHz).

    ``eta2_prime`` carries the qubit zero-point factor; ``g2`` is only set
    when a mixing angle is supplied.
    """

    eta1: float
    eta2: float
    eta3: float
    g1: float
    eta2_prime: float
    g2: float | None = None


def coupling_coefficients(p: CircuitParams, b: FluxBias, lp: LinearizationPoint,
                          freqs: DressedFrequencies | None = None, theta=None,
                          bq: BaseQuantities | None = None) -> Couplings:
    """eta coefficients, linear coupling ``g1`` and nonlinear coupling.

    ``eta2_prime = eta2 * s * x0`` where ``x0 = sqrt(omega_C / (2 omega_q))``
    is the qubit phase zero-point amplitude. With ``theta`` given, also
    ``g2 = sqrt(2) |eta2_prime| cos^3(theta)``.
    """
    bq = bq or derive_base_quantities(p)
    freqs = freqs or dressed_frequencies(p, b, lp, bq)
    x0 = math.sqrt(p.omega_C / (2.0 * freqs.omega_q))
    y0 = math.sqrt(freqs.omega_q / (2.0 * p.omega_C))
    g1 = bq.eta1 * lp.u * x0 - bq.eta3 * y0
    eta2p = bq.eta2 * lp.s * x0
    g2 = None
    if theta is not None:
        g2 = abs(math.sqrt(2.0) * eta2p * math.cos(theta) ** 3)
    return Couplings(bq.eta1, bq.eta2, bq.eta3, g1, eta2p, g2)
