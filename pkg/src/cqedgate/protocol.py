"""Adiabatic two-photon phase protocol: schedule, loss budget and dynamics.

Inputs are frequencies in GHz (E/h). Times are computed in ns with
angular rates (2 pi GHz) and reported in seconds. Loss figures are
dimensionless and do not depend on the 2 pi convention.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid, quad, solve_ivp
from scipy.optimize import minimize_scalar

from . import _kernels
from .errors import (InfeasibleDesignError, NumericalError, ParameterDomainError)
from .linear import SQRT2, dressing_shift

TWO_PI = 2.0 * math.pi
NS = 1e-9
QUAD_REL = 1e-10


@dataclass(frozen=True)
class LossParams:
    """Decay rates, adiabaticity and detuning schedule endpoints (GHz)."""

    kappa: float
    gamma: float
    epsilon: float
    delta_i: float
    delta_m: float
    n_phase: int = 0

    def __post_init__(self):
        errs = validate_loss_params(self)
        if errs:
            raise ParameterDomainError("; ".join(errs))

    @property
    def on_off_ratio(self) -> float:
        return abs(self.delta_i / self.delta_m)


def validate_loss_params(lp) -> list[str]:
    errs = []
    if not (lp.kappa >= 0 and lp.gamma >= 0):
        errs.append("kappa and gamma must be >= 0")
    if not (0 < lp.epsilon ** 2 <= 0.1):
        errs.append(f"epsilon**2 must lie in (0, 0.1] (got {lp.epsilon ** 2:.4g})")
    if lp.delta_m == 0 or not abs(lp.delta_i) > abs(lp.delta_m):
        errs.append("require |delta_i| > |delta_m| > 0")
    elif np.sign(lp.delta_i) != np.sign(lp.delta_m):
        errs.append("delta_i and delta_m must have the same sign")
    if lp.n_phase < 0:
        errs.append("n_phase must be >= 0")
    return errs


def decay_rate(delta, omega, g1, g2, lp) -> float:
    """Decay rate of the two-photon-like state at detuning ``delta`` (GHz)."""
    delta = np.asarray(delta, dtype=float)
    if np.any(delta == 0) or np.any(delta + omega == 0):
        raise ParameterDomainError("decay rate is singular at delta = 0 or delta = -omega")
    out = lp.kappa + lp.gamma * g1 ** 2 / (delta + omega) ** 2 + lp.gamma * g2 ** 2 / delta ** 2
    return out if out.ndim else float(out)


def adiabatic_integrand(delta, g2):
    """``|g2| / (delta^2 + 4 g2^2)^{3/2}``, the inverse of the saturated sweep rate."""
    g = abs(g2)
    return g / (delta * delta + 4.0 * g * g) ** 1.5


def adiabatic_antiderivative(delta, g2):
    """Antiderivative of :func:`adiabatic_integrand` in ``delta``."""
    g = abs(g2)
    return delta / (4.0 * g * np.sqrt(delta * delta + 4.0 * g * g))


def _check_interval(delta_i, delta_m):
    if delta_i * delta_m <= 0 and not (delta_i == delta_m != 0):
        raise ParameterDomainError("sweep interval must not contain delta = 0")


def _quad(fn, a, b):
    lo, hi = min(a, b), max(a, b)
    val, err = quad(fn, lo, hi, epsabs=0.0, epsrel=QUAD_REL, limit=400)
    if not np.isfinite(val) or err > 1e3 * QUAD_REL * abs(val) + 1e-300:
        raise NumericalError(f"quadrature did not converge (estimate {val}, error {err})")
    return val


def sweep_time(g2, epsilon, delta_i, delta_m, closed_form=False) -> float:
    """Half-sweep time (s) saturating the adiabaticity bound with parameter ``epsilon``."""
    if delta_i == delta_m:
        return 0.0
    _check_interval(delta_i, delta_m)
    if closed_form:
        v = abs(adiabatic_antiderivative(delta_i, g2) - adiabatic_antiderivative(delta_m, g2))
    else:
        v = _quad(lambda d: adiabatic_integrand(d, g2), delta_i, delta_m)
    # cyclic GHz -> angular rad/ns
    return v / epsilon / TWO_PI * NS


def dynamic_loss(lp: LossParams, omega, g1, g2, delta_i=None, delta_m=None) -> float:
    """Decay accumulated over both sweeps (forward and back)."""
    di = lp.delta_i if delta_i is None else delta_i
    dm = lp.delta_m if delta_m is None else delta_m
    if di == dm:
        return 0.0
    _check_interval(di, dm)
    if lp.gamma == 0:
        return 2.0 / lp.epsilon * lp.kappa * abs(
            adiabatic_antiderivative(di, g2) - adiabatic_antiderivative(dm, g2))
    v = _quad(lambda d: decay_rate(d, omega, g1, g2, lp) * adiabatic_integrand(d, g2), di, dm)
    return 2.0 / lp.epsilon * v


def dynamic_loss_closed_form(lp: LossParams, g2, delta_i=None, delta_m=None) -> float:
    """Closed-form dynamic loss without the ``g1`` term.

    Covers the cavity part and the ``gamma g2^2 / delta^2`` part exactly.
    """
    di = lp.delta_i if delta_i is None else delta_i
    dm = lp.delta_m if delta_m is None else delta_m
    g = abs(g2)
    a2 = 4.0 * g * g

    def prim_g(d):
        # antiderivative of 1 / (d^2 (d^2 + a2)^{3/2})
        r = math.sqrt(d * d + a2)
        return -(r / d + d / r) / (a2 * a2)

    kap = lp.kappa * (adiabatic_antiderivative(dm, g) - adiabatic_antiderivative(di, g))
    gam = lp.gamma * g ** 3 * (prim_g(dm) - prim_g(di))
    return 2.0 / lp.epsilon * abs(kap + gam)


def hold_time_nominal(delta_m, g2) -> float:
    """Hold time (s) giving a pi phase at the perturbative nonlinearity."""
    if g2 == 0:
        raise ParameterDomainError("g2 = 0: the required hold time is infinite")
    return math.pi * abs(delta_m) / (g2 * g2) / TWO_PI * NS


def static_loss(lp: LossParams, omega, g1, g2, delta_m=None) -> tuple[float, float]:
    """Loss during the hold and the nominal hold time ``(L_s, tau_s [s])``."""
    dm = lp.delta_m if delta_m is None else delta_m
    if g2 == 0:
        raise ParameterDomainError("g2 = 0: the required hold time is infinite")
    d = abs(dm)
    ls = math.pi * (lp.kappa * d / g2 ** 2
                    + lp.gamma * d / (dm + omega) ** 2 * (g1 / g2) ** 2
                    + lp.gamma / d)
    return ls, hold_time_nominal(dm, g2)


def optimal_hold_detuning(lp: LossParams, omega, g1, g2, sign=-1.0, upper=None) -> float:
    """Numerical minimizer of the static loss over ``|delta_m|`` in (0, upper].

    ``upper`` defaults to ``omega / 2``. Returns the signed detuning.
    """
    upper = 0.5 * omega if upper is None else upper
    lo = 1e-6 * upper

    def f(logd):
        return static_loss(lp, omega, g1, g2, sign * math.exp(logd))[0]

    res = minimize_scalar(f, bounds=(math.log(lo), math.log(upper)), method="bounded",
                          options=dict(xatol=1e-10))
    return sign * math.exp(res.x)


def optimal_hold_estimate(lp: LossParams, g2, sign=-1.0) -> float:
    """Small-detuning estimate ``g2 sqrt(gamma / kappa)``."""
    return sign * abs(g2) * math.sqrt(lp.gamma / lp.kappa)


def loss_curves(lp: LossParams, omega, g1, g2, delta_m_grid) -> dict:
    """Dynamic and static loss over a range of hold detunings."""
    grid = np.asarray(delta_m_grid, dtype=float)
    lp0 = LossParams(0.0, lp.gamma, lp.epsilon, lp.delta_i, lp.delta_m, lp.n_phase)
    out = dict(delta_m=grid, L_d=[], L_s=[], L_s_no_kappa=[], tau_h=[], tau_s=[])
    for dm in grid:
        out["L_d"].append(dynamic_loss(lp, omega, g1, g2, delta_m=dm))
        ls, ts = static_loss(lp, omega, g1, g2, dm)
        out["L_s"].append(ls)
        out["tau_s"].append(ts)
        out["L_s_no_kappa"].append(static_loss(lp0, omega, g1, g2, dm)[0])
        out["tau_h"].append(sweep_time(g2, lp.epsilon, lp.delta_i, dm))
    return {k: np.asarray(v) for k, v in out.items()}


@dataclass(frozen=True)
class HoldModel:
    """Frozen linear-model parameters along the sweep (GHz).

    The detuning ``delta`` is the only time-dependent quantity; the
    single-photon detuning is ``delta + omega``.
    """

    omega: float
    g1: float
    eta2_prime: float

    @classmethod
    def from_g2(cls, omega, g1, g2, delta_m) -> "HoldModel":
        """Choose ``eta2_prime`` so the |b>-|c> coupling equals ``g2`` at ``delta_m``."""
        c = math.cos(0.5 * math.atan(-2.0 * g1 / (delta_m + omega)))
        return cls(omega, g1, g2 / (SQRT2 * c ** 3))

    def levels(self, delta):
        """Rotating-frame ``(E_a, E_b, E_c, lambda2)`` as functions of ``delta``."""
        delta = np.asarray(delta, dtype=float)
        D = delta + self.omega
        if np.any(D <= 0):
            raise ParameterDomainError("delta + omega must stay positive")
        th = 0.5 * np.arctan(-2.0 * self.g1 / D)
        c, s = np.cos(th), np.sin(th)
        root = np.sqrt(D * D + 4.0 * self.g1 ** 2)
        om1 = self.omega + 0.5 * (D - root)
        om2 = self.omega + 0.5 * (D + root)
        lam1 = SQRT2 * c * c * s * self.eta2_prime
        lam2 = -SQRT2 * c ** 3 * self.eta2_prime
        shift = lam1 ** 2 / om1
        return -shift, shift, om2 - 2.0 * om1, lam2

    def g2(self, delta):
        return np.abs(self.levels(delta)[3])

    def nonlinear_shift(self, delta):
        """Two-photon phase rate relative to twice the single-photon rate (GHz)."""
        ea, eb, ec, lam2 = self.levels(delta)
        out = eb - 2.0 * ea + dressing_shift(ec - eb, np.abs(lam2))
        return out if np.ndim(out) else float(out)

    def mixing(self, delta):
        """Angle of the |b>-like adiabatic state, ``tan 2a = 2 lambda2 / (E_b - E_c)``."""
        ea, eb, ec, lam2 = self.levels(delta)
        return 0.5 * np.arctan(2.0 * lam2 / (eb - ec))


@dataclass
class Schedule:
    """Piecewise detuning schedule; times in seconds, detunings in GHz."""

    tau_h: float
    tau_s: float
    delta_i: float
    delta_m: float
    g2: float
    epsilon: float
    t: np.ndarray = field(repr=False, default=None)
    delta: np.ndarray = field(repr=False, default=None)

    @property
    def tau_g(self) -> float:
        return 2.0 * self.tau_h + self.tau_s

    def direction(self) -> float:
        return math.copysign(1.0, self.delta_m - self.delta_i)


def sweep_trajectory(g2, epsilon, delta_i, delta_m, n=2001):
    """Integrate the saturated sweep ``d(delta)/dt = +-eps (delta^2+4g^2)^{3/2}/g``.

    Returns ``(t [s], delta [GHz])`` sampled uniformly in time. RK45 is
    checked against the closed-form inverse of the antiderivative.
    """
    tau = sweep_time(g2, epsilon, delta_i, delta_m) / NS  # ns
    if tau == 0:
        return np.zeros(1), np.array([delta_i])
    g = TWO_PI * abs(g2)
    sgn = math.copysign(1.0, delta_m - delta_i)

    def rhs(_, y):
        q = y[0] * y[0] + 4.0 * g * g
        return [sgn * epsilon * q * math.sqrt(q) / g]

    t = np.linspace(0.0, tau, n)
    sol = solve_ivp(rhs, (0.0, tau), [TWO_PI * delta_i], method="RK45", t_eval=t,
                    rtol=1e-11, atol=1e-12 * abs(TWO_PI * delta_i))
    if not sol.success:
        raise NumericalError(f"sweep integration failed: {sol.message}")
    d = sol.y[0] / TWO_PI
    exact = sweep_closed_form(t * NS, g2, epsilon, delta_i, delta_m)
    if np.max(np.abs(d - exact)) > 1e-6 * abs(delta_i):
        raise NumericalError("sweep integration disagrees with the closed form")
    return t * NS, d


def sweep_closed_form(t, g2, epsilon, delta_i, delta_m):
    """Detuning along the saturated sweep from the inverted antiderivative."""
    g = abs(g2)
    sgn = math.copysign(1.0, delta_m - delta_i)
    F = adiabatic_antiderivative(delta_i, g) + sgn * epsilon * TWO_PI * np.asarray(t) / NS
    w = np.clip(4.0 * g * F, -1.0 + 1e-16, 1.0 - 1e-16)
    return 2.0 * g * w / np.sqrt(1.0 - w * w)


def bound_residual(t, delta, g2, epsilon):
    """``g^2 (d delta/dt)^2 / (delta^2 + 4 g^2)^3 - eps^2`` at interior samples."""
    g = TWO_PI * abs(g2)
    d = TWO_PI * np.asarray(delta)
    tt = np.asarray(t) / NS
    ddot = np.gradient(d, tt, edge_order=2)
    return g * g * ddot ** 2 / (d * d + 4.0 * g * g) ** 3 - epsilon ** 2


@dataclass
class ProtocolReport:
    """Designed protocol with loss budget; times in seconds."""

    tau_h: float
    tau_s: float
    tau_g: float
    L_d: float
    L_s: float
    L_total: float
    phase: float
    on_off_ratio: float
    delta_i: float
    delta_m: float
    g2: float
    epsilon: float
    n_phase: int
    sweep_phase: float
    nonadiabatic_phase: float
    predicted_leak: float
    exact_dressing: bool = True
    L_s_nominal: float = 0.0
    tau_s_nominal: float = 0.0
    schedule: dict = field(default_factory=dict, repr=False)

    def as_dict(self, with_schedule=False) -> dict:
        d = asdict(self)
        if not with_schedule:
            d.pop("schedule")
        return d


def _sweep_samples(model: HoldModel, g2, eps, di, dm, n=20001):
    t, d = sweep_trajectory(g2, eps, di, dm, n)
    return t / NS, d  # ns, GHz


def _nonadiabatic(model, t, d, hold_ns):
    """Second-order adiabatic-perturbation correction over sweep-hold-sweep.

    Returns ``(arg B, |beta_c|^2)`` where ``B`` is the amplitude factor of
    the |b>-like state and ``beta_c`` the leaked amplitude.
    """
    ea, eb, ec, lam2 = model.levels(d)
    sb = dressing_shift(ec - eb, np.abs(lam2))
    gap = TWO_PI * (ec - eb - 2.0 * sb)  # E_c' - E_b', rad/ns
    alpha = model.mixing(d)
    adot = np.gradient(alpha, t, edge_order=2)
    phi_f = cumulative_trapezoid(gap, t, initial=0.0)
    phi_end = phi_f[-1]
    phi_m = gap[-1] * hold_ns
    # back sweep is the time reverse of the forward one
    t_all = np.concatenate([t, t[-1] + hold_ns + t])
    A = np.concatenate([adot, -adot[::-1]])
    Phi = np.concatenate([phi_f, phi_end + phi_m + (phi_end - phi_f[::-1])])
    # split the integrals at the hold: nothing accrues there
    n = t.size

    def cum(x):
        a = cumulative_trapezoid(x[:n], t_all[:n], initial=0.0)
        b = cumulative_trapezoid(x[n:], t_all[n:], initial=0.0) + a[-1]
        return np.concatenate([a, b])

    bc = -cum(A * np.exp(1j * Phi))
    B = 1.0 + cum(A * np.exp(-1j * Phi) * bc)[-1]
    return float(np.angle(B)), float(abs(bc[-1]) ** 2)


def sweep_gap_phase(model: HoldModel, g2, epsilon, delta_i, delta_m) -> float:
    """Dynamical phase between the two dressed levels accrued over one sweep."""
    def f(x):
        ea, eb, ec, lam2 = model.levels(x)
        gap = ec - eb - 2.0 * dressing_shift(ec - eb, abs(lam2))
        return abs(gap) * adiabatic_integrand(x, g2)
    return _quad(f, delta_i, delta_m) / epsilon


def matched_epsilon(model: HoldModel, g2, epsilon, delta_i, delta_m) -> float:
    """Largest adiabaticity parameter <= ``epsilon`` whose sweep phase is a multiple of 2 pi.

    Abrupt starts and stops of a saturated sweep each excite the other
    dressed level with amplitude ~epsilon; a 2 pi-commensurate sweep makes
    the two contributions cancel to first order.
    """
    phi = sweep_gap_phase(model, g2, epsilon, delta_i, delta_m)
    k = max(1, math.ceil(phi / TWO_PI - 1e-12))
    return epsilon * phi / (TWO_PI * k)


def design_protocol(model: HoldModel, lp: LossParams, on_off_min: float | None = None,
                    auto_delta_m: bool = False, min_g2_ratio: float = 4.0,
                    phase_matched: bool = True, phase_tol: float = 1e-9,
                    n_samples: int = 20001) -> ProtocolReport:
    """Build the saturated-sweep schedule and the hold giving a (2n+1)pi phase.

    Parameters
    ----------
    model : HoldModel
        Frozen couplings; ``g2`` for the schedule is evaluated at ``delta_m``.
    lp : LossParams
        ``delta_m`` is ignored when ``auto_delta_m`` is set; the hold detuning
        then minimizes ``L_d + L_s`` subject to the on-off ratio and
        ``|delta_m| >= min_g2_ratio * g2``.
    on_off_min : float, optional
        Required ``|delta_i / delta_m|``.
    phase_matched : bool
        Lower the adiabaticity parameter to :func:`matched_epsilon` so
        diabatic excitation from the sweep endpoints cancels. The report's
        ``epsilon`` is the value actually used.

    Raises
    ------
    InfeasibleDesignError
        If no hold detuning satisfies the constraints.
    """
    dm = lp.delta_m
    if auto_delta_m:
        dm = _choose_delta_m(model, lp, on_off_min, min_g2_ratio)
    elif on_off_min is not None and abs(lp.delta_i / dm) < on_off_min * (1 - 1e-12):
        raise InfeasibleDesignError(
            f"on-off ratio {abs(lp.delta_i / dm):.3g} below required {on_off_min:g}",
            binding_constraint="on_off_ratio")
    g2 = float(model.g2(dm))
    if g2 == 0:
        raise InfeasibleDesignError("g2 vanishes at the hold point", "g2")
    eps = lp.epsilon
    if phase_matched and lp.delta_i != dm:
        eps = matched_epsilon(model, g2, eps, lp.delta_i, dm)
    lp = LossParams(lp.kappa, lp.gamma, eps, lp.delta_i, dm, lp.n_phase)
    omega, g1 = model.omega, model.g1

    t, d = _sweep_samples(model, g2, lp.epsilon, lp.delta_i, dm, n_samples)
    tau_h_ns = t[-1]
    # phase accrued on one sweep, integrated in delta for accuracy
    rate = lambda x: model.nonlinear_shift(x) * adiabatic_integrand(x, g2)
    sweep_phase = (_quad(rate, lp.delta_i, dm) / lp.epsilon) if lp.delta_i != dm else 0.0
    n_hold = model.nonlinear_shift(dm)
    sign = math.copysign(1.0, n_hold)

    n = lp.n_phase
    corr, leak = _nonadiabatic(model, t, d, 0.0)
    while True:
        target = sign * (2 * n + 1) * math.pi
        hold = 0.0
        for _ in range(50):
            phase_rest = target - 2.0 * sweep_phase + corr
            hold = phase_rest / (TWO_PI * n_hold)
            if hold < 0:
                break
            new_corr, leak = _nonadiabatic(model, t, d, hold)
            if abs(new_corr - corr) < phase_tol:
                corr = new_corr
                break
            corr = new_corr
        if hold >= 0:
            break
        n += 1
        if n > lp.n_phase + 100:
            raise InfeasibleDesignError("sweep phase cannot be matched", "phase")
    phase = 2.0 * sweep_phase + TWO_PI * n_hold * hold - corr

    tau_h = tau_h_ns * NS
    tau_s = hold * NS
    L_d = dynamic_loss(lp, omega, g1, g2)
    L_s_nom, tau_s_nom = static_loss(lp, omega, g1, g2)
    L_s = decay_rate(dm, omega, g1, g2, lp) * TWO_PI * hold
    sched = _schedule_table(model, t, d, hold, g2)
    return ProtocolReport(tau_h, tau_s, 2 * tau_h + tau_s, L_d, L_s, L_d + L_s, phase,
                          abs(lp.delta_i / dm), lp.delta_i, dm, g2, lp.epsilon, n,
                          2.0 * sweep_phase, -corr, leak, True, L_s_nom, tau_s_nom, sched)


def _choose_delta_m(model, lp, on_off_min, min_g2_ratio):
    di = lp.delta_i
    hi = abs(di) / on_off_min if on_off_min else abs(di)
    g_est = float(model.g2(math.copysign(hi, di)))
    lo = min_g2_ratio * g_est
    if hi <= lo:
        raise InfeasibleDesignError(
            f"on-off ratio >= {on_off_min:g} needs |delta_m| <= {hi * 1e3:.4g} MHz but "
            f"the perturbative hold needs |delta_m| >= {lo * 1e3:.4g} MHz",
            binding_constraint="on_off_ratio")
    sgn = math.copysign(1.0, di)

    def total(x):
        dm = sgn * x
        g2 = float(model.g2(dm))
        lpx = LossParams(lp.kappa, lp.gamma, lp.epsilon, di, dm, lp.n_phase)
        return (dynamic_loss(lpx, model.omega, model.g1, g2)
                + static_loss(lpx, model.omega, model.g1, g2)[0])

    res = minimize_scalar(total, bounds=(lo, hi), method="bounded", options=dict(xatol=1e-9))
    return sgn * float(res.x)


def _schedule_table(model, t, d, hold_ns, g2, n_out=201):
    idx = np.unique(np.linspace(0, t.size - 1, n_out).astype(int))
    ts, ds = t[idx], d[idx]
    T = np.concatenate([ts, ts[-1] + hold_ns + ts])
    D = np.concatenate([ds, ds[::-1]])
    return dict(t_s=T * NS, delta_GHz=D, g2_GHz=np.full(T.shape, g2),
                Nl_GHz=np.asarray(model.nonlinear_shift(D)))


@dataclass(frozen=True)
class OracleResult:
    phase_num: float
    loss_num: float
    adiabatic_leak: float
    n_steps: int
    n_rejected: int


def evolve_oracle(model: HoldModel, report: ProtocolReport, lp: LossParams | None = None,
                  rtol=1e-10, atol=1e-12) -> OracleResult:
    """Integrate the four-level effective dynamics through the designed schedule.

    Starts in the vacuum, the single-photon state and the |b>-like adiabatic
    state. Population of an n-photon component decays at ``n kappa / 2`` so the
    two-photon state decays at ``kappa``, as in :func:`decay_rate`; qubit
    weight decays at ``gamma``.

    Returns the two-photon phase relative to twice the single-photon phase,
    the norm loss of the two-photon branch and the leaked population.
    """
    kappa = lp.kappa if lp else 0.0
    gamma = lp.gamma if lp else 0.0
    di, dm = report.delta_i, report.delta_m
    a0 = float(model.mixing(di))
    y0 = [TWO_PI * di, 1.0, 0.0, math.cos(a0), 0.0, math.sin(a0), 0.0, 0.0, 0.0]
    sgn = int(math.copysign(1, dm - di))
    tau_h = report.tau_h / NS
    tau_s = report.tau_s / NS
    params = [TWO_PI * model.omega, TWO_PI * model.g1, TWO_PI * model.eta2_prime,
              TWO_PI * kappa, TWO_PI * gamma, TWO_PI * report.g2, report.epsilon]
    y, nacc, nrej, st = _kernels.evolve_he(y0, [tau_h, tau_s, tau_h], [sgn, 0, -sgn],
                                           params, rtol, atol)
    if st == _kernels.STEP_UNDERFLOW:
        raise NumericalError("step size underflow in the evolution oracle (stiff dynamics)")
    if st != _kernels.OK:
        raise NumericalError("detuning left the Delta > 0 branch during evolution")
    b = complex(y[3], y[4])
    c = complex(y[5], y[6])
    af = float(model.mixing(y[0] / TWO_PI))
    amp_b = math.cos(af) * b + math.sin(af) * c
    amp_c = -math.sin(af) * b + math.cos(af) * c
    arg_b = y[7] + np.angle(amp_b / b) - np.angle(complex(math.cos(a0), 0.0))
    phase = -(arg_b - 2.0 * y[8])
    loss = 1.0 - (abs(b) ** 2 + abs(c) ** 2)
    return OracleResult(float(phase), float(loss), float(abs(amp_c) ** 2), int(nacc), int(nrej))


def evolve_static(model: HoldModel, delta, duration_s, lp: LossParams | None = None,
                  rtol=1e-10, atol=1e-12) -> OracleResult:
    """Hold at fixed ``delta`` for ``duration_s`` starting in the adiabatic state."""
    g2 = float(model.g2(delta))
    rep = ProtocolReport(0.0, duration_s, duration_s, 0, 0, 0, 0, 1.0, delta, delta, g2,
                         0.1, 0, 0, 0, 0)
    return evolve_oracle(model, rep, lp, rtol, atol)
