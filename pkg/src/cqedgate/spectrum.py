"""Exact diagonalization of the resonator + SQUID-qubit Hamiltonian.

The qubit is discretized on a uniform phase grid in the shifted variable
``phi' = phi + phi_x`` (so the grid does not move with the bias), solved
once, and the lowest ``n_qubit_levels`` eigenstates are kept. The coupled
Hamiltonian is then assembled in the Fock x qubit-eigenbasis product space.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .circuit import CircuitParams, FluxBias, derive_base_quantities
from .errors import ConfigError, CQEDError, NumericalError, ParameterDomainError
from .linear import analytic_model

#: default convergence tolerance, GHz (1 kHz)
CONV_TOL = 1e-6
BOUNDARY_TOL = 1e-8
SLOPE_STEP = 1e-4

LABELS = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1))


class BasisWarning(UserWarning):
    """Qubit eigenfunctions are not negligible at the grid edge."""


@dataclass(frozen=True)
class BasisSpec:
    """Truncation of the product basis.

    Attributes
    ----------
    n_fock : int
        Number of resonator Fock states ``|0>..|n_fock-1>``.
    n_phi : int
        Qubit phase-grid points (even).
    phi_span : float
        Half-width of the phase grid, radians.
    n_qubit_levels : int
        Qubit eigenstates retained in the product basis.
    """

    n_fock: int = 10
    n_phi: int = 128
    phi_span: float = 2.0 * math.pi
    n_qubit_levels: int = 8

    def doubled(self, which: str) -> "BasisSpec":
        return replace(self, **{which: 2 * getattr(self, which)})


def validate_basis(p: CircuitParams, basis: BasisSpec) -> list[str]:
    errs = []
    if basis.n_fock < 4:
        errs.append(f"n_fock must be >= 4 (got {basis.n_fock})")
    if basis.n_phi < 64 or basis.n_phi % 2:
        errs.append(f"n_phi must be even and >= 64 (got {basis.n_phi})")
    if basis.n_qubit_levels < 2 or basis.n_qubit_levels > basis.n_phi:
        errs.append(f"n_qubit_levels must lie in [2, n_phi] (got {basis.n_qubit_levels})")
    if p is None:
        return errs
    wq0 = math.sqrt(p.omega_C * (p.omega_L + 2.0 * p.omega_J))
    width = math.sqrt(p.omega_C / wq0)
    if not basis.phi_span >= 6.0 * width:
        errs.append(f"phi_span = {basis.phi_span:.4g} must cover 6 oscillator widths "
                    f"(>= {6 * width:.4g})")
    return errs


def _check_basis(p, basis):
    errs = validate_basis(p, basis)
    if errs:
        raise ConfigError(errs)


@dataclass(frozen=True)
class PhaseGrid:
    phi: np.ndarray
    N: np.ndarray  # -i d/dphi, Nyquist mode removed
    K2: np.ndarray  # -d^2/dphi^2


_GRID_CACHE: dict = {}


def phase_grid(n_phi: int, phi_span: float) -> PhaseGrid:
    """Uniform grid with Fourier-spectral derivative matrices (cached)."""
    key = (n_phi, float(phi_span))
    if key in _GRID_CACHE:
        return _GRID_CACHE[key]
    dphi = 2.0 * phi_span / n_phi
    phi = -phi_span + dphi * np.arange(n_phi)
    k = 2.0 * np.pi * np.fft.fftfreq(n_phi, d=dphi)
    eye = np.eye(n_phi)
    F = np.fft.fft(eye, axis=0)
    k1 = k.copy()
    k1[n_phi // 2] = 0.0
    N = np.fft.ifft(k1[:, None] * F, axis=0)
    K2 = np.fft.ifft((k * k)[:, None] * F, axis=0).real
    N = 0.5 * (N + N.conj().T)
    K2 = 0.5 * (K2 + K2.T)
    g = PhaseGrid(phi, N, K2)
    _GRID_CACHE[key] = g
    return g


def _qubit_potential(p, phi_x, phi_xp, phi):
    arg = phi - phi_x + 0.5 * phi_xp
    return (-2.0 * p.omega_J * math.cos(0.5 * phi_xp) * np.cos(arg)
            + 0.5 * p.omega_L * phi * phi)


def _qubit_potential_dphix(p, phi_x, phi_xp, phi):
    return -2.0 * p.omega_J * math.cos(0.5 * phi_xp) * np.sin(phi - phi_x + 0.5 * phi_xp)


@dataclass(frozen=True)
class QubitBasis:
    """Retained qubit eigenstates and grid operators projected onto them."""

    energies: np.ndarray
    vectors: np.ndarray  # grid x levels
    S: np.ndarray
    C: np.ndarray
    N: np.ndarray
    boundary_amplitude: float
    phi_x: float
    phi_x_prime: float


def qubit_problem(p: CircuitParams, b: FluxBias, basis: BasisSpec) -> QubitBasis:
    """Solve the bare qubit on the grid and project the coupling operators."""
    g = phase_grid(basis.n_phi, basis.phi_span)
    V = _qubit_potential(p, b.phi_x, b.phi_x_prime, g.phi)
    H = 0.5 * p.omega_C * g.K2 + np.diag(V)
    e, v = np.linalg.eigh(H)
    nq = basis.n_qubit_levels
    e, v = e[:nq], v[:, :nq]
    # deterministic sign: largest component positive
    idx = np.argmax(np.abs(v), axis=0)
    v = v * np.sign(v[idx, np.arange(nq)])
    edge = float(np.max(np.abs(v[[0, 1, -2, -1], :])))
    if edge > BOUNDARY_TOL:
        warnings.warn(f"qubit eigenfunction amplitude {edge:.2e} at the grid edge "
                      f"exceeds {BOUNDARY_TOL:g}", BasisWarning, stacklevel=2)
    return _project(g, b, v, e, edge)


def _project(g, b, v, e, edge):
    arg = g.phi - b.phi_x + b.phi_x_prime
    S = v.T @ (np.sin(arg)[:, None] * v)
    C = v.T @ (np.cos(arg)[:, None] * v)
    Nq = v.T @ g.N @ v
    return QubitBasis(e, v, S, C, Nq, edge, b.phi_x, b.phi_x_prime)


def _ladder(n):
    a = np.diag(np.sqrt(np.arange(1.0, n)), 1)
    # x^2 computed in a larger space so the top Fock element is exact
    big = np.diag(np.sqrt(np.arange(1.0, n + 1)), 1)
    xb = big + big.T
    return a, (xb @ xb)[:n, :n]


def _assemble(p, basis, hq, S, C, Nq):
    bq = derive_base_quantities(p)
    nf = basis.n_fock
    a, x2 = _ladder(nf)
    x = a + a.T
    y = 1j * (a - a.T)
    num = np.diag(np.arange(nf, dtype=float))
    eye_f = np.eye(nf)
    eye_q = np.eye(hq.shape[0])
    H = (bq.omega_r * np.kron(num, eye_q) + np.kron(eye_f, hq)
         + bq.eta1 * np.kron(x, S) + bq.eta2 * np.kron(x2, C)
         + bq.eta3 * np.kron(y, Nq))
    return H


def build_hamiltonian(p: CircuitParams, b: FluxBias, basis: BasisSpec,
                      qb: QubitBasis | None = None) -> np.ndarray:
    """Coupled Hamiltonian (GHz) in the Fock x qubit-eigenbasis product space.

    Index of ``|n, q>`` is ``n * n_qubit_levels + q``.
    """
    _check_basis(p, basis)
    qb = qb or qubit_problem(p, b, basis)
    return _assemble(p, basis, np.diag(qb.energies), qb.S, qb.C, qb.N)


def _frozen_hamiltonian(p, b, basis, qb: QubitBasis, derivative=False):
    """Hamiltonian at bias ``b`` expressed in the qubit basis ``qb`` of another bias."""
    g = phase_grid(basis.n_phi, basis.phi_span)
    v = qb.vectors
    arg = g.phi - b.phi_x + b.phi_x_prime
    if derivative:
        dV = _qubit_potential_dphix(p, b.phi_x, b.phi_x_prime, g.phi)
        hq = v.T @ (dV[:, None] * v)
        S = v.T @ (-np.cos(arg)[:, None] * v)
        C = v.T @ (np.sin(arg)[:, None] * v)
        bq = derive_base_quantities(p)
        nf = basis.n_fock
        a, x2 = _ladder(nf)
        return (np.kron(np.eye(nf), hq) + bq.eta1 * np.kron(a + a.T, S)
                + bq.eta2 * np.kron(x2, C))
    V = _qubit_potential(p, b.phi_x, b.phi_x_prime, g.phi)
    hq = v.T @ ((0.5 * p.omega_C * g.K2 + np.diag(V)) @ v)
    S = v.T @ (np.sin(arg)[:, None] * v)
    C = v.T @ (np.cos(arg)[:, None] * v)
    return _assemble(p, basis, 0.5 * (hq + hq.T), S, C, qb.N)


@dataclass
class Spectrum:
    """Sorted eigenpairs with bare-state labels.

    ``labels[j]`` is ``"nq"`` (photon number, qubit level) when the largest
    bare overlap of eigenvector ``j`` exceeds 0.5, otherwise ``"mixed"``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    labels: list
    overlaps: np.ndarray
    dims: tuple
    splitting_2ph: float | None = None
    boundary_amplitude: float = 0.0

    def index_of(self, label) -> int:
        """Eigenvector with the largest weight on bare state ``(n, q)``."""
        n, q = label
        return int(np.argmax(np.abs(self.eigenvectors[n * self.dims[1] + q, :])))

    def energy(self, label, relative=True) -> float:
        e = self.eigenvalues[self.index_of(label)]
        return float(e - self.eigenvalues[self.index_of((0, 0))]) if relative else float(e)


def diagonalize(H: np.ndarray, dims=None, k: int | None = None) -> Spectrum:
    """Dense Hermitian eigensolve with overlap labeling.

    Raises
    ------
    NumericalError
        If ``H`` is not Hermitian to 1e-12 relative or the solver fails.
    """
    H = np.asarray(H)
    scale = max(float(np.max(np.abs(H))), 1e-300)
    herm = float(np.max(np.abs(H - H.conj().T)))
    if herm > 1e-12 * scale:
        raise NumericalError(f"Hamiltonian not Hermitian: residual {herm:.3e}")
    try:
        e, v = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}; cond={np.linalg.cond(H):.3e}") from exc
    if k is not None:
        e, v = e[:k], v[:, :k]
    dims = dims or (H.shape[0], 1)
    w = np.abs(v) ** 2
    best = np.argmax(w, axis=0)
    ov = w[best, np.arange(w.shape[1])]
    labels = [f"{i // dims[1]}{i % dims[1]}" if o > 0.5 else "mixed"
              for i, o in zip(best, ov)]
    return Spectrum(e, v, labels, ov, tuple(dims))


def solve(p: CircuitParams, b: FluxBias, basis: BasisSpec) -> Spectrum:
    qb = qubit_problem(p, b, basis)
    sp = diagonalize(build_hamiltonian(p, b, basis, qb), (basis.n_fock, basis.n_qubit_levels))
    sp.boundary_amplitude = qb.boundary_amplitude
    return sp


def effective_coupling(sp: Spectrum, s1=(2, 0), s2=(0, 1)) -> tuple[float, np.ndarray]:
    """Coupling between two bare states from a des Cloizeaux effective Hamiltonian.

    The two eigenvectors with the largest weight in ``span{s1, s2}`` are
    projected onto it and symmetrically orthonormalized; the off-diagonal
    element of the resulting 2x2 Hermitian matrix is returned together with
    the matrix. At the crossing it equals half the minimum gap.
    """
    nq = sp.dims[1]
    rows = [s1[0] * nq + s1[1], s2[0] * nq + s2[1]]
    P = sp.eigenvectors[rows, :]
    weight = np.sum(np.abs(P) ** 2, axis=0)
    pick = np.sort(np.argsort(weight)[-2:])
    B = P[:, pick]
    w, u = np.linalg.eigh(B @ B.conj().T)
    inv_sqrt = u @ np.diag(w ** -0.5) @ u.conj().T
    Heff = inv_sqrt @ B @ np.diag(sp.eigenvalues[pick]) @ B.conj().T @ inv_sqrt
    Heff = 0.5 * (Heff + Heff.conj().T)
    return float(abs(Heff[0, 1])), Heff


def two_photon_gap(p: CircuitParams, b: FluxBias, basis: BasisSpec) -> float:
    """Gap between the two eigenstates dominated by |2,0> and |0,1> (GHz)."""
    sp = solve(p, b, basis)
    nq = sp.dims[1]
    P = sp.eigenvectors[[2 * nq, 1], :]
    pick = np.argsort(np.sum(np.abs(P) ** 2, axis=0))[-2:]
    return float(abs(sp.eigenvalues[pick[1]] - sp.eigenvalues[pick[0]]))


@dataclass(frozen=True)
class Crossing:
    """Minimum two-photon/qubit gap along ``phi_x`` at fixed ``phi_x_prime``."""

    phi_x: float
    phi_x_prime: float
    gap: float
    half_gap: float
    analytic_phi_x: float
    analytic_g2: float


def avoided_crossing(p: CircuitParams, basis: BasisSpec, phi_x_prime: float,
                     phi_x_guess: float, window: float = 0.3) -> Crossing:
    """Locate the minimum two-photon/qubit splitting near ``phi_x_guess``.

    The analytic crossing (``delta' = 0``) is found first by root bracketing;
    the exact gap is then minimized within ``window`` of it.
    """
    from scipy.optimize import brentq

    def dprime(x):
        m = analytic_model(p, FluxBias(x, phi_x_prime))
        return m.delta_prime

    xs = np.linspace(phi_x_guess - window, phi_x_guess + window, 41)
    ds = np.array([dprime(x) for x in xs])
    sign_change = np.nonzero(np.sign(ds[:-1]) != np.sign(ds[1:]))[0]
    if sign_change.size == 0:
        raise NumericalError(f"no analytic crossing within {window} rad of {phi_x_guess}")
    i = sign_change[np.argmin(np.abs(xs[sign_change] - phi_x_guess))]
    x0 = brentq(dprime, xs[i], xs[i + 1], xtol=1e-12)
    m = analytic_model(p, FluxBias(x0, phi_x_prime))
    res = minimize_scalar(lambda x: two_photon_gap(p, FluxBias(x, phi_x_prime), basis),
                          bounds=(x0 - window, x0 + window), method="bounded",
                          options=dict(xatol=1e-6))
    return Crossing(float(res.x), phi_x_prime, float(res.fun), 0.5 * float(res.fun),
                    float(x0), m.g2)


SWEEP_COLUMNS = ("phi_x", "phi_x_prime", "omega_GHz", "omega_q_GHz", "delta_GHz", "g1_GHz",
                 "g2_analytic_GHz", "g2_numeric_GHz", "E_00", "E_10", "E_01", "E_20",
                 "E_11", "converged")


def sweep_point(p: CircuitParams, basis: BasisSpec, b: FluxBias) -> dict:
    """One row of the flux sweep. Failures are flagged rather than raised."""
    row = dict.fromkeys(SWEEP_COLUMNS, math.nan)
    row.update(phi_x=b.phi_x, phi_x_prime=b.phi_x_prime, converged=0)
    ok = True
    try:
        m = analytic_model(p, b)
        row.update(omega_GHz=m.omega, omega_q_GHz=m.omega_q, delta_GHz=m.delta,
                   g1_GHz=m.g1, g2_analytic_GHz=m.g2)
    except CQEDError:
        ok = False
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", BasisWarning)
            sp = solve(p, b, basis)
        e0 = sp.eigenvalues[sp.index_of((0, 0))]
        row["E_00"] = 0.0
        for lab in LABELS[1:]:
            row[f"E_{lab[0]}{lab[1]}"] = float(sp.eigenvalues[sp.index_of(lab)] - e0)
        row["g2_numeric_GHz"] = effective_coupling(sp)[0]
    except (CQEDError, BasisWarning, np.linalg.LinAlgError):
        ok = False
    row["converged"] = int(ok)
    return row


def _sweep_chunk(args):
    p, basis, pts = args
    return [sweep_point(p, basis, FluxBias(x, y)) for x, y in pts]


def flux_sweep(p: CircuitParams, basis: BasisSpec, grid, workers: int = 1) -> list[dict]:
    """Evaluate :func:`sweep_point` over ``grid`` (iterable of FluxBias).

    Rows come back in grid order regardless of ``workers``.
    """
    _check_basis(p, basis)
    pts = [(b.phi_x, b.phi_x_prime) for b in grid]
    if not pts:
        raise ConfigError("flux grid is empty")
    if workers <= 1 or len(pts) < 2:
        return _sweep_chunk((p, basis, pts))
    n = min(workers, len(pts))
    chunks = [pts[i::n] for i in range(n)]
    with ProcessPoolExecutor(max_workers=n) as ex:
        parts = list(ex.map(_sweep_chunk, [(p, basis, c) for c in chunks]))
    rows = [None] * len(pts)
    for i, part in enumerate(parts):
        rows[i::n] = part
    return rows


@dataclass(frozen=True)
class SlopeResult:
    """Transition-energy slope dE/dphi_x in GHz per radian."""

    label: tuple
    finite_difference: float
    hellmann_feynman: float
    overlap: float


def level_slopes(p: CircuitParams, basis: BasisSpec, b: FluxBias, which=(1, 0),
                 h: float = SLOPE_STEP) -> SlopeResult:
    """Slope of ``E_which - E_00`` with respect to ``phi_x``.

    A centred difference with Richardson extrapolation over steps ``h`` and
    ``h/2``. The qubit eigenbasis is frozen at the centre point so the
    finite-dimensional Hamiltonian is a smooth function of the bias.

    Raises
    ------
    NumericalError
        If the labeled state is mixed anywhere on the stencil.
    """
    _check_basis(p, basis)
    qb = qubit_problem(p, b, basis)
    dims = (basis.n_fock, basis.n_qubit_levels)

    def level(x):
        sp = diagonalize(_frozen_hamiltonian(p, FluxBias(x, b.phi_x_prime), basis, qb), dims)
        i, j0 = sp.index_of(which), sp.index_of((0, 0))
        if sp.overlaps[i] <= 0.5 or sp.overlaps[j0] <= 0.5:
            raise NumericalError(f"level {which} is mixed at phi_x={x:.6g}; "
                                 "slope undefined near a crossing")
        return sp.eigenvalues[i] - sp.eigenvalues[j0], sp

    x = b.phi_x
    d1 = (level(x + h)[0] - level(x - h)[0]) / (2 * h)
    d2 = (level(x + h / 2)[0] - level(x - h / 2)[0]) / h
    fd = (4.0 * d2 - d1) / 3.0
    _, sp = level(x)
    dH = _frozen_hamiltonian(p, b, basis, qb, derivative=True)
    vi = sp.eigenvectors[:, sp.index_of(which)]
    v0 = sp.eigenvectors[:, sp.index_of((0, 0))]
    hf = float(np.real(vi.conj() @ dH @ vi - v0.conj() @ dH @ v0))
    return SlopeResult(tuple(which), float(fd), hf, float(sp.overlaps[sp.index_of(which)]))


def hellmann_feynman_slope(p, basis, b, which=(1, 0)) -> float:
    return level_slopes(p, basis, b, which).hellmann_feynman


def average_slope(p: CircuitParams, basis: BasisSpec, start: FluxBias, end: FluxBias,
                  which=(1, 0)) -> float:
    """Mean ``d(E_which - E_00)/d phi_x`` between two biases (GHz per radian).

    Both end points must share ``phi_x_prime``.
    """
    if start.phi_x_prime != end.phi_x_prime or start.phi_x == end.phi_x:
        raise ParameterDomainError("end points must differ in phi_x only")
    e = []
    for b in (start, end):
        sp = solve(p, b, basis)
        if sp.overlaps[sp.index_of(which)] <= 0.5:
            raise NumericalError(f"level {which} is mixed at phi_x={b.phi_x:.6g}")
        e.append(sp.energy(which))
    return (e[1] - e[0]) / (end.phi_x - start.phi_x)


@dataclass(frozen=True)
class ConvergenceReport:
    drift: dict = field(default_factory=dict)
    tol: float = CONV_TOL

    @property
    def converged(self) -> bool:
        return all(v < self.tol for v in self.drift.values())

    @property
    def max_drift(self) -> float:
        return max(self.drift.values())


def convergence_check(p: CircuitParams, b: FluxBias, basis: BasisSpec, n_levels: int = 8,
                      tol: float = CONV_TOL, quantity=None) -> ConvergenceReport:
    """Drift of the lowest transition energies when each cutoff is doubled.

    ``quantity`` may map a Spectrum to an array to check instead of the
    levels (e.g. a gap).
    """
    def levels(bs):
        sp = solve(p, b, bs)
        if quantity is not None:
            return np.atleast_1d(quantity(sp, bs))
        return sp.eigenvalues[1:n_levels] - sp.eigenvalues[0]

    ref = levels(basis)
    drift = {}
    for which in ("n_fock", "n_phi", "n_qubit_levels"):
        drift[which] = float(np.max(np.abs(levels(basis.doubled(which)) - ref)))
    # doubling the window at fixed spacing
    wide = replace(basis, n_phi=2 * basis.n_phi, phi_span=2 * basis.phi_span)
    drift["phi_span"] = float(np.max(np.abs(levels(wide) - ref)))
    return ConvergenceReport(drift, tol)
