"""Dual-rail two-photon phase gate built from beamsplitters and pi phase shifters.

Two logical qubits occupy modes (0, 1) and (2, 3) with ``|0>_L = |01>`` and
``|1>_L = |10>``. The beamsplitter acts on the interacting rails 1 and 2.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import ParameterDomainError

BS_ANGLE = math.pi / 4
RAILS = (1, 2)


@lru_cache(maxsize=None)
def fock_basis(n_modes: int, cutoff: int) -> tuple:
    """Occupation tuples with total photon number <= cutoff, lexicographic."""
    return tuple(t for t in itertools.product(range(cutoff + 1), repeat=n_modes)
                 if sum(t) <= cutoff)


@dataclass
class FockRegister:
    """State vector over the truncated multimode Fock space."""

    n_modes: int
    cutoff: int = 2
    amplitudes: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        dim = len(self.basis)
        if self.amplitudes is None:
            self.amplitudes = np.zeros(dim, complex)
            self.amplitudes[0] = 1.0
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (dim,):
            raise ParameterDomainError(f"amplitude vector must have length {dim}")

    @property
    def basis(self) -> tuple:
        return fock_basis(self.n_modes, self.cutoff)

    @classmethod
    def from_occupations(cls, terms: dict, n_modes: int, cutoff: int = 2, normalize=True):
        reg = cls(n_modes, cutoff, np.zeros(len(fock_basis(n_modes, cutoff)), complex))
        index = {s: k for k, s in enumerate(reg.basis)}
        for occ, amp in terms.items():
            if tuple(occ) not in index:
                raise ParameterDomainError(f"state {occ} outside the truncated space")
            reg.amplitudes[index[tuple(occ)]] += amp
        if normalize:
            reg.amplitudes /= np.linalg.norm(reg.amplitudes)
        return reg

    def amplitude(self, occ) -> complex:
        return complex(self.amplitudes[self.basis.index(tuple(occ))])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def evolve(self, U) -> "FockRegister":
        return FockRegister(self.n_modes, self.cutoff, U @ self.amplitudes)


def _annihilator(n_modes, cutoff, i):
    basis = fock_basis(n_modes, cutoff)
    index = {s: k for k, s in enumerate(basis)}
    a = np.zeros((len(basis), len(basis)))
    for k, s in enumerate(basis):
        if s[i] > 0:
            t = list(s)
            t[i] -= 1
            a[index[tuple(t)], k] = math.sqrt(s[i])
    return a


def _check_modes(n_modes, *modes):
    for m in modes:
        if not 0 <= m < n_modes:
            raise ParameterDomainError(f"mode index {m} out of range for {n_modes} modes")


@lru_cache(maxsize=None)
def beamsplitter_unitary(n_modes: int, cutoff: int, i: int, j: int,
                         angle: float = BS_ANGLE) -> np.ndarray:
    """``exp[i angle (a_i^+ a_j + a_j^+ a_i)]`` on the truncated space.

    Number conserving, so the truncation is exact.
    """
    _check_modes(n_modes, i, j)
    if i == j:
        raise ParameterDomainError("beamsplitter needs two distinct modes")
    ai = _annihilator(n_modes, cutoff, i)
    aj = _annihilator(n_modes, cutoff, j)
    gen = ai.T @ aj + aj.T @ ai
    U = expm(1j * angle * gen)
    U.setflags(write=False)
    return U


def _unit_phase(phase: float) -> complex:
    """``e^{i phase}``, exact for multiples of pi/2."""
    q = phase / (0.5 * math.pi)
    if q == round(q):
        return (1, 1j, -1, -1j)[int(round(q)) % 4]
    return complex(np.exp(1j * phase))


def nonlinear_phase_operator(n_modes: int, cutoff: int, i: int, phase: float = math.pi,
                             amp: float = 1.0) -> np.ndarray:
    """Diagonal operator multiplying any state with two photons in mode ``i``.

    ``amp < 1`` models loss of the two-photon branch (not unitary).
    """
    _check_modes(n_modes, i)
    d = np.array([amp * _unit_phase(phase) if s[i] == 2 else 1.0
                  for s in fock_basis(n_modes, cutoff)], dtype=complex)
    return np.diag(d)


def apply_beamsplitter(reg: FockRegister, i: int, j: int, inverse: bool = False) -> FockRegister:
    U = beamsplitter_unitary(reg.n_modes, reg.cutoff, i, j)
    return reg.evolve(U.conj().T if inverse else U)


def apply_nonlinear_phase(reg: FockRegister, i: int, phase: float = math.pi,
                          amp: float = 1.0) -> FockRegister:
    return reg.evolve(nonlinear_phase_operator(reg.n_modes, reg.cutoff, i, phase, amp))


def gate_operator(phase: float = math.pi, amp: float = 1.0, shifters: bool = True,
                  cutoff: int = 2) -> np.ndarray:
    """Full 4-mode operator: BS(1,2), shifters on rails 1 and 2, inverse BS."""
    U = beamsplitter_unitary(4, cutoff, *RAILS)
    S = np.eye(U.shape[0], dtype=complex)
    if shifters:
        for m in RAILS:
            S = nonlinear_phase_operator(4, cutoff, m, phase, amp) @ S
    return U.conj().T @ S @ U


LOGICAL = {0: (0, 1), 1: (1, 0)}


def logical_states() -> list:
    """Occupation tuples of ``|q1 q2>_L`` in the order 00, 01, 10, 11."""
    return [LOGICAL[q1] + LOGICAL[q2] for q1 in (0, 1) for q2 in (0, 1)]


def logical_block(G: np.ndarray, cutoff: int = 2) -> tuple[np.ndarray, float]:
    """4x4 logical action and the worst-case norm leaving the dual-rail subspace."""
    basis = fock_basis(4, cutoff)
    idx = [basis.index(s) for s in logical_states()]
    cols = G[:, idx]
    M = cols[idx, :]
    leak = float(np.max(np.linalg.norm(cols, axis=0) ** 2 - np.linalg.norm(M, axis=0) ** 2))
    return M, max(leak, 0.0)


def _in_dual_rail(reg: FockRegister) -> bool:
    basis = reg.basis
    keep = {basis.index(s) for s in logical_states()}
    other = [k for k in range(len(basis)) if k not in keep]
    return np.linalg.norm(reg.amplitudes[other]) < 1e-12


def two_photon_phase_gate(reg: FockRegister, phase: float = math.pi, amp: float = 1.0,
                          shifters: bool = True) -> FockRegister:
    """Apply the beamsplitter / phase-shifter / inverse-beamsplitter sequence."""
    if reg.n_modes != 4 or not _in_dual_rail(reg):
        raise ParameterDomainError("register must hold two dual-rail qubits in modes 0-3")
    reg = apply_beamsplitter(reg, *RAILS)
    if shifters:
        for m in RAILS:
            reg = apply_nonlinear_phase(reg, m, phase, amp)
    return apply_beamsplitter(reg, *RAILS, inverse=True)


@dataclass(frozen=True)
class LocalPhaseForm:
    """``M = e^{ic} diag(1, e^{ib}, e^{ia}, e^{i(a+b+phi)})`` plus residual.

    ``distance`` is the max-norm deviation from that form with
    ``phi = pi`` (a CZ core).
    """

    a: float
    b: float
    c: float
    phi: float
    distance: float


def local_phase_normal_form(M: np.ndarray) -> LocalPhaseForm:
    """Strip single-qubit Z phases and a global phase from a 4x4 logical map."""
    M = np.asarray(M)
    c = float(np.angle(M[0, 0]))
    b = float(np.angle(M[1, 1] / M[0, 0]))
    a = float(np.angle(M[2, 2] / M[0, 0]))
    phi = float(np.angle(M[3, 3] / M[0, 0] * np.exp(-1j * (a + b))))
    ref = np.exp(1j * c) * np.diag([1, np.exp(1j * b), np.exp(1j * a), -np.exp(1j * (a + b))])
    return LocalPhaseForm(a, b, c, phi, float(np.max(np.abs(M - ref))))


@dataclass(frozen=True)
class GateFidelity:
    """Process fidelity (trace overlap) and worst-case pure-state fidelity."""

    process: float
    worst_case: float
    leakage: float


def _hull_distance_sq(points) -> float:
    """Squared distance from 0 to the convex hull of complex points."""
    pts = np.asarray(points, complex)
    for i, j, k in itertools.combinations(range(pts.size), 3):
        p, q, r = pts[i], pts[j], pts[k]
        area = ((q - p).conjugate() * (r - p)).imag
        if abs(area) < 1e-15:
            continue
        s1 = ((q - p).conjugate() * (0 - p)).imag / area
        s2 = ((0 - p).conjugate() * (r - p)).imag / area
        # origin = p + s2 (q - p) + s1 (r - p) in barycentric terms
        if s1 >= -1e-15 and s2 >= -1e-15 and s1 + s2 <= 1 + 1e-15:
            return 0.0
    best = float(np.min(np.abs(pts) ** 2))
    for i, j in itertools.combinations(range(pts.size), 2):
        p, q = pts[i], pts[j]
        d = q - p
        if abs(d) == 0:
            continue
        t = min(1.0, max(0.0, -(p.conjugate() * d).real / abs(d) ** 2))
        best = min(best, abs(p + t * d) ** 2)
    return best


def gate_fidelity(phase: float = math.pi, amp: float = 1.0) -> GateFidelity:
    """Fidelity of the lossy composed gate against its ideal counterpart.

    Parameters
    ----------
    phase : float
        Phase imparted on the two-photon component by each shifter.
    amp : float
        Amplitude surviving on the two-photon branch, ``sqrt(1 - L)``.
    """
    ideal, _ = logical_block(gate_operator())
    M, leak = logical_block(gate_operator(phase, amp))
    overlap = ideal.conj().T @ M
    process = float(abs(np.trace(overlap)) ** 2 / 16.0)
    worst = _hull_distance_sq(np.diag(overlap)) if np.allclose(
        overlap, np.diag(np.diag(overlap)), atol=1e-12) else float("nan")
    return GateFidelity(process, worst, leak)
