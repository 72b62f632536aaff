"""Run configuration: INI ingestion, validation and canonical hashing.

Energies and rates are in GHz unless the key carries a ``_MHz`` suffix.
Every section is optional except ``[circuit]``; unknown sections or keys
are errors. All problems found are reported together in one
:class:`~cqedgate.errors.ConfigError`.
"""
from __future__ import annotations

import configparser
import hashlib
import json
import math
import os
import warnings
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .circuit import CircuitParams, FluxRegimeWarning, validate_circuit
from .errors import ConfigError
from .spectrum import BasisSpec, validate_basis

_BOOL = {"true": True, "yes": True, "on": True, "1": True,
         "false": False, "no": False, "off": False, "0": False}


@dataclass(frozen=True)
class ProtocolConfig:
    kappa_GHz: float | None = None
    gamma_GHz: float | None = None
    epsilon_sq: float = 0.01
    delta_i_MHz: float = -536.0
    delta_m_MHz: float | None = None
    n_phase: int = 0
    on_off_min: float | None = 10.0
    phase_matched: bool = True

    @property
    def auto_delta_m(self) -> bool:
        return self.delta_m_MHz is None


@dataclass(frozen=True)
class SweepConfig:
    phi_x_min: float = 1.5
    phi_x_max: float = 2.3
    n_phi_x: int = 17
    phi_x_prime_min: float = 0.0
    phi_x_prime_max: float = 0.8
    n_phi_x_prime: int = 5
    delta_on_MHz: float = -41.0
    delta_off_MHz: float = -536.0
    loss_delta_min_MHz: float = -536.0
    loss_delta_max_MHz: float = -41.0
    loss_points: int = 101


@dataclass(frozen=True)
class GateConfig:
    shifters: bool = True
    from_protocol: bool = True


@dataclass(frozen=True)
class RunSection:
    point: str = "on"
    phi_x: float | None = None
    phi_x_prime: float | None = None
    seed: int = 0
    workers: int = 0
    out: str = "out"


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration for every subcommand."""

    circuit: CircuitParams
    basis: BasisSpec = field(default_factory=BasisSpec)
    protocol: ProtocolConfig = field(default_factory=ProtocolConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    gate: GateConfig = field(default_factory=GateConfig)
    run: RunSection = field(default_factory=RunSection)

    @property
    def kappa(self) -> float:
        k = self.protocol.kappa_GHz
        return self.circuit.kappa if k is None else k

    @property
    def gamma(self) -> float:
        g = self.protocol.gamma_GHz
        return self.circuit.gamma if g is None else g

    @property
    def workers(self) -> int:
        return self.run.workers or (os.cpu_count() or 1)

    def canonical(self) -> dict:
        """Plain-dict form; loading it back yields an equal config.

        ``run.out`` and ``run.workers`` are excluded as they cannot change
        any numerical output.
        """
        d = {name: asdict(getattr(self, name)) for name in
             ("basis", "protocol", "sweep", "gate", "run")}
        d["circuit"] = {k: getattr(self.circuit, f) for k, f in CIRCUIT_KEYS.items()}
        d["run"].pop("out")
        d["run"].pop("workers")
        return d

    def sha256(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


# config key -> CircuitParams field
CIRCUIT_KEYS = {
    "omega_C_GHz": "omega_C",
    "omega_J_GHz": "omega_J",
    "omega_L_GHz": "omega_L",
    "omega_r_GHz": "omega_r_target",
    "Z_ohm": "Z",
    "chi": "chi",
    "kappa_GHz": "kappa",
    "gamma_GHz": "gamma",
}

_SECTIONS = {
    "circuit": CircuitParams,
    "basis": BasisSpec,
    "protocol": ProtocolConfig,
    "sweep": SweepConfig,
    "gate": GateConfig,
    "run": RunSection,
}

_OPTIONAL = {"auto", "none", ""}


def _convert(raw, ftype, default):
    """Parse ``raw`` according to a dataclass annotation string."""
    t = str(ftype)
    if isinstance(raw, str):
        s = raw.strip()
        if "None" in t and s.lower() in _OPTIONAL:
            return None
        if t.startswith("bool"):
            if s.lower() not in _BOOL:
                raise ValueError(f"expected a boolean, got {raw!r}")
            return _BOOL[s.lower()]
        if t.startswith("int"):
            return int(s)
        if t.startswith("float"):
            v = float(s)
            if not math.isfinite(v):
                raise ValueError(f"expected a finite number, got {raw!r}")
            return v
        return s
    # values coming from JSON
    if raw is None:
        if "None" in t:
            return None
        raise ValueError("value may not be empty")
    if t.startswith("bool"):
        if not isinstance(raw, bool):
            raise ValueError(f"expected a boolean, got {raw!r}")
        return raw
    if t.startswith("int"):
        if isinstance(raw, bool) or int(raw) != raw:
            raise ValueError(f"expected an integer, got {raw!r}")
        return int(raw)
    if t.startswith("float"):
        return float(raw)
    return str(raw)


def _build_section(name, cls, values: dict, errors: list):
    known = {f.name: f for f in fields(cls)}
    keymap = CIRCUIT_KEYS if cls is CircuitParams else {k: k for k in known}
    kw = {}
    for key, raw in values.items():
        if key not in keymap:
            errors.append(f"[{name}] unknown key {key!r}")
            continue
        fld = known[keymap[key]]
        try:
            kw[fld.name] = _convert(raw, fld.type, fld.default)
        except (TypeError, ValueError) as exc:
            errors.append(f"[{name}] {key}: {exc}")
    return kw


def _validate_sections(kw: dict, errors: list):
    """Run module validators on the parsed values without raising."""
    circ = None
    ck = kw.get("circuit", {})
    missing = [k for k, f in CIRCUIT_KEYS.items()
               if f not in ck and f not in ("kappa", "gamma")]
    if missing:
        errors.append(f"[circuit] missing keys: {', '.join(missing)}")
    else:
        class _Shadow:
            pass

        sh = _Shadow()
        for f in fields(CircuitParams):
            setattr(sh, f.name, ck.get(f.name, f.default))
        errs = validate_circuit(sh)
        rename = {f: k for k, f in CIRCUIT_KEYS.items()}
        for e in errs:
            head, _, rest = e.partition(" ")
            errors.append(f"[circuit] {rename.get(head, head)} {rest}")
        if not errs:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", FluxRegimeWarning)
                circ = CircuitParams(**ck)

    basis = BasisSpec(**kw.get("basis", {}))
    errors.extend(f"[basis] {e}" for e in validate_basis(circ, basis))

    pc = ProtocolConfig(**kw.get("protocol", {}))
    for name in ("kappa_GHz", "gamma_GHz"):
        v = getattr(pc, name)
        if v is not None and v < 0:
            errors.append(f"[protocol] {name} must be >= 0")
    if not 0 < pc.epsilon_sq <= 0.1:
        errors.append("[protocol] epsilon_sq must lie in (0, 0.1]")
    if pc.delta_i_MHz == 0:
        errors.append("[protocol] delta_i_MHz must be non-zero")
    if pc.delta_m_MHz is not None:
        if pc.delta_m_MHz == 0 or abs(pc.delta_m_MHz) >= abs(pc.delta_i_MHz):
            errors.append("[protocol] require 0 < |delta_m_MHz| < |delta_i_MHz|")
        elif math.copysign(1, pc.delta_m_MHz) != math.copysign(1, pc.delta_i_MHz):
            errors.append("[protocol] delta_m_MHz and delta_i_MHz must share a sign")
    if pc.n_phase < 0:
        errors.append("[protocol] n_phase must be >= 0")
    if pc.on_off_min is not None and pc.on_off_min < 1:
        errors.append("[protocol] on_off_min must be >= 1")

    sw = SweepConfig(**kw.get("sweep", {}))
    if sw.n_phi_x < 1 or sw.n_phi_x_prime < 1:
        errors.append("[sweep] grid sizes must be >= 1")
    if sw.phi_x_max < sw.phi_x_min or sw.phi_x_prime_max < sw.phi_x_prime_min:
        errors.append("[sweep] range maxima must not be below minima")
    if sw.loss_points < 2:
        errors.append("[sweep] loss_points must be >= 2")
    if not sw.loss_delta_min_MHz < sw.loss_delta_max_MHz:
        errors.append("[sweep] loss_delta_min_MHz must be below loss_delta_max_MHz")
    elif sw.loss_delta_min_MHz * sw.loss_delta_max_MHz <= 0:
        errors.append("[sweep] the loss-curve detuning range must not contain zero")

    gc = GateConfig(**kw.get("gate", {}))
    rs = RunSection(**kw.get("run", {}))
    if rs.point not in ("on", "off", "custom"):
        errors.append("[run] point must be one of on, off, custom")
    elif rs.point == "custom" and (rs.phi_x is None or rs.phi_x_prime is None):
        errors.append("[run] point = custom needs phi_x and phi_x_prime")
    if rs.workers < 0:
        errors.append("[run] workers must be >= 0")
    return circ, basis, pc, sw, gc, rs


def config_from_mapping(data: dict) -> RunConfig:
    """Build a :class:`RunConfig` from ``{section: {key: value}}``."""
    errors = []
    kw = {}
    for name, values in data.items():
        if name not in _SECTIONS:
            errors.append(f"unknown section [{name}]")
            continue
        kw[name] = _build_section(name, _SECTIONS[name], dict(values), errors)
    if "circuit" not in data:
        errors.append("missing section [circuit]")
    parts = _validate_sections(kw, errors)
    if errors:
        raise ConfigError(errors)
    circ, basis, pc, sw, gc, rs = parts
    return RunConfig(circ, basis, pc, sw, gc, rs)


def parse_config(text: str) -> RunConfig:
    """Parse INI text, or the JSON ``config`` block of an emitted report."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("JSON config must be an object")
        return config_from_mapping(doc.get("config", doc))
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return config_from_mapping({s: dict(cp[s]) for s in cp.sections()})


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def reference_config_path() -> Path:
    """Location of the bundled reference configuration."""
    return Path(__file__).with_name("data") / "paper.cfg"
