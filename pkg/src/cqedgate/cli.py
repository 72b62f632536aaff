"""Command-line entry point: ``cqedgate {model,sweep,protocol,gate}``.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 infeasible protocol design.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import warnings
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from . import __version__
from .circuit import FluxBias, FluxRegimeWarning
from .config import RunConfig, load_config, reference_config_path
from .errors import CQEDError, ConfigError, InfeasibleDesignError
from .gate import gate_fidelity, gate_operator, local_phase_normal_form, logical_block
from .linear import analytic_model
from .protocol import (HoldModel, LossParams, design_protocol, evolve_oracle,
                       loss_curves, optimal_hold_detuning)
from .spectrum import SWEEP_COLUMNS, avoided_crossing, flux_sweep

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_INFEASIBLE = 0, 2, 3, 4
TOOL = f"cqedgate {__version__}"
CONTOUR_SAMPLES = 161

log = logging.getLogger("cqedgate")


# ---------------------------------------------------------------- emitters

def _plain(x):
    """Convert numpy scalars/arrays and non-finite floats for JSON."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


class Emitter:
    """Single writer for all artifacts of one run; adds provenance headers."""

    def __init__(self, cfg: RunConfig, out: Path):
        self.cfg = cfg
        self.out = Path(out)
        self.hash = cfg.sha256()
        self.written = []

    def _path(self, name):
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / name
        self.written.append(path)
        return path

    def json(self, name, payload: dict):
        doc = dict(provenance=dict(tool=TOOL, config_sha256=self.hash),
                   config=self.cfg.canonical())
        doc.update(payload)
        text = json.dumps(_plain(doc), indent=2, sort_keys=True) + "\n"
        self._path(name).write_text(text)
        return text

    def csv(self, name, columns, rows):
        path = self._path(name)
        with path.open("w", newline="") as fh:
            fh.write(f"# tool={TOOL} config_sha256={self.hash}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                w.writerow([_fmt(row[c]) for c in columns])


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    return "%.17g" % float(v)


# ------------------------------------------------------- operating points

@dataclass(frozen=True)
class OperatingPoint:
    phi_x: float
    phi_x_prime: float
    delta: float
    g2: float
    g1: float
    omega: float


def _delta_at(p, x, y):
    try:
        return analytic_model(p, FluxBias(x, y)).delta
    except CQEDError:
        return math.nan


def contour_point(p, phi_x_prime, target, lo, hi):
    """Point on the analytic ``delta = target`` contour at fixed ``phi_x_prime``.

    Returns ``None`` when the contour does not cross ``[lo, hi]``.
    """
    xs = np.linspace(lo, hi, CONTOUR_SAMPLES)
    ds = np.array([_delta_at(p, x, phi_x_prime) for x in xs]) - target
    ok = np.isfinite(ds)
    idx = [i for i in range(xs.size - 1)
           if ok[i] and ok[i + 1] and np.sign(ds[i]) != np.sign(ds[i + 1])]
    if not idx:
        return None
    i = idx[0]
    x = brentq(lambda v: _delta_at(p, v, phi_x_prime) - target, xs[i], xs[i + 1], xtol=1e-13)
    m = analytic_model(p, FluxBias(x, phi_x_prime))
    return OperatingPoint(float(x), float(phi_x_prime), m.delta, m.g2, m.g1, m.omega)


def operating_points(cfg: RunConfig):
    """On point (max ``|g2|`` on the ``delta_on`` contour) and matching off point."""
    sw = cfg.sweep
    p = cfg.circuit
    best = None
    for y in np.linspace(sw.phi_x_prime_min, sw.phi_x_prime_max, sw.n_phi_x_prime):
        pt = contour_point(p, float(y), sw.delta_on_MHz * 1e-3, sw.phi_x_min, sw.phi_x_max)
        if pt is not None and (best is None or abs(pt.g2) > abs(best.g2)):
            best = pt
    if best is None:
        raise InfeasibleDesignError(
            f"delta = {sw.delta_on_MHz} MHz is not reached inside the sweep window",
            binding_constraint="on_point")
    off = contour_point(p, best.phi_x_prime, sw.delta_off_MHz * 1e-3, sw.phi_x_min,
                        sw.phi_x_max)
    if off is None:
        raise InfeasibleDesignError(
            f"delta = {sw.delta_off_MHz} MHz is not reached inside the sweep window",
            binding_constraint="off_point")
    return best, off


def _run_bias(cfg: RunConfig) -> FluxBias:
    if cfg.run.point == "custom":
        return FluxBias(cfg.run.phi_x, cfg.run.phi_x_prime)
    on, off = operating_points(cfg)
    pt = on if cfg.run.point == "on" else off
    return FluxBias(pt.phi_x, pt.phi_x_prime)


# ------------------------------------------------------------- commands

def cmd_model(cfg: RunConfig, em: Emitter, workers: int = 1) -> dict:
    b = _run_bias(cfg)
    m = analytic_model(cfg.circuit, b)
    payload = dict(flux=dict(phi_x=b.phi_x, phi_x_prime=b.phi_x_prime, point=cfg.run.point),
                   model=m.as_dict())
    em.json("model.json", payload)
    return payload


def sweep_grid(cfg: RunConfig):
    sw = cfg.sweep
    xs = np.linspace(sw.phi_x_min, sw.phi_x_max, sw.n_phi_x)
    ys = np.linspace(sw.phi_x_prime_min, sw.phi_x_prime_max, sw.n_phi_x_prime)
    return [FluxBias(float(x), float(y)) for y in ys for x in xs]


def cmd_sweep(cfg: RunConfig, em: Emitter, workers: int = 1) -> dict:
    grid = sweep_grid(cfg)
    log.info("sweeping %d flux points on %d workers", len(grid), workers)
    rows = flux_sweep(cfg.circuit, cfg.basis, grid, workers=workers)
    em.csv("sweep.csv", SWEEP_COLUMNS, rows)
    payload = dict(on_point=None, off_point=None, crossing=None, n_points=len(rows),
                   n_failed=sum(1 for r in rows if not r["converged"]))
    try:
        on, off = operating_points(cfg)
    except InfeasibleDesignError as exc:
        # the grid itself is still a valid product
        log.warning("operating points not marked: %s", exc)
        payload["points_error"] = str(exc)
        on = None
    if on is not None:
        payload.update(on_point=asdict(on), off_point=asdict(off))
        try:
            cr = avoided_crossing(cfg.circuit, cfg.basis, on.phi_x_prime, on.phi_x)
            payload["crossing"] = asdict(cr)
        except CQEDError as exc:
            log.warning("no avoided crossing near the on point: %s", exc)
    em.json("points.json", payload)
    return payload


def _loss_params(cfg: RunConfig, delta_m=None) -> LossParams:
    pc = cfg.protocol
    di = pc.delta_i_MHz * 1e-3
    if delta_m is None:
        delta_m = pc.delta_m_MHz * 1e-3 if pc.delta_m_MHz is not None else 0.5 * di
    return LossParams(cfg.kappa, cfg.gamma, math.sqrt(pc.epsilon_sq), di, delta_m,
                      pc.n_phase)


def run_protocol(cfg: RunConfig):
    """Design the protocol at the on point and check it with the oracle."""
    on, _ = operating_points(cfg)
    model = HoldModel(on.omega, on.g1, analytic_model(
        cfg.circuit, FluxBias(on.phi_x, on.phi_x_prime)).eta2_prime)
    lp = _loss_params(cfg)
    pc = cfg.protocol
    rep = design_protocol(model, lp, on_off_min=pc.on_off_min, auto_delta_m=pc.auto_delta_m,
                          phase_matched=pc.phase_matched)
    lp_used = replace(lp, delta_m=rep.delta_m)
    orc = evolve_oracle(model, rep, lp_used)
    return on, model, lp, rep, orc


def cmd_protocol(cfg: RunConfig, em: Emitter, workers: int = 1) -> dict:
    on, model, lp, rep, orc = run_protocol(cfg)
    sw = cfg.sweep
    grid = np.linspace(sw.loss_delta_min_MHz, sw.loss_delta_max_MHz, sw.loss_points) * 1e-3
    curves = loss_curves(lp, on.omega, on.g1, on.g2, grid)
    sign = math.copysign(1.0, grid[0])
    try:
        d_star = optimal_hold_detuning(lp, on.omega, on.g1, on.g2, sign=sign)
    except CQEDError:
        d_star = math.nan
    rows = [dict(delta_m_MHz=1e3 * d, L_d=curves["L_d"][i], L_s=curves["L_s"][i],
                 L_s_no_kappa=curves["L_s_no_kappa"][i], tau_h_s=curves["tau_h"][i],
                 tau_s_s=curves["tau_s"][i]) for i, d in enumerate(grid)]
    em.csv("losses.csv", list(rows[0]), rows)
    sched = rep.schedule
    srows = [dict(zip(sched, vals)) for vals in zip(*sched.values())]
    em.csv("schedule.csv", list(sched), srows)
    target = (2 * rep.n_phase + 1) * math.pi
    payload = dict(
        on_point=asdict(on), report=rep.as_dict(),
        oracle=dict(asdict(orc), phase_error=orc.phase_num - target),
        optimal_delta_m=d_star)
    em.json("protocol.json", payload)
    return payload


def cmd_gate(cfg: RunConfig, em: Emitter, workers: int = 1) -> dict:
    G = gate_operator(shifters=cfg.gate.shifters)
    M, leak = logical_block(G)
    nf = local_phase_normal_form(M)
    rows = [dict(row=i, col=j, re=M[i, j].real, im=M[i, j].imag)
            for i in range(4) for j in range(4)]
    em.csv("gate_logical.csv", ["row", "col", "re", "im"], rows)
    ideal = gate_fidelity()
    off = gate_fidelity(phase=0.0)
    payload = dict(
        shifters=cfg.gate.shifters, leakage=leak, normal_form=asdict(nf),
        cz_equivalent=bool(nf.distance < 1e-10 and leak < 1e-12),
        identity=bool(np.max(np.abs(M - np.eye(4))) < 1e-12),
        fidelity_ideal=asdict(ideal), fidelity_shifter_off=asdict(off))
    if cfg.gate.from_protocol:
        _, _, _, rep, orc = run_protocol(cfg)
        amp = math.sqrt(max(0.0, 1.0 - rep.L_total))
        fid = gate_fidelity(phase=orc.phase_num, amp=amp)
        payload["lossy"] = dict(L_total=rep.L_total, phase=orc.phase_num,
                                phase_error=orc.phase_num - (2 * rep.n_phase + 1) * math.pi,
                                amp=amp, fidelity=asdict(fid))
    em.json("gate.json", payload)
    return payload


COMMANDS = dict(model=cmd_model, sweep=cmd_sweep, protocol=cmd_protocol, gate=cmd_gate)


# ------------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cqedgate",
                                 description="Two-photon phase gate design toolkit.")
    ap.add_argument("--version", action="version", version=TOOL)
    sub = ap.add_subparsers(dest="command", required=True)
    helps = dict(model="analytic model at the configured flux point",
                 sweep="flux sweep with exact diagonalization and on/off points",
                 protocol="protocol design, schedule and loss curves",
                 gate="dual-rail gate logical action and fidelity")
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", default=None,
                       help="INI config or emitted JSON report (default: bundled paper.cfg)")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--workers", type=int, default=None, help="worker processes")
        p.add_argument("--verbose", "-v", action="count", default=0)
    return ap


def _error_body(kind, exc, **extra):
    body = dict(error=kind, message=str(exc), tool=TOOL)
    body.update(extra)
    return body


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
                        format="%(levelname)s %(name)s: %(message)s")
    if not args.verbose:
        warnings.simplefilter("ignore", FluxRegimeWarning)
    out = None
    try:
        cfg = load_config(args.config or reference_config_path())
        out = Path(args.out or cfg.run.out)
        workers = args.workers if args.workers is not None else cfg.workers
        if workers < 1:
            raise ConfigError(f"--workers must be >= 1 (got {workers})")
        em = Emitter(cfg, out)
        COMMANDS[args.command](cfg, em, workers=workers)
        for path in em.written:
            log.info("wrote %s", path)
        return EXIT_OK
    except ConfigError as exc:
        print(json.dumps(_error_body("config", exc, errors=exc.errors), indent=2),
              file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleDesignError as exc:
        body = _error_body("infeasible", exc, binding_constraint=exc.binding_constraint)
        text = json.dumps(body, indent=2, sort_keys=True)
        print(text)
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            (out / "error.json").write_text(text + "\n")
        return EXIT_INFEASIBLE
    except (CQEDError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(json.dumps(_error_body("numerical", exc, type=type(exc).__name__), indent=2),
              file=sys.stderr)
        return EXIT_NUMERICAL
