"""Experiment execution and file output for the command-line driver."""

from __future__ import annotations

import csv
import json
import logging
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .classical import SemiclassicalTrajectory, energy, integrate, symplectic_invariant
from .config import ExperimentConfig
from .hamiltonian import partials_along
from .minimality import MinimalityReport, classify, uncertainty_product
from .oracle import PropagatorConfig, phase_aligned_distance, propagate
from .riccati import integrate_riccati, q_from_trajectory, riccati_residual
from .tcs_state import analytic_moments, auto_grid, grid_moments, tcs_series, write_snapshot_csv

log = logging.getLogger(__name__)

SERIES_COLUMNS = (
    "t", "x", "p", "action", "re_w", "im_w", "re_z", "im_z", "q1", "q2",
    "var_x", "var_p", "product", "symplectic_residual",
    "eq6_residual", "eq7_residual", "eq14_residual",
)

_num = {"type": "number"}
_num_array = {"type": "array", "items": _num}

SUMMARY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["metadata", "experiment", "max_residuals", "product_at_t0", "minimality"],
    "properties": {
        "metadata": {
            "type": "object",
            "required": ["timestamp", "package", "version", "config"],
            "properties": {
                "timestamp": {"type": "string"},
                "package": {"const": "tcstates"},
                "version": {"type": "string"},
                "config": {"type": "object"},
            },
        },
        "experiment": {"enum": ["trajectory", "riccati", "minimality", "moments", "oracle_compare"]},
        "n_samples": {"type": "integer", "minimum": 2},
        "product_at_t0": _num,
        "max_residuals": {
            "type": "object",
            "required": ["symplectic", "eq6", "eq7", "eq14", "product_deviation", "energy_drift"],
            "additionalProperties": _num,
        },
        "minimality": {
            "type": "object",
            "required": ["times", "re_b_zero", "re_b_residual", "product_trace", "eq6_residual",
                         "eq7_residual", "eq14_residual", "verdict"],
            "properties": {
                "times": _num_array,
                "re_b_zero": {"type": "boolean"},
                "re_b_residual": _num,
                "product_trace": _num_array,
                "eq6_residual": _num_array,
                "eq7_residual": _num_array,
                "eq14_residual": _num_array,
                "eq11_residual": _num_array,
                "verdict": {"enum": ["minimal_for_all_t", "minimal_at_t0_only", "not_minimal"]},
                "q1_zero": {"type": "boolean"},
                "q1_departure_time": {"type": ["number", "null"]},
            },
        },
        "riccati": {
            "type": "object",
            "required": ["max_path_difference", "max_riccati_residual", "file"],
        },
        "moments": {"type": "object", "required": ["snapshots", "max_abs_error"]},
        "oracle_compare": {"type": "object", "required": ["snapshots", "max_phase_aligned_distance"]},
    },
}


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def write_series_csv(path, traj: SemiclassicalTrajectory, q, var_x, var_p, report: MinimalityReport,
                     symplectic_res) -> Path:
    path = Path(path)
    cols = (
        traj.times, traj.x, traj.p, traj.action, traj.w.real, traj.w.imag, traj.z.real, traj.z.imag,
        q.real, q.imag, var_x, var_p, report.product_trace, symplectic_res,
        report.eq6_residual, report.eq7_residual, report.eq14_residual,
    )
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SERIES_COLUMNS)
        for row in zip(*cols):
            writer.writerow([_fmt(v) for v in row])
    return path


def _snapshot_indices(cfg: ExperimentConfig, traj: SemiclassicalTrajectory) -> list[int]:
    times = cfg.snapshot_times
    if times is None:
        times = tuple(cfg.t_final * k / 4.0 for k in range(5))
    return sorted({traj.index_of(t) for t in times})


def _moments_block(cfg, traj, grid, out_dir: Path) -> dict:
    snaps = []
    worst = 0.0
    for i, psi in tcs_series(cfg.params, traj, grid, _snapshot_indices(cfg, traj)):
        num = grid_moments(psi, cfg.params.hbar)
        ana = analytic_moments(traj.record(i), traj.b, cfg.params.hbar)
        err = max(abs(a - b) for a, b in zip(num, ana))
        worst = max(worst, err)
        name = f"psi_tcs_{i:07d}.csv"
        write_snapshot_csv(psi, out_dir / name)
        snaps.append({
            "index": i, "t": float(traj.times[i]), "file": name, "norm2": psi.norm2(),
            "grid_moments": list(num), "analytic_moments": list(ana), "max_abs_error": err,
        })
    return {"grid": _grid_dict(grid), "snapshots": snaps, "max_abs_error": worst}


def _oracle_block(cfg, traj, grid, out_dir: Path) -> dict:
    pcfg = PropagatorConfig(cfg.dt, grid, cfg.params, cfg.potential)
    pcfg.validate()
    indices = _snapshot_indices(cfg, traj)
    tcs = dict(tcs_series(cfg.params, traj, grid, sorted(set(indices) | {0})))
    psi = tcs[0]
    t_prev = 0.0
    snaps = []
    worst = 0.0
    for i in indices:
        t = float(traj.times[i])
        psi = propagate(psi, pcfg, t - t_prev)
        t_prev = t
        dist = phase_aligned_distance(psi, tcs[i])
        worst = max(worst, dist)
        tcs_name, orc_name = f"psi_tcs_{i:07d}.csv", f"psi_oracle_{i:07d}.csv"
        write_snapshot_csv(tcs[i], out_dir / tcs_name)
        write_snapshot_csv(psi, out_dir / orc_name)
        num = grid_moments(psi, cfg.params.hbar)
        ana = analytic_moments(traj.record(i), traj.b, cfg.params.hbar)
        snaps.append({
            "index": i, "t": t, "tcs_file": tcs_name, "oracle_file": orc_name,
            "phase_aligned_distance": dist, "oracle_norm2": psi.norm2(),
            "oracle_moments": list(num), "analytic_moments": list(ana),
            "moment_max_abs_error": max(abs(a - b) for a, b in zip(num, ana)),
        })
    return {"grid": _grid_dict(grid), "snapshots": snaps, "max_phase_aligned_distance": worst}


def _riccati_block(cfg, traj, quotient, partials, out_dir: Path) -> dict:
    direct = integrate_riccati(cfg.potential, cfg.params, traj, traj.b)
    res = riccati_residual(quotient, partials)
    name = "riccati.csv"
    with (out_dir / name).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("t", "q1", "q2", "q1_direct", "q2_direct", "riccati_residual"))
        for row in zip(traj.times, quotient.q.real, quotient.q.imag, direct.q.real, direct.q.imag, res):
            writer.writerow([_fmt(v) for v in row])
    return {
        "file": name,
        "max_path_difference": float(np.max(np.abs(direct.q - quotient.q))),
        "max_riccati_residual": float(np.max(res)),
        "min_q2": float(np.min(quotient.q.imag)),
    }


def _grid_dict(grid) -> dict:
    return {"x_min": grid.x_min, "x_max": grid.x_max, "n": grid.n}


def run_experiment(cfg: ExperimentConfig, out_dir, timestamp: str | None = None) -> dict:
    """Run ``cfg`` and write series.csv, summary.json and any extra files into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec, params, b = cfg.potential, cfg.params, cfg.init.b
    log.info("integrating %s trajectory to t=%g (dt=%g)", cfg.potential.kind, cfg.t_final, cfg.dt)
    traj = integrate(spec, params, cfg.init, cfg.t_final, cfg.dt)
    quotient = q_from_trajectory(traj)
    partials = partials_along(spec, params, traj)
    report = classify(spec, params, cfg.init, traj, quotient, cfg.tolerances)
    var_x = 0.5 * params.hbar * np.abs(traj.z) ** 2 / b.imag
    var_p = 0.5 * params.hbar * np.abs(traj.w) ** 2 / b.imag
    symp = np.abs(symplectic_invariant(traj.w, traj.z) - 2j * b.imag)
    write_series_csv(out_dir / "series.csv", traj, quotient.q, var_x, var_p, report, symp)

    e = energy(spec, params, traj)
    floor = 0.25 * params.hbar**2
    config_echo = {k: v for k, v in cfg.raw.items() if k != "output_dir"}
    summary = {
        "metadata": {
            "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "package": "tcstates",
            "version": __version__,
            "config": config_echo,
        },
        "experiment": cfg.experiment,
        "n_samples": len(traj),
        "product_at_t0": float(uncertainty_product(b, 1.0, b, params.hbar)),
        "max_residuals": {
            "symplectic": float(np.max(symp)),
            "eq6": float(np.max(report.eq6_residual)),
            "eq7": float(np.max(report.eq7_residual)),
            "eq14": float(np.max(report.eq14_residual)),
            "eq11": float(np.max(report.eq11_residual)),
            "product_deviation": float(np.max(np.abs(report.product_trace - floor))),
            "energy_drift": float(np.max(np.abs(e - e[0]))),
        },
        "minimality": report.to_dict(),
    }
    if cfg.experiment == "riccati":
        summary["riccati"] = _riccati_block(cfg, traj, quotient, partials, out_dir)
    elif cfg.experiment in ("moments", "oracle_compare"):
        grid = cfg.grid or auto_grid(traj, params.hbar)
        if cfg.experiment == "moments":
            summary["moments"] = _moments_block(cfg, traj, grid, out_dir)
        else:
            summary["oracle_compare"] = _oracle_block(cfg, traj, grid, out_dir)

    with (out_dir / "summary.json").open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary
