"""Run driver: time loop, sampling, snapshots, resume and blow-up handling."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .config import RunConfig
from .diagnostics import (COLUMNS, DiagnosticsRow, InitialReference, RunAccumulators, compute_row,
                          default_fbc_family, fbc_report, scale_invariants)
from .errors import BlowUpError, CorruptedStateError
from .fields import FlowState, linf_norm
from .initial import grid_from_config, make_initial_condition, manufactured_for
from .io import CsvAppender, load_snapshot, save_snapshot
from .solver import TimeStepper

DIAGNOSTICS_FILE = "diagnostics.csv"
SUMMARY_FILE = "summary.json"
SNAPSHOT_DIR = "snapshots"


@dataclass
class RunResult:
    rows: list[DiagnosticsRow]
    state: FlowState
    status: str  # "ok" or "blowup"
    steps: int
    summary: dict = field(default_factory=dict)
    error: Optional[Exception] = None


@dataclass
class _Progress:
    """Everything beyond the fields that a bit-identical resume needs."""

    steps: int = 0
    sample_index: int = 1
    snapshot_index: int = 1

    def to_dict(self) -> dict:
        return asdict(self)


def make_stepper(cfg: RunConfig) -> TimeStepper:
    forcing = None
    if cfg.ic.kind == "manufactured":
        forcing = manufactured_for(cfg).forcing(grid_from_config(cfg))
    return TimeStepper(cfg.physics.nu, cfg.time.cfl_safety, cfg.time.advection_scheme, forcing)


def _acc_from_dict(d: dict) -> RunAccumulators:
    d = dict(d)
    d["last_rates"] = tuple(d["last_rates"])
    return RunAccumulators(**d)


def _ref_from_dict(d: dict) -> InitialReference:
    return InitialReference(**d)


def run_simulation(cfg: RunConfig, out_dir=None, resume_from=None, write_files: bool = True) -> RunResult:
    """Integrate to ``cfg.time.t_end`` emitting one DiagnosticsRow per sample time.

    Samples fall on integer multiples of ``diag.sample_interval`` and at
    ``t_end``; the step is clipped to land on them exactly.  When resuming,
    rows are emitted only after the snapshot time.
    """
    out = Path(out_dir if out_dir is not None else cfg.output.directory)
    g = grid_from_config(cfg)
    stepper = make_stepper(cfg)
    nu, r0, d0 = cfg.physics.nu, cfg.diag.r0, cfg.diag.delta0
    t_end = cfg.time.t_end
    si, pi = cfg.diag.sample_interval, cfg.output.snapshot_interval

    rows: list[DiagnosticsRow] = []
    if resume_from is None:
        state = make_initial_condition(cfg)
        ref = InitialReference.from_state(state)
        acc = RunAccumulators.start(state, r0)
        prog = _Progress()
        scale0 = scale_invariants(state, r0, cfg.diag.delta_small)
        rows.append(compute_row(state, ref, acc, d0))
    else:
        state, extra = load_snapshot(resume_from, expected_grid=g)
        ref = _ref_from_dict(extra["reference"])
        acc = _acc_from_dict(extra["accumulators"])
        prog = _Progress(**extra["progress"])
        scale0 = extra["scale0"]

    csv = None
    if write_files:
        out.mkdir(parents=True, exist_ok=True)
        csv = CsvAppender(out / DIAGNOSTICS_FILE)
        for row in rows:
            csv.write(row)

    status, error = "ok", None
    guard = np.errstate(over="ignore", invalid="ignore", divide="ignore")
    guard.__enter__()
    try:
        while state.time < t_end:
            next_sample = prog.sample_index * si
            next_snap = prog.snapshot_index * pi if pi > 0 else math.inf
            target = min(next_sample, next_snap, t_end)
            dt = cfg.time.dt if cfg.time.dt > 0 else stepper.cfl_dt(state)
            clip = dt >= target - state.time
            if clip:
                dt = target - state.time
            try:
                new = stepper.step(state, dt)
            except CorruptedStateError as exc:
                raise BlowUpError("stream solve", "velocity", state.time) from exc
            if clip:
                new = replace(new, time=target)
            try:
                acc.advance(new, dt, nu, r0)
            except CorruptedStateError as exc:
                raise BlowUpError("diagnostics", exc.field, new.time) from exc
            state = new
            prog.steps += 1
            sampled = False
            while prog.sample_index * si <= state.time:
                prog.sample_index += 1
                sampled = True
            if sampled or state.time >= t_end:
                try:
                    row = compute_row(state, ref, acc, d0)
                except CorruptedStateError as exc:
                    raise BlowUpError("diagnostics row", exc.field, state.time) from exc
                bad = [c for c, v in zip(COLUMNS, row.values()) if not math.isfinite(v)]
                if bad:
                    raise BlowUpError("diagnostics row", bad[0], state.time)
                rows.append(row)
                if csv is not None:
                    csv.write(row)
            if pi > 0 and prog.snapshot_index * pi <= state.time:
                while prog.snapshot_index * pi <= state.time:
                    prog.snapshot_index += 1
                if write_files:
                    snap_dir = out / SNAPSHOT_DIR
                    snap_dir.mkdir(exist_ok=True)
                    save_snapshot(state, snap_dir / f"snap_{prog.snapshot_index - 1:06d}.bin", extra={
                        "reference": asdict(ref),
                        "accumulators": asdict(acc),
                        "progress": prog.to_dict(),
                        "scale0": scale0 if isinstance(scale0, dict) else asdict(scale0),
                    })
    except BlowUpError as exc:
        status, error = "blowup", exc
    finally:
        guard.__exit__(None, None, None)
        if csv is not None:
            csv.close()

    summary = build_summary(cfg, rows, state, ref, acc, scale0, prog.steps, status, error)
    if write_files:
        (out / SUMMARY_FILE).write_text(json.dumps(summary, indent=2, sort_keys=True, allow_nan=False) + "\n")
    return RunResult(rows, state, status, prog.steps, summary, error)


def _finite_or_str(x: float):
    return x if math.isfinite(x) else repr(x)


def build_summary(cfg, rows, state, ref, acc, scale0, steps, status, error) -> dict:
    scale = scale0 if isinstance(scale0, dict) else asdict(scale0)
    g0 = ref.gamma_linf
    margin_M1 = scale["delta"] / scale["M1"] - acc.gamma_small_r_sup if scale["M1"] > 0 else math.inf
    summary = {
        "status": status,
        "steps": steps,
        "t_final": state.time,
        "rows": len(rows),
        "max_principle_pass": all(r.max_principle_margin >= -1e-12 * g0 for r in rows),
        "min_max_principle_margin": min((r.max_principle_margin for r in rows), default=0.0),
        "max_energy_residual_rel": (max(abs(r.energy_identity_residual) for r in rows) / ref.energy
                                    if ref.energy > 0 and rows else 0.0),
        "vorticity1_pass": all(r.vorticity1_sup <= r.vorticity1_rhs for r in rows),
        "scale_invariants": {k: _finite_or_str(v) if isinstance(v, float) else v for k, v in scale.items()},
        "margin_M1_running": _finite_or_str(margin_M1),
        "gamma_small_r_sup": acc.gamma_small_r_sup,
    }
    if error is not None:
        summary["blowup"] = {"stage": getattr(error, "stage", None), "field": getattr(error, "field", None),
                             "time": getattr(error, "time", None), "message": str(error)}
    if status == "ok" and linf_norm(state.v_theta) > 0.0:
        fam = default_fbc_family(state.grid, cfg.diag.delta0, cfg.diag.fbc_family_size, cfg.ic.seed)
        rep = fbc_report(state.v_theta, fam, cfg.diag.r0, cfg.diag.c0_grid)
        summary["fbc_final"] = {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(rep).items()}
    return summary
