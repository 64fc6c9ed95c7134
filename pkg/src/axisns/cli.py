"""Command-line entry point.

    axisns check <config>
    axisns run <config> [--out DIR] [--resume SNAPSHOT]
    axisns ineq {hardy,chain,k0} <config>

Exit codes: 0 success, 1 unexpected error, 2 configuration error,
3 numerical blow-up (partial diagnostics kept), 4 snapshot error,
5 eigen-solver failure, 6 hypothesis violation.
"""
from __future__ import annotations

from . import _threads  # noqa: F401  (must run before numpy is imported)

import argparse
import json
import math
import sys
from dataclasses import asdict

from .config import load_config
from .errors import (BlowUpError, ConfigError, EigenConvergenceError, HypothesisViolation,
                     SnapshotError)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_SNAPSHOT = 4
EXIT_EIGEN = 5
EXIT_HYPOTHESIS = 6


def _clean(x):
    """JSON-safe copy: non-finite floats become strings, tuples become lists."""
    if isinstance(x, float):
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def _emit(obj) -> None:
    print(json.dumps(_clean(obj), indent=2, sort_keys=True))


def _fail(code: int, exc: BaseException, **extra) -> int:
    msg = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    msg.update(extra)
    print(json.dumps(_clean(msg), sort_keys=True), file=sys.stderr)
    return code


def cmd_check(args) -> int:
    cfg = load_config(args.config)
    _emit(cfg.to_dict())
    return EXIT_OK


def cmd_run(args) -> int:
    from .simulation import DIAGNOSTICS_FILE, run_simulation

    cfg = load_config(args.config)
    res = run_simulation(cfg, out_dir=args.out, resume_from=args.resume)
    _emit(res.summary)
    if res.status == "blowup":
        out = args.out or cfg.output.directory
        return _fail(EXIT_BLOWUP, res.error, partial_diagnostics=f"{out}/{DIAGNOSTICS_FILE}",
                     rows=len(res.rows))
    return EXIT_OK


def cmd_ineq(args) -> int:
    from . import ineqlab as L

    cfg = load_config(args.config)
    q = cfg.ineq
    if args.which == "hardy":
        reports = [L.hardy_report(d, q.lab_points, q.lab_r_min) for d in q.hardy_deltas]
        _emit([{
            "delta": r.delta,
            "eigen_min_quotient": r.eigen.value,
            "eigenvector_rayleigh": r.eigen.rayleigh,
            "mesh_spacing_ln_r": r.eigen.mesh_spacing,
            "min_profile_ratio": r.min_profile_ratio,
            "profiles": {name: asdict(h) for name, h in r.profiles},
        } for r in reports])
    elif args.which == "chain":
        mesh = L.LabMesh(q.lab_r_min, L.LAB_R_MAX, q.lab_points)
        gamma = L.log_critical_profile(q.C1, cfg.diag.delta0, mesh)
        rep = L.corollary_chain(gamma, q.C1, q.chain_delta, cfg.diag.delta0, q.delta_star)
        _emit(asdict(rep))
    else:
        rep = L.estimate_K0(q.k0_size, q.k0_seed, q.k0_grids, cfg.grid.r_max, cfg.grid.z_len)
        _emit(asdict(rep))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="axisns", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", help="validate a config and print it with defaults resolved")
    c.add_argument("config")
    c.set_defaults(func=cmd_check)
    r = sub.add_parser("run", help="simulate and write diagnostics, summary and snapshots")
    r.add_argument("config")
    r.add_argument("--out", default=None, help="output directory (overrides output.directory)")
    r.add_argument("--resume", default=None, help="snapshot to resume from")
    r.set_defaults(func=cmd_run)
    i = sub.add_parser("ineq", help="inequality-lab reports")
    i.add_argument("which", choices=("hardy", "chain", "k0"))
    i.add_argument("config")
    i.set_defaults(func=cmd_ineq)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, exc)
    except SnapshotError as exc:
        return _fail(EXIT_SNAPSHOT, exc)
    except EigenConvergenceError as exc:
        return _fail(EXIT_EIGEN, exc)
    except HypothesisViolation as exc:
        return _fail(EXIT_HYPOTHESIS, exc, radius=exc.radius)
    except BlowUpError as exc:
        return _fail(EXIT_BLOWUP, exc)
    except Exception as exc:  # structured report instead of a traceback
        return _fail(EXIT_ERROR, exc)
