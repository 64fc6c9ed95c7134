"""Run configuration: TOML with dotted section keys, strict validation, documented defaults."""
from __future__ import annotations

import math
from dataclasses import MISSING, asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError

SCHEMES = ("upwind1", "centered2")
IC_KINDS = ("zero", "rigid_swirl_bump", "vortex_ring_swirl", "log_critical_swirl",
            "random_spectrum", "manufactured")


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


@dataclass(frozen=True)
class GridConfig:
    nr: int
    nz: int
    r_max: float = 2.0
    z_len: float = 2.0


@dataclass(frozen=True)
class PhysicsConfig:
    nu: float = 1.0


@dataclass(frozen=True)
class TimeConfig:
    t_end: float
    cfl_safety: float = 0.9
    advection_scheme: str = "upwind1"
    # fixed step that bypasses the CFL controller; a test fixture for blow-up handling
    dt: float = 0.0


@dataclass(frozen=True)
class IcConfig:
    kind: str = "zero"
    amplitude: float = 1.0
    support_radius: float = 1.0
    seed: int = 0
    ring_strength: float = 5.0


@dataclass(frozen=True)
class DiagConfig:
    sample_interval: float = 0.1
    delta0: float = 0.25
    r0: float = 0.5
    delta_small: float = 0.01
    fbc_family_size: int = 8
    c0_grid: tuple = (0.0, 1.0, 10.0, 100.0)


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    snapshot_interval: float = 0.0


@dataclass(frozen=True)
class IneqConfig:
    hardy_deltas: tuple = (0.2, 0.1, 0.05)
    lab_points: int = 16384
    lab_r_min: float = 1e-8
    C1: float = 1.0
    chain_delta: float = 0.05
    delta_star: float = 0.1
    k0_size: int = 32
    k0_seed: int = 0
    k0_grids: tuple = ((64, 64), (128, 128))


@dataclass(frozen=True)
class RunConfig:
    grid: GridConfig
    time: TimeConfig
    physics: PhysicsConfig = field(default_factory=PhysicsConfig)
    ic: IcConfig = field(default_factory=IcConfig)
    diag: DiagConfig = field(default_factory=DiagConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    ineq: IneqConfig = field(default_factory=IneqConfig)

    def to_dict(self) -> dict:
        return asdict(self)


_SECTIONS = {f.name: f.type for f in fields(RunConfig)}
_CLASSES = {"grid": GridConfig, "time": TimeConfig, "physics": PhysicsConfig, "ic": IcConfig,
            "diag": DiagConfig, "output": OutputConfig, "ineq": IneqConfig}


def _coerce(section: str, name: str, default, value):
    key = f"{section}.{name}"
    kind = type(default) if default is not MISSING else None
    if kind is None:
        kind = int if name in ("nr", "nz") else float
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{key} must be a boolean, got {value!r}")
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        return value
    if kind is float:
        if not _finite(value):
            raise ConfigError(f"{key} must be a finite number, got {value!r}")
        return float(value)
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{key} must be a string, got {value!r}")
        return value
    if kind is tuple:
        if not isinstance(value, list):
            raise ConfigError(f"{key} must be an array, got {value!r}")
        if name == "k0_grids":
            if not all(isinstance(p, list) and len(p) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in p)
                       for p in value):
                raise ConfigError(f"{key} must be an array of [nr, nz] integer pairs")
            return tuple(tuple(p) for p in value)
        if not all(_finite(v) for v in value):
            raise ConfigError(f"{key} entries must be finite numbers, got {value!r}")
        return tuple(float(v) for v in value)
    raise ConfigError(f"{key}: unsupported type")  # pragma: no cover


def _section(name: str, raw: Any):
    cls = _CLASSES[name]
    if not isinstance(raw, dict):
        raise ConfigError(f"[{name}] must be a table")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(raw) - set(known))
    if unknown:
        raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(unknown)}")
    kw = {}
    for fname, f in known.items():
        default = f.default
        if fname in raw:
            kw[fname] = _coerce(name, fname, default, raw[fname])
        elif default is MISSING:
            raise ConfigError(f"missing required key {name}.{fname}")
    return cls(**kw)


def _range(ok: bool, key: str, bounds: str, value) -> None:
    if not ok:
        raise ConfigError(f"{key} = {value!r} out of range: must satisfy {bounds}")


def validate(cfg: RunConfig) -> RunConfig:
    g, t, p, ic, d, o, q = cfg.grid, cfg.time, cfg.physics, cfg.ic, cfg.diag, cfg.output, cfg.ineq
    _range(g.nr >= 4, "grid.nr", "nr >= 4", g.nr)
    _range(g.nz >= 4, "grid.nz", "nz >= 4", g.nz)
    _range(g.r_max > 0, "grid.r_max", "r_max > 0", g.r_max)
    _range(g.z_len > 0, "grid.z_len", "z_len > 0", g.z_len)
    _range(p.nu > 0, "physics.nu", "nu > 0", p.nu)
    _range(t.t_end >= 0, "time.t_end", "t_end >= 0", t.t_end)
    _range(0 < t.cfl_safety <= 1, "time.cfl_safety", "0 < cfl_safety <= 1", t.cfl_safety)
    _range(t.advection_scheme in SCHEMES, "time.advection_scheme", f"one of {SCHEMES}", t.advection_scheme)
    _range(t.dt >= 0, "time.dt", "dt >= 0 (0 selects the CFL controller)", t.dt)
    _range(ic.kind in IC_KINDS, "ic.kind", f"one of {IC_KINDS}", ic.kind)
    _range(0 < ic.support_radius <= g.r_max / 2, "ic.support_radius",
           f"0 < support_radius <= r_max/2 = {g.r_max / 2:g} (compact-support policy)", ic.support_radius)
    _range(ic.seed >= 0, "ic.seed", "seed >= 0", ic.seed)
    _range(d.sample_interval > 0, "diag.sample_interval", "sample_interval > 0", d.sample_interval)
    _range(0 < d.delta0 < 0.5, "diag.delta0", "0 < delta0 < 1/2", d.delta0)
    _range(0 < d.r0 < g.r_max, "diag.r0", f"0 < r0 < r_max = {g.r_max:g}", d.r0)
    _range(d.delta_small > 0, "diag.delta_small", "delta_small > 0", d.delta_small)
    _range(d.fbc_family_size >= 0, "diag.fbc_family_size", "fbc_family_size >= 0", d.fbc_family_size)
    _range(len(d.c0_grid) > 0 and all(c >= 0 for c in d.c0_grid), "diag.c0_grid",
           "nonempty, entries >= 0", d.c0_grid)
    _range(o.snapshot_interval >= 0, "output.snapshot_interval", "snapshot_interval >= 0", o.snapshot_interval)
    _range(len(q.hardy_deltas) > 0 and all(0 < x < 0.25 for x in q.hardy_deltas), "ineq.hardy_deltas",
           "nonempty, 0 < delta < 1/4", q.hardy_deltas)
    _range(q.lab_points >= 16 and q.lab_points % 2 == 0, "ineq.lab_points", "even and >= 16", q.lab_points)
    _range(0 < q.lab_r_min < 1e-2, "ineq.lab_r_min", "0 < lab_r_min < 1e-2", q.lab_r_min)
    _range(q.C1 > 0, "ineq.C1", "C1 > 0", q.C1)
    _range(0 < q.chain_delta < d.delta0 / 2, "ineq.chain_delta", "0 < chain_delta < delta0/2", q.chain_delta)
    _range(q.delta_star > 0, "ineq.delta_star", "delta_star > 0", q.delta_star)
    _range(q.k0_size >= 0, "ineq.k0_size", "k0_size >= 0", q.k0_size)
    _range(q.k0_seed >= 0, "ineq.k0_seed", "k0_seed >= 0", q.k0_seed)
    _range(all(a >= 4 and b >= 4 for a, b in q.k0_grids), "ineq.k0_grids", "every size >= 4", q.k0_grids)
    return cfg


def config_from_dict(raw: dict) -> RunConfig:
    """Build and validate a RunConfig from a parsed document; nothing is applied on failure."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a table")
    unknown = sorted(set(raw) - set(_SECTIONS))
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(unknown)}")
    for required in ("grid", "time"):
        if required not in raw:
            raise ConfigError(f"missing required section [{required}]")
    parts = {name: _section(name, raw[name]) for name in _SECTIONS if name in raw}
    return validate(RunConfig(**parts))


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return config_from_dict(raw)
