"""Initial-condition library."""
from __future__ import annotations

import numpy as np

from .config import RunConfig
from .errors import ConfigError
from .fields import FlowState
from .grid import Grid, build_grid
from .manufactured import ManufacturedSolution
from .profiles import bump, cutoff
from .solver import state_from_arrays, zero_state


def grid_from_config(cfg: RunConfig) -> Grid:
    g = cfg.grid
    return build_grid(g.nr, g.nz, g.r_max, g.z_len)


def rigid_swirl_bump(g: Grid, amplitude: float, R: float) -> FlowState:
    """Gamma = amplitude r^2 bump(r / R), no meridional flow."""
    r, _ = g.mesh()
    return state_from_arrays(g, amplitude * r * r * bump(r / R), np.zeros(g.shape))


def vortex_ring_swirl(g: Grid, amplitude: float, R: float, strength: float = 5.0) -> FlowState:
    """Gaussian omega_theta ring at (R/2, z_len/2), mirrored oddly across the axis,
    plus a swirl bump amplitude r^2 bump(r / R) bump((z - z_c) / (0.8 R))."""
    r, z = g.mesh()
    rc, zc, sig = 0.5 * R, 0.5 * g.z_len, 0.2 * R
    dz2 = (z - zc) ** 2
    w = strength * (np.exp(-((r - rc) ** 2 + dz2) / sig ** 2) - np.exp(-((r + rc) ** 2 + dz2) / sig ** 2))
    gam = amplitude * r * r * bump(r / R) * bump((z - zc) / (0.8 * R))
    return state_from_arrays(g, gam, w)


def log_critical_swirl(g: Grid, C1: float, delta0: float) -> FlowState:
    """Gamma = C1 |ln r|^-2 phi(r / delta0): equal to the critical envelope on r <= delta0."""
    if not 0.0 < delta0 < 0.5:
        raise ConfigError(f"delta0 must lie in (0, 1/2), got {delta0!r}")
    r, _ = g.mesh()
    phi = cutoff(r, delta0)
    inside = phi > 0.0
    lr = np.where(inside, np.log(r), -1.0)
    gam = np.where(inside, C1 * phi / lr ** 2, 0.0)
    return state_from_arrays(g, gam, np.zeros(g.shape))


def random_spectrum(g: Grid, amplitude: float, R: float, seed: int, modes: int = 3) -> FlowState:
    """Seeded fields band-limited in z (modes 1..``modes``) under a compact radial envelope.

    Gamma = amplitude r^2 bump(r / R) (1 + P(z)), omega = amplitude r bump(r / R) Q(z),
    with P, Q random trigonometric polynomials whose m-th coefficients scale like 1/m.
    """
    rng = np.random.default_rng(seed)
    r, z = g.mesh()
    k = 2.0 * np.pi / g.z_len

    def trig():
        c = rng.standard_normal((modes, 2)) * 0.5
        return sum((c[m - 1, 0] * np.cos(k * m * z) + c[m - 1, 1] * np.sin(k * m * z)) / m
                   for m in range(1, modes + 1))

    env = bump(r / R)
    gam = amplitude * r * r * env * (1.0 + trig())
    om = amplitude * r * env * trig()
    return state_from_arrays(g, gam, om)


def make_initial_condition(cfg: RunConfig) -> FlowState:
    g = grid_from_config(cfg)
    ic = cfg.ic
    if ic.kind == "zero":
        return zero_state(g)
    if ic.kind == "rigid_swirl_bump":
        return rigid_swirl_bump(g, ic.amplitude, ic.support_radius)
    if ic.kind == "vortex_ring_swirl":
        return vortex_ring_swirl(g, ic.amplitude, ic.support_radius, ic.ring_strength)
    if ic.kind == "log_critical_swirl":
        return log_critical_swirl(g, ic.amplitude, cfg.diag.delta0)
    if ic.kind == "random_spectrum":
        return random_spectrum(g, ic.amplitude, ic.support_radius, ic.seed)
    if ic.kind == "manufactured":
        return manufactured_for(cfg).state(g)
    raise ConfigError(f"unknown initial condition kind {ic.kind!r}")


def manufactured_for(cfg: RunConfig) -> ManufacturedSolution:
    return ManufacturedSolution(nu=cfg.physics.nu, z_len=cfg.grid.z_len, amp_gamma=cfg.ic.amplitude,
                                amp_psi=cfg.ic.amplitude, width=0.5 * cfg.ic.support_radius)
