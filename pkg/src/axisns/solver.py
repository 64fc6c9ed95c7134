"""Explicit SSP-RK3 time stepping of the (Gamma, omega_theta) system.

Swirl:      d_t G + b . grad G = nu (Delta - (2/r) d_r) G
Vorticity:  d_t w + b . grad w - (v_r / r) w = nu (Delta - 1/r^2) w + d_z (G^2 / r^3)

with b = (v_r, v_z) recovered from the stream function after every stage.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .diffops import (d2z, ddr, ddz, lap_gamma, lap_gamma_axis, lap_minus_inv_r2,
                      upwind_r, upwind_z)
from .elliptic import StreamSolver, velocity_arrays
from .errors import BlowUpError, ConfigError
from .fields import (DIRICHLET, EVEN, EXTRAPOLATE, ODD, ZERO_GHOST, FlowState,
                     ScalarField)
from .grid import Grid, build_grid

SCHEMES = ("upwind1", "centered2")
GAMMA_DIFFUSION = {"monotone": lap_gamma, "axis": lap_gamma_axis}
# the monotone pair keeps the maximum principle, the accurate pair resolves the axis
DEFAULT_GAMMA_DIFFUSION = {"upwind1": "monotone", "centered2": "axis"}
SPEED_FLOOR = 1e-14
# real-axis extent of the SSP-RK3 stability region is 2.5127
RK3_REAL_LIMIT = 2.5

# (gamma rhs, omega rhs) source injected at time t; manufactured solutions only
Forcing = Callable[[float], tuple[np.ndarray, np.ndarray]]

_solver_cache: dict[tuple, StreamSolver] = {}
_radius_cache: dict[tuple, float] = {}


def stream_solver_for(g: Grid) -> StreamSolver:
    key = (g.nr, g.nz, g.r_max, g.z_len)
    s = _solver_cache.get(key)
    if s is None:
        s = _solver_cache[key] = StreamSolver(g)
    return s


def radial_spectral_radius(g: Grid, kind: str) -> float:
    """Largest |eigenvalue| of the radial part of a Gamma diffusion operator."""
    key = (g.nr, g.nz, g.r_max, g.z_len, kind)
    rho = _radius_cache.get(key)
    if rho is None:
        eye = np.eye(g.nr)
        sq = build_grid(g.nr, g.nr, g.r_max, g.z_len)
        op = GAMMA_DIFFUSION[kind]
        m = op(eye, sq, EVEN, ZERO_GHOST) - d2z(eye, sq)
        rho = _radius_cache[key] = float(np.abs(np.linalg.eigvals(m)).max())
    return rho


def state_from_arrays(g: Grid, gamma, omega, time: float = 0.0,
                      psi=None, velocity=None) -> FlowState:
    """Build a FlowState whose cached fields are consistent with (Gamma, omega)."""
    if psi is None:
        psi = stream_solver_for(g).solve_array(omega)
    if velocity is None:
        velocity = velocity_arrays(psi, g)
    vr, vz = velocity
    return FlowState(
        time=float(time),
        gamma=ScalarField(g, gamma, EVEN, ZERO_GHOST, "gamma"),
        omega_theta=ScalarField(g, omega, ODD, DIRICHLET, "omega_theta"),
        psi_theta=ScalarField(g, psi, ODD, DIRICHLET, "psi_theta"),
        v_r=ScalarField(g, vr, ODD, DIRICHLET, "v_r"),
        v_z=ScalarField(g, vz, EVEN, EXTRAPOLATE, "v_z"),
        v_theta=ScalarField(g, gamma / g.r[:, None], ODD, ZERO_GHOST, "v_theta"),
    )


def zero_state(g: Grid) -> FlowState:
    z = np.zeros(g.shape)
    return state_from_arrays(g, z, z)


@dataclass
class TimeStepper:
    nu: float = 1.0
    cfl_safety: float = 0.9
    advection_scheme: str = "upwind1"
    forcing: Optional[Forcing] = field(default=None, repr=False)
    gamma_diffusion: Optional[str] = None

    def __post_init__(self):
        if not (self.nu > 0 and np.isfinite(self.nu)):
            raise ConfigError(f"nu must be finite and > 0, got {self.nu!r}")
        if not (0 < self.cfl_safety <= 1):
            raise ConfigError(f"cfl_safety must lie in (0, 1], got {self.cfl_safety!r}")
        if self.advection_scheme not in SCHEMES:
            raise ConfigError(f"advection_scheme must be one of {SCHEMES}, got {self.advection_scheme!r}")
        if self.gamma_diffusion is None:
            self.gamma_diffusion = DEFAULT_GAMMA_DIFFUSION[self.advection_scheme]
        if self.gamma_diffusion not in GAMMA_DIFFUSION:
            raise ConfigError(f"gamma_diffusion must be one of {tuple(GAMMA_DIFFUSION)}, "
                              f"got {self.gamma_diffusion!r}")
        self._lap_gamma = GAMMA_DIFFUSION[self.gamma_diffusion]

    # ------------------------------------------------------------ right-hand sides

    def _advect(self, a, vr, vz, g, parity, outer):
        if self.advection_scheme == "upwind1":
            return vr * upwind_r(a, vr, g, parity, outer) + vz * upwind_z(a, vz, g)
        return vr * ddr(a, g, parity, outer) + vz * ddz(a, g)

    def _rhs_arrays(self, g, gamma, omega, vr, vz):
        r = g.r[:, None]
        rg = -self._advect(gamma, vr, vz, g, EVEN, ZERO_GHOST) + self.nu * self._lap_gamma(gamma, g)
        rw = (-self._advect(omega, vr, vz, g, ODD, DIRICHLET) + (vr / r) * omega
              + self.nu * lap_minus_inv_r2(omega, g) + ddz(gamma * gamma / r ** 3, g))
        return rg, rw

    def rhs_gamma(self, state: FlowState) -> ScalarField:
        g = state.grid
        rg, _ = self._rhs_arrays(g, state.gamma.values, state.omega_theta.values,
                                 state.v_r.values, state.v_z.values)
        return ScalarField(g, rg, EVEN, ZERO_GHOST, "rhs_gamma")

    def rhs_omega_theta(self, state: FlowState) -> ScalarField:
        g = state.grid
        _, rw = self._rhs_arrays(g, state.gamma.values, state.omega_theta.values,
                                 state.v_r.values, state.v_z.values)
        return ScalarField(g, rw, ODD, DIRICHLET, "rhs_omega_theta")

    # ------------------------------------------------------------ time step

    def cfl_limits(self, state: FlowState) -> dict:
        """Candidate step sizes before the safety factor.

        ``diffusive`` and ``advective`` are the textbook limits; ``monotone``
        keeps one forward-Euler stage of the upwind Gamma update a convex
        combination; ``stiff`` keeps nu dt times the spectral radius of the
        stiffer of the two diffusion operators inside the RK3 stability
        interval.
        """
        g = state.grid
        h = min(g.dr, g.dz)
        vr = np.abs(state.v_r.values)
        vz = np.abs(state.v_z.values)
        vmax = max(vr.max(), vz.max(), np.abs(state.v_theta.values).max(), SPEED_FLOOR)
        rate_diff = self.nu * (2.0 / g.dr ** 2 + 2.0 / g.dz ** 2)
        rate_adv = float(np.max(vr / g.dr + vz / g.dz))
        rho_r = max(-stream_solver_for(g)._lam.min(), radial_spectral_radius(g, self.gamma_diffusion))
        rho = rho_r + 4.0 / g.dz ** 2
        return {
            "diffusive": h * h / (4.0 * self.nu),
            "advective": h / vmax,
            "monotone": 1.0 / (rate_adv + rate_diff),
            "stiff": float(RK3_REAL_LIMIT / (self.nu * rho)),
        }

    def cfl_dt(self, state: FlowState) -> float:
        return self.cfl_safety * min(self.cfl_limits(state).values())

    def step(self, state: FlowState, dt: float) -> FlowState:
        """One Shu-Osher SSP-RK3 step; each stage re-solves the stream function."""
        g = state.grid
        solver = stream_solver_for(g)
        t0 = state.time
        u0g, u0w = state.gamma.values, state.omega_theta.values

        def euler(stage, ug, uw, vr, vz, t):
            rg, rw = self._rhs_arrays(g, ug, uw, vr, vz)
            if self.forcing is not None:
                fg, fw = self.forcing(t)
                rg = rg + fg
                rw = rw + fw
            return ug + dt * rg, uw + dt * rw

        def check(stage, ug, uw):
            for name, a in (("gamma", ug), ("omega_theta", uw)):
                if not np.all(np.isfinite(a)):
                    raise BlowUpError(stage, name, t0)

        g1, w1 = euler(1, u0g, u0w, state.v_r.values, state.v_z.values, t0)
        check(1, g1, w1)
        vr, vz = velocity_arrays(solver.solve_array(w1), g)
        eg, ew = euler(2, g1, w1, vr, vz, t0 + dt)
        g2, w2 = 0.75 * u0g + 0.25 * eg, 0.75 * u0w + 0.25 * ew
        check(2, g2, w2)
        vr, vz = velocity_arrays(solver.solve_array(w2), g)
        eg, ew = euler(3, g2, w2, vr, vz, t0 + 0.5 * dt)
        g3 = u0g / 3.0 + 2.0 / 3.0 * eg
        w3 = u0w / 3.0 + 2.0 / 3.0 * ew
        check(3, g3, w3)
        return state_from_arrays(g, g3, w3, t0 + dt)
