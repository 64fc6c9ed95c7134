"""Residuals of the transformed equations for J, Omega and V.

Each residual takes two consecutive solver states, forms the time
derivative by a centred difference, and evaluates every spatial term on the
midpoint state (arithmetic mean of the prognostic pair, velocity re-solved).
A consistent discretization drives these residuals to zero at the order of
the underlying scheme.

J     = omega_r / r     d_t J + b.grad J = (Delta + 2/r d_r) J + (omega_r d_r + omega_z d_z)(v_r / r)
Omega = omega_theta / r d_t Om + b.grad Om = (Delta + 2/r d_r) Om - 2 (v_theta / r) J
V     = v_theta / r^1/2 d_t V + b.grad V + (3 v_r / 2r) V = (Delta + 1/r d_r - 3/(4 r^2)) V
"""
from __future__ import annotations

import numpy as np

from .diffops import ddr, ddz, lap_minus_inv_r2, lap_plus_2r
from .fields import EVEN, EXTRAPOLATE, ODD, ZERO_GHOST, FlowState, ScalarField
from .solver import state_from_arrays


def _midpoint(a: FlowState, b: FlowState) -> tuple[FlowState, float]:
    if a.grid != b.grid:
        raise ValueError("states live on different grids")
    dt = b.time - a.time
    if not dt > 0:
        raise ValueError(f"states must be in increasing time order, got dt={dt!r}")
    g = a.grid
    mid = state_from_arrays(
        g,
        0.5 * (a.gamma.values + b.gamma.values),
        0.5 * (a.omega_theta.values + b.omega_theta.values),
        0.5 * (a.time + b.time),
    )
    return mid, dt


def _advect(a, parity, outer, st: FlowState):
    g = st.grid
    return st.v_r.values * ddr(a, g, parity, outer) + st.v_z.values * ddz(a, g)


def _j(st: FlowState) -> np.ndarray:
    return -ddz(st.v_theta.values, st.grid) / st.grid.r[:, None]


def residual_J_equation(state_prev: FlowState, state_next: FlowState,
                        nu: float = 1.0) -> ScalarField:
    mid, dt = _midpoint(state_prev, state_next)
    g = mid.grid
    r = g.r[:, None]
    dJdt = (_j(state_next) - _j(state_prev)) / dt
    J = _j(mid)
    vt = mid.v_theta.values
    w_r = -ddz(vt, g)
    w_z = ddr(vt, g, ODD, ZERO_GHOST) + vt / r
    q = mid.v_r.values / r
    stretch = w_r * ddr(q, g, EVEN, EXTRAPOLATE) + w_z * ddz(q, g)
    res = dJdt + _advect(J, EVEN, EXTRAPOLATE, mid) - nu * lap_plus_2r(J, g) - stretch
    return ScalarField(g, res, EVEN, EXTRAPOLATE, "residual_J")


def residual_Omega_equation(state_prev: FlowState, state_next: FlowState,
                            nu: float = 1.0, source: str = "J") -> ScalarField:
    """Omega-equation residual; ``source`` picks the stretching term's form.

    ``"J"`` uses -2 (v_theta / r) J; ``"V"`` uses d_z(V^2) / r.  The two are
    the same continuum quantity.
    """
    if source not in ("J", "V"):
        raise ValueError(f"source must be 'J' or 'V', got {source!r}")
    mid, dt = _midpoint(state_prev, state_next)
    g = mid.grid
    r = g.r[:, None]
    dOdt = (state_next.omega_theta.values - state_prev.omega_theta.values) / (r * dt)
    Om = mid.omega_theta.values / r
    vt = mid.v_theta.values
    if source == "J":
        src = -2.0 * (vt / r) * _j(mid)
    else:
        src = ddz(vt * vt / r, g) / r
    res = dOdt + _advect(Om, EVEN, EXTRAPOLATE, mid) - nu * lap_plus_2r(Om, g) - src
    return ScalarField(g, res, EVEN, EXTRAPOLATE, "residual_Omega")


def residual_V_equation(state_prev: FlowState, state_next: FlowState,
                        nu: float = 1.0) -> ScalarField:
    """V-equation residual with V-derivatives taken through V = r^(-1/2) v_theta.

    V itself behaves like r^(1/2) at the axis, so difference quotients of V
    lose accuracy there; the smooth factor v_theta is differenced instead,
    and the diffusion is the exact image of (Delta - 1/r^2) acting on it.
    """
    mid, dt = _midpoint(state_prev, state_next)
    g = mid.grid
    r = g.r[:, None]
    s = 1.0 / np.sqrt(r)
    dVdt = s * (state_next.v_theta.values - state_prev.v_theta.values) / dt
    u = mid.v_theta.values
    u_r = ddr(u, g, ODD, ZERO_GHOST)
    V = s * u
    V_r = s * (u_r - 0.5 * u / r)
    V_z = s * ddz(u, g)
    vr = mid.v_r.values
    adv = vr * V_r + mid.v_z.values * V_z + 1.5 * vr / r * V
    # V_rr + (2/r) V_r + V_zz - 3 V / (4 r^2) = r^(-1/2) (Delta - 1/r^2) v_theta
    diff = s * lap_minus_inv_r2(u, g, ODD, ZERO_GHOST)
    return ScalarField(g, dVdt + adv - nu * diff, ODD, EXTRAPOLATE, "residual_V")
