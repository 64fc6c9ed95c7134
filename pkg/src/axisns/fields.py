"""Scalar fields on the axisymmetric grid, flow state, and weighted norms."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import CorruptedStateError
from .grid import Grid, quadrature

ODD = "odd"
EVEN = "even"

# outer (r = r_max) ghost-cell rules
DIRICHLET = "dirichlet"      # antisymmetric ghost: zero on the face r = r_max
ZERO_GHOST = "zero"          # ghost value 0: keeps the Gamma stencil an M-matrix
EXTRAPOLATE = "extrapolate"  # quadratic extrapolation, no boundary condition

# Axis parity table. Gamma = r v_theta is even in r (~ a(z) r^2); J, Omega
# extend evenly; V is never differentiated directly.
PARITY = {
    "gamma": EVEN,
    "omega_theta": ODD,
    "psi_theta": ODD,
    "v_r": ODD,
    "v_theta": ODD,
    "v_z": EVEN,
    "J": EVEN,
    "Omega": EVEN,
    "V": ODD,
}


@dataclass(frozen=True)
class ScalarField:
    """Named axisymmetric scalar sampled at cell centres.

    ``parity`` selects the mirror rule for the ghost row at ``r < 0``;
    ``outer`` selects the ghost rule beyond ``r_max``.
    """

    grid: Grid
    values: np.ndarray
    parity: str = ODD
    outer: str = EXTRAPOLATE
    name: str = ""

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.shape:
            raise ValueError(f"values shape {vals.shape} != grid shape {self.grid.shape}")
        if self.parity not in (ODD, EVEN):
            raise ValueError(f"unknown parity {self.parity!r}")
        if self.outer not in (DIRICHLET, ZERO_GHOST, EXTRAPOLATE):
            raise ValueError(f"unknown outer rule {self.outer!r}")
        if not np.all(np.isfinite(vals)):
            raise CorruptedStateError(f"field {self.name or '<unnamed>'} has non-finite values",
                                      field=self.name or None)
        object.__setattr__(self, "values", vals)

    def with_values(self, values, **kw) -> "ScalarField":
        return replace(self, values=values, **kw)

    def __neg__(self):
        return self.with_values(-self.values)

    def __mul__(self, c):
        return self.with_values(self.values * c)

    __rmul__ = __mul__


def pad_r(a: np.ndarray, parity: str, outer: str) -> np.ndarray:
    """Return ``a`` with one ghost row on each radial side, shape (nr + 2, nz)."""
    nr = a.shape[0]
    p = np.empty((nr + 2,) + a.shape[1:])
    p[1:-1] = a
    p[0] = a[0] if parity == EVEN else -a[0]
    if outer == DIRICHLET:
        p[-1] = -a[-1]
    elif outer == ZERO_GHOST:
        p[-1] = 0.0
    else:
        p[-1] = 3.0 * a[-1] - 3.0 * a[-2] + a[-3]
    return p


@dataclass(frozen=True)
class FlowState:
    """Prognostic pair (Gamma, omega_theta) plus cached diagnostic fields."""

    time: float
    gamma: ScalarField
    omega_theta: ScalarField
    psi_theta: ScalarField
    v_r: ScalarField
    v_z: ScalarField
    v_theta: ScalarField

    @property
    def grid(self) -> Grid:
        return self.gamma.grid


def weighted_l2_norm(f: ScalarField) -> float:
    return float(np.sqrt(quadrature(f.grid, f.values * f.values)))


def weighted_lp_norm(f: ScalarField, p: float) -> float:
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return float(quadrature(f.grid, np.abs(f.values) ** p) ** (1.0 / p))


def linf_norm(f: ScalarField) -> float:
    return float(np.max(np.abs(f.values)))


def axis_values(f: ScalarField) -> np.ndarray:
    """Extrapolated values f(0, z).

    Even fields use the even quadratic c0 + c2 r^2 through the first two
    cells; odd fields vanish on the axis by parity.
    """
    if f.parity == ODD:
        return np.zeros(f.grid.nz)
    r0, r1 = f.grid.r[0], f.grid.r[1]
    f0, f1 = f.values[0], f.values[1]
    return (r1 * r1 * f0 - r0 * r0 * f1) / (r1 * r1 - r0 * r0)


def axis_trace_sq_integral(f: ScalarField) -> float:
    """``integral f(0, z)^2 dz`` over one period."""
    if f.parity == ODD:
        return 0.0
    a = axis_values(f)
    return float(np.sum(a * a) * f.grid.dz)
