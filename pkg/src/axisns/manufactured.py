"""Manufactured solution for convergence studies.

An exact (Gamma, psi) pair is chosen in closed form, omega_theta follows from
the stream equation, and the residual of both evolution equations is
derived symbolically and injected as forcing.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy as sp

from .fields import FlowState
from .grid import Grid
from .solver import state_from_arrays

_r, _z, _t = sp.symbols("r z t", real=True)


def _lap(f):
    return sp.diff(f, _r, 2) + sp.diff(f, _r) / _r + sp.diff(f, _z, 2)


@lru_cache(maxsize=None)
def _build(nu: float, z_len: float, amp_gamma: float, amp_psi: float, width: float):
    k = 2 * sp.pi / sp.Float(z_len)
    env = sp.exp(-_r ** 2 / sp.Float(width) ** 2 - _t)
    gamma = amp_gamma * _r ** 2 * env * (1 + sp.Rational(1, 2) * sp.cos(k * _z))
    psi = amp_psi * _r * env * sp.sin(k * _z)
    omega = -(_lap(psi) - psi / _r ** 2)
    vr = -sp.diff(psi, _z)
    vz = sp.diff(_r * psi, _r) / _r
    adv = lambda f: vr * sp.diff(f, _r) + vz * sp.diff(f, _z)
    f_gamma = sp.diff(gamma, _t) + adv(gamma) - nu * (_lap(gamma) - 2 * sp.diff(gamma, _r) / _r)
    f_omega = (sp.diff(omega, _t) + adv(omega) - vr / _r * omega
               - nu * (_lap(omega) - omega / _r ** 2) - sp.diff(gamma ** 2 / _r ** 3, _z))
    mods = ["numpy"]
    fn = lambda e: sp.lambdify((_r, _z, _t), sp.simplify(e), modules=mods)
    return fn(gamma), fn(omega), fn(f_gamma), fn(f_omega)


@dataclass(frozen=True)
class ManufacturedSolution:
    """Gaussian-enveloped swirl and stream function decaying like exp(-t).

    Gamma = a_g r^2 e^(-r^2/w^2 - t) (1 + cos(k z) / 2)
    psi   = a_p r   e^(-r^2/w^2 - t) sin(k z)
    At r = 2 the default envelope is about 1e-7, far below the
    discretization error on the grids used for convergence studies.
    """

    nu: float = 1.0
    z_len: float = 2.0
    amp_gamma: float = 1.0
    amp_psi: float = 1.0
    width: float = 0.5

    def _fns(self):
        return _build(float(self.nu), float(self.z_len), float(self.amp_gamma),
                      float(self.amp_psi), float(self.width))

    def exact(self, g: Grid, t: float) -> tuple[np.ndarray, np.ndarray]:
        r, z = g.mesh()
        fg, fw, _, _ = self._fns()
        return np.broadcast_to(fg(r, z, t), g.shape).copy(), np.broadcast_to(fw(r, z, t), g.shape).copy()

    def state(self, g: Grid, t: float = 0.0) -> FlowState:
        gam, om = self.exact(g, t)
        return state_from_arrays(g, gam, om, t)

    def forcing(self, g: Grid):
        r, z = g.mesh()
        _, _, fg, fw = self._fns()

        def force(t: float):
            return (np.broadcast_to(fg(r, z, t), g.shape), np.broadcast_to(fw(r, z, t), g.shape))

        return force
