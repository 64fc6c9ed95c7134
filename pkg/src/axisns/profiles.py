"""Smooth cut-off and bump profiles with analytic derivatives."""
from __future__ import annotations

import numpy as np


def smoothstep(t):
    """Quintic smoothstep 6t^5 - 15t^4 + 10t^3 on [0, 1], clamped outside (C^2)."""
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t))


def smoothstep_deriv(t):
    t = np.asarray(t, dtype=float)
    inside = (t > 0.0) & (t < 1.0)
    return np.where(inside, 30.0 * t * t * (1.0 - t) ** 2, 0.0)


def cutoff(r, delta: float):
    """phi(r / delta): 1 on r <= delta, 0 on r >= 2 delta, quintic blend between."""
    return 1.0 - smoothstep(np.asarray(r, dtype=float) / delta - 1.0)


def cutoff_deriv(r, delta: float):
    return -smoothstep_deriv(np.asarray(r, dtype=float) / delta - 1.0) / delta


def bump(s):
    """exp(1 - 1/(1 - s^2)) on |s| < 1, else 0; C-infinity with bump(0) = 1."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    out[m] = np.exp(1.0 - 1.0 / (1.0 - s[m] ** 2))
    return out


def bump_deriv(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    q = 1.0 - s[m] ** 2
    out[m] = np.exp(1.0 - 1.0 / q) * (-2.0 * s[m] / (q * q))
    return out
