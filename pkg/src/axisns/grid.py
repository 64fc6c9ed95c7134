"""Staggered (r, z) mesh over [0, r_max] x periodic [0, z_len]."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

MIN_CELLS = 4


@dataclass(frozen=True)
class Grid:
    """Cell-centred axisymmetric mesh.

    Radial centres sit at ``(j + 1/2) dr`` so the axis ``r = 0`` is a cell
    face and never a sample point. ``z`` is periodic with samples at ``k dz``.
    """

    nr: int
    nz: int
    r_max: float
    z_len: float
    r: np.ndarray = field(init=False, repr=False, compare=False)
    z: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r = (np.arange(self.nr) + 0.5) * self.dr
        z = np.arange(self.nz) * self.dz
        w = np.broadcast_to((r * self.dr * self.dz)[:, None], (self.nr, self.nz))
        for name, arr in (("r", r), ("z", z), ("weights", w)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dr(self) -> float:
        return self.r_max / self.nr

    @property
    def dz(self) -> float:
        return self.z_len / self.nz

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nr, self.nz)

    @property
    def r_faces(self) -> np.ndarray:
        """Radial face positions ``j dr`` for ``j = 0..nr``."""
        return np.arange(self.nr + 1) * self.dr

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Broadcastable (R, Z) coordinate arrays of shape (nr, nz)."""
        return np.meshgrid(self.r, self.z, indexing="ij")

    def rescaled(self, lam: float) -> "Grid":
        """Grid of the same resolution covering the domain shrunk by ``lam``."""
        return build_grid(self.nr, self.nz, self.r_max / lam, self.z_len / lam)

    def to_dict(self) -> dict:
        return {"nr": self.nr, "nz": self.nz, "r_max": self.r_max, "z_len": self.z_len}


def build_grid(nr: int, nz: int, r_max: float, z_len: float) -> Grid:
    if int(nr) != nr or int(nz) != nz:
        raise ConfigError(f"cell counts must be integers, got nr={nr!r}, nz={nz!r}")
    if nr < MIN_CELLS or nz < MIN_CELLS:
        raise ConfigError(f"need nr, nz >= {MIN_CELLS}, got nr={nr}, nz={nz}")
    for name, val in (("r_max", r_max), ("z_len", z_len)):
        if not np.isfinite(val) or val <= 0:
            raise ConfigError(f"{name} must be finite and > 0, got {val!r}")
    return Grid(int(nr), int(nz), float(r_max), float(z_len))


def quadrature(g: Grid, f) -> float:
    """Midpoint rule for ``integral f r dr dz`` (no 2 pi factor)."""
    values = getattr(f, "values", f)
    values = np.asarray(values)
    if values.shape != g.shape:
        raise ValueError(f"field shape {values.shape} does not match grid {g.shape}")
    # contract rows first: sum_j r_j (sum_k f_jk)
    return float(g.r @ values.sum(axis=1)) * g.dr * g.dz
