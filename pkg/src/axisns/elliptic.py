"""Stream-function solve -(Delta - 1/r^2) psi = omega and velocity recovery."""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .diffops import ddz, lap_minus_inv_r2, r3_volumes, r_weighted_ddr
from .errors import InvariantViolation
from .fields import DIRICHLET, EVEN, EXTRAPOLATE, ODD, ScalarField
from .grid import Grid


def radial_operator(g: Grid) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tridiagonal (lower, diag, upper) of the radial part of Delta - 1/r^2.

    Same stencil as ``lap_minus_inv_r2``: psi = r h with the r^3-weighted
    finite volume form acting on h, zero flux through the axis face and an
    antisymmetric psi ghost at r_max.
    """
    r = g.r
    f3 = g.r_faces ** 3
    c = r / (g.dr * r3_volumes(g))
    lower = c[1:] * f3[1:-1] / r[:-1]
    upper = c[:-1] * f3[1:-1] / r[1:]
    diag = -c * (f3[:-1] + f3[1:]) / r
    diag[-1] -= c[-1] * f3[-1] / (r[-1] + g.dr)
    return lower, diag, upper


def symmetrizer(g: Grid) -> np.ndarray:
    """Diagonal weights w with diag(w) times the radial operator symmetric."""
    return r3_volumes(g) / g.r ** 2


def z_eigenvalues(g: Grid) -> np.ndarray:
    """Eigenvalues of the periodic second difference for each rfft mode."""
    m = np.arange(g.nz // 2 + 1)
    return -(4.0 / g.dz ** 2) * np.sin(np.pi * m / g.nz) ** 2


class StreamSolver:
    """Direct solver: real FFT in z, one radial tridiagonal system per mode.

    ``method="eigen"`` diagonalises the shared radial operator once (every
    mode only shifts its diagonal), turning each solve into two small dense
    products; ``method="tridiagonal"`` runs a precomputed Thomas
    factorisation for all modes at once. Both invert the same matrix.
    """

    def __init__(self, grid: Grid, method: str = "eigen"):
        if method not in ("eigen", "tridiagonal"):
            raise ValueError(f"unknown method {method!r}")
        self.grid = grid
        self.method = method
        self.mu = z_eigenvalues(grid)
        lower, diag, upper = radial_operator(grid)
        if method == "eigen":
            # w_j * A is symmetric; solve the pencil (diag(w) A, diag(w))
            w = symmetrizer(grid)
            s = np.diag(w * diag) + np.diag(w[1:] * lower, -1) + np.diag(w[:-1] * upper, 1)
            lam, q = scipy.linalg.eigh(s, np.diag(w))
            self._lam = lam
            self._q = q
            self._qt_w = q.T * w[None, :]
            self._denom = lam[:, None] + self.mu[None, :]
        else:
            self._thomas_factor(lower, diag, upper)
        if np.any(self._max_denominator() >= 0.0):
            raise InvariantViolation("stream operator is not negative definite")

    def _max_denominator(self):
        if self.method == "eigen":
            return self._denom.max()
        return self._piv.max()

    def _thomas_factor(self, lower, diag, upper):
        nr = self.grid.nr
        b = diag[:, None] + self.mu[None, :]
        cp = np.empty((nr - 1, self.mu.size))
        piv = np.empty((nr, self.mu.size))
        piv[0] = b[0]
        for j in range(1, nr):
            cp[j - 1] = upper[j - 1] / piv[j - 1]
            piv[j] = b[j] - lower[j - 1] * cp[j - 1]
        self._lower = lower
        self._cp = cp
        self._piv = piv

    def _thomas_solve(self, rhs):
        nr = self.grid.nr
        y = np.empty_like(rhs)
        y[0] = rhs[0] / self._piv[0]
        for j in range(1, nr):
            y[j] = (rhs[j] - self._lower[j - 1] * y[j - 1]) / self._piv[j]
        for j in range(nr - 2, -1, -1):
            y[j] -= self._cp[j] * y[j + 1]
        return y

    def solve_array(self, omega: np.ndarray) -> np.ndarray:
        nz = self.grid.nz
        if self.method == "eigen":
            w = self._qt_w @ omega
            w_hat = np.fft.rfft(w, axis=1) / self._denom
            psi = -(self._q @ np.fft.irfft(w_hat, n=nz, axis=1))
        else:
            w_hat = np.fft.rfft(omega, axis=1)
            psi = -np.fft.irfft(self._thomas_solve(w_hat), n=nz, axis=1)
        if not np.all(np.isfinite(psi)):
            raise InvariantViolation("stream solve produced non-finite values")
        return psi

    def solve_stream(self, omega_theta: ScalarField) -> ScalarField:
        psi = self.solve_array(omega_theta.values)
        return ScalarField(self.grid, psi, ODD, DIRICHLET, "psi_theta")

    def apply_operator(self, psi: ScalarField) -> ScalarField:
        """Discrete (Delta - 1/r^2) psi with the solver's boundary rules."""
        vals = lap_minus_inv_r2(psi.values, self.grid, ODD, DIRICHLET)
        return ScalarField(self.grid, vals, ODD, DIRICHLET, "lap_psi")


def velocity_arrays(psi: np.ndarray, g: Grid) -> tuple[np.ndarray, np.ndarray]:
    return -ddz(psi, g), r_weighted_ddr(psi, g)


def velocity_from_stream(psi_theta: ScalarField) -> tuple[ScalarField, ScalarField]:
    """v_r = -d_z psi, v_z = (1/r) d_r (r psi); discretely divergence free."""
    g = psi_theta.grid
    vr, vz = velocity_arrays(psi_theta.values, g)
    return (ScalarField(g, vr, ODD, DIRICHLET, "v_r"),
            ScalarField(g, vz, EVEN, EXTRAPOLATE, "v_z"))
