"""Best-constant estimates for the log-weighted Hardy inequality, the
form-boundedness functionals and the vorticity-to-velocity gradient bound.

The radial lab works on its own geometric 1D mesh, so the weight
1/(r^2 ln^2 r) is resolved down to ``r_min``.  With s = ln r the mesh is
uniform in s and every integral int F r dr becomes int F r^2 ds, evaluated
by composite Simpson.  Mass below ``r_min`` is bounded in closed form and
reported separately as an error bar.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.integrate
import scipy.optimize
import scipy.sparse as sp
import scipy.sparse.linalg as sla

from .diagnostics import lemma1_ratios
from .errors import ConfigError, EigenConvergenceError, HypothesisViolation
from .grid import Grid, build_grid
from .profiles import bump, cutoff as cutoff_fn, cutoff_deriv
from .solver import state_from_arrays

DEFAULT_POINTS = 16384
R_MIN = 1e-8
LAB_R_MAX = 1.0

RadialFunction = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


# ------------------------------------------------------------------ mesh

@dataclass(frozen=True)
class LabMesh:
    r_min: float = R_MIN
    r_max: float = LAB_R_MAX
    n: int = DEFAULT_POINTS

    def __post_init__(self):
        if not 0.0 < self.r_min < self.r_max:
            raise ConfigError(f"need 0 < r_min < r_max, got {self.r_min!r}, {self.r_max!r}")
        if self.n < 16 or self.n % 2:
            raise ConfigError(f"mesh size must be even and >= 16, got {self.n!r}")

    @property
    def r(self) -> np.ndarray:
        # n intervals so the node count is odd, as composite Simpson wants
        return np.geomspace(self.r_min, self.r_max, self.n + 1)

    @property
    def ds(self) -> float:
        return math.log(self.r_max / self.r_min) / self.n

    def integrate(self, F, upto: Optional[float] = None, start: Optional[float] = None) -> float:
        """int F r dr over [r_min, r_max], optionally masked to r <= upto or r >= start."""
        r = self.r
        w = np.asarray(F, dtype=float) * r * r
        if upto is not None:
            w = np.where(r <= upto, w, 0.0)
        if start is not None:
            w = np.where(r >= start, w, 0.0)
        return float(scipy.integrate.simpson(w, dx=self.ds))

    def rescaled(self, lam: float) -> "LabMesh":
        """Mesh for data f(lam .): every node divided by lam."""
        return LabMesh(self.r_min / lam, self.r_max / lam, self.n)


# -------------------------------------------------------------- profiles

@dataclass(frozen=True)
class RadialProfile:
    """A compactly supported radial function sampled on a lab mesh, with its derivative."""

    name: str
    mesh: LabMesh
    values: np.ndarray
    deriv: np.ndarray
    support: float

    def __post_init__(self):
        if not (np.all(np.isfinite(self.values)) and np.all(np.isfinite(self.deriv))):
            raise ConfigError(f"profile {self.name!r} has non-finite samples")
        if not 0.0 < self.support < self.mesh.r_max:
            raise ConfigError(f"profile {self.name!r} support {self.support!r} not inside (0, {self.mesh.r_max})")

    @classmethod
    def from_function(cls, name: str, fn: RadialFunction, support: float,
                      mesh: Optional[LabMesh] = None) -> "RadialProfile":
        mesh = mesh or LabMesh()
        v, d = fn(mesh.r)
        outside = mesh.r > support
        return cls(name, mesh, np.where(outside, 0.0, v), np.where(outside, 0.0, d), support)

    def __mul__(self, c: float) -> "RadialProfile":
        return RadialProfile(self.name, self.mesh, c * self.values, c * self.deriv, self.support)

    __rmul__ = __mul__

    @property
    def inner_value(self) -> float:
        return float(self.values[0])


def cutoff(delta: float, mesh: Optional[LabMesh] = None) -> RadialProfile:
    """phi(r / delta): 1 below delta, 0 above 2 delta, quintic blend between."""
    mesh = mesh or LabMesh()
    if not delta > 0.0:
        raise ConfigError(f"delta must be > 0, got {delta!r}")
    if not 2.0 * delta < mesh.r_max:
        raise ConfigError(f"2*delta = {2 * delta!r} must lie below r_max = {mesh.r_max!r}")
    return RadialProfile.from_function(
        f"cutoff({delta:g})", lambda r: (cutoff_fn(r, delta), cutoff_deriv(r, delta)), 2.0 * delta, mesh)


def power_cutoff(p: float, delta: float, mesh: Optional[LabMesh] = None) -> RadialProfile:
    """r^p phi(r / delta)."""
    base = cutoff(delta, mesh)
    r = base.mesh.r
    return RadialProfile(f"r^{p:g}*cutoff({delta:g})", base.mesh, r ** p * base.values,
                         p * r ** (p - 1) * base.values + r ** p * base.deriv, base.support)


def inverse_log_cutoff(delta: float, mesh: Optional[LabMesh] = None) -> RadialProfile:
    """|ln r|^-1 phi(r / delta)."""
    base = cutoff(delta, mesh)
    r = base.mesh.r
    lr = np.log(r)
    inside = r <= base.support
    val = np.where(inside, -base.values / np.where(inside, lr, -1.0), 0.0)
    der = np.where(inside, (-base.deriv / np.where(inside, lr, -1.0)
                            + base.values / (r * np.where(inside, lr, -1.0) ** 2)), 0.0)
    return RadialProfile(f"invlog*cutoff({delta:g})", base.mesh, val, der, base.support)


def log_critical_profile(C1: float, delta0: float, mesh: Optional[LabMesh] = None) -> RadialProfile:
    """Gamma(r) = C1 |ln r|^-2 phi(r / delta0)."""
    base = cutoff(delta0, mesh)
    r = base.mesh.r
    inside = r <= base.support
    lr = np.where(inside, np.log(r), -1.0)
    val = np.where(inside, C1 * base.values / lr ** 2, 0.0)
    der = np.where(inside, C1 * (base.deriv / lr ** 2 - 2.0 * base.values / (r * lr ** 3)), 0.0)
    return RadialProfile(f"logcrit(C1={C1:g})", base.mesh, val, der, base.support)


def standard_family(delta: float, mesh: Optional[LabMesh] = None) -> list[RadialProfile]:
    return [cutoff(delta, mesh), power_cutoff(1.0, delta, mesh), power_cutoff(2.0, delta, mesh),
            inverse_log_cutoff(delta, mesh)]


def dyadic_family(mesh: Optional[LabMesh] = None, m_min: int = 2, m_max: int = 20) -> list[RadialProfile]:
    """phi(r / 2^-m) over the scales whose support fits inside the mesh."""
    mesh = mesh or LabMesh()
    out = []
    for m in range(m_min, m_max + 1):
        d = 2.0 ** -m
        if 2.0 * d < mesh.r_max and d > 16.0 * mesh.r_min:
            out.append(cutoff(d, mesh))
    return out


# ----------------------------------------------------------------- Hardy

def _hardy_weight(r: np.ndarray, support: float) -> np.ndarray:
    inside = r <= support
    lr = np.where(inside, np.log(r), -1.0)
    return np.where(inside, 1.0 / (r * r * lr * lr), 0.0)


@dataclass(frozen=True)
class HardyRatio:
    lhs: float    # int g^2 / (r^2 ln^2 r) r dr
    rhs: float    # int (g')^2 r dr
    ratio: float  # rhs / lhs
    lhs_tail: float  # closed-form mass below r_min, not included in lhs


def hardy_log_ratio(g: RadialProfile) -> HardyRatio:
    """Both sides of the log-weighted Hardy inequality for one profile."""
    if not g.support < 0.5:
        raise ConfigError(f"support {g.support!r} must lie below 1/2 so that |ln r| > ln 2")
    m = g.mesh
    lhs = m.integrate(g.values ** 2 * _hardy_weight(m.r, g.support))
    rhs = m.integrate(g.deriv ** 2)
    if lhs <= 0.0:
        raise ConfigError(f"profile {g.name!r} vanishes on the lab mesh")
    # g ~ g(r_min) below r_min and int_0^a dr / (r ln^2 r) = 1 / |ln a|
    tail = g.inner_value ** 2 / abs(math.log(m.r_min))
    return HardyRatio(lhs, rhs, rhs / lhs, tail)


@dataclass(frozen=True)
class HardyEigen:
    delta: float
    value: float           # smallest generalized eigenvalue
    rayleigh: float        # Rayleigh quotient of the returned eigenvector
    mesh_spacing: float    # uniform spacing in ln r
    n: int
    r_min: float


def _p1_matrices(r: np.ndarray, support: float):
    """P1 stiffness int u' v' r dr and weighted mass int u v / (r ln^2 r) dr.

    The mass uses 4-point Gauss quadrature per element.
    """
    a, b = r[:-1], r[1:]
    h = b - a
    kd = (a + b) / (2.0 * h)
    x, w = np.polynomial.legendre.leggauss(4)
    rq = 0.5 * (a + b)[:, None] + 0.5 * h[:, None] * x
    wq = 0.5 * h[:, None] * w / (rq * np.log(rq) ** 2)
    pa = (b[:, None] - rq) / h[:, None]
    pb = (rq - a[:, None]) / h[:, None]
    maa, mab, mbb = (wq * pa * pa).sum(1), (wq * pa * pb).sum(1), (wq * pb * pb).sum(1)
    n = r.size
    dk = np.zeros(n)
    dm = np.zeros(n)
    dk[:-1] += kd
    dk[1:] += kd
    dm[:-1] += maa
    dm[1:] += mbb
    K = sp.diags([dk, -kd, -kd], [0, 1, -1], format="csc")
    M = sp.diags([dm, mab, mab], [0, 1, -1], format="csc")
    return K, M


def hardy_best_constant(delta: float, n: int = DEFAULT_POINTS, r_min: float = R_MIN,
                        maxiter: int = 2000) -> HardyEigen:
    """Smallest quotient int (g')^2 r dr / int g^2 / (r^2 ln^2 r) r dr over g vanishing at 2 delta.

    P1 elements on a geometric mesh of [r_min, 2 delta]; the inner end is free.
    """
    if not delta > 0.0 or not 2.0 * delta < 0.5:
        raise ConfigError(f"need 0 < 2*delta < 1/2, got delta = {delta!r}")
    r = np.geomspace(r_min, 2.0 * delta, n)
    K, M = _p1_matrices(r, 2.0 * delta)
    keep = np.arange(n - 1)
    K = K[keep][:, keep]
    M = M[keep][:, keep]
    try:
        vals, vecs = sla.eigsh(K, k=1, M=M, sigma=0.0, which="LM", maxiter=maxiter)
    except sla.ArpackNoConvergence as exc:
        raise EigenConvergenceError(f"eigsh did not converge within {maxiter} iterations") from exc
    u = vecs[:, 0]
    rq = float(u @ (K @ u) / (u @ (M @ u)))
    return HardyEigen(delta, float(vals[0]), rq, math.log(2.0 * delta / r_min) / (n - 1), n, r_min)


@dataclass(frozen=True)
class HardyReport:
    delta: float
    profiles: tuple[tuple[str, HardyRatio], ...]
    min_profile_ratio: float
    eigen: HardyEigen


def hardy_report(delta: float, n: int = DEFAULT_POINTS, r_min: float = R_MIN) -> HardyReport:
    mesh = LabMesh(r_min, LAB_R_MAX, n)
    rows = tuple((p.name, hardy_log_ratio(p)) for p in standard_family(delta, mesh))
    return HardyReport(delta, rows, min(h.ratio for _, h in rows), hardy_best_constant(delta, n, r_min))


# ------------------------------------------------------ criticality chain

def threshold_delta(C1: float, delta_star: float) -> float:
    """Largest delta in (0, 1) with 16 C1^2 |ln delta|^-2 <= delta_star."""
    if not (C1 > 0.0 and delta_star > 0.0):
        raise ConfigError("C1 and delta_star must be > 0")
    return math.exp(-4.0 * C1 / math.sqrt(delta_star))


def threshold_delta_bisect(C1: float, delta_star: float) -> float:
    """Same threshold located by root bracketing in s = |ln delta|."""
    f = lambda s: 16.0 * C1 * C1 / (s * s) - delta_star
    s_hi = 1.0
    while f(s_hi) > 0.0:
        s_hi *= 2.0
    s = scipy.optimize.brentq(f, s_hi / 2.0 if s_hi > 1.0 else 1e-12, s_hi, xtol=1e-14, rtol=1e-15)
    return math.exp(-s)


@dataclass(frozen=True)
class ChainRow:
    name: str
    A1: float   # int (|v_theta| / r) f^2, with the tail bound added
    A2: float   # int |v_theta|^2 f^2, with the tail bound added
    B: float    # int (f')^2
    D: float    # int_{r >= delta} f^2
    C21: float  # smallest C in A1 <= 4 C1 B + C delta^-2 D (inf if none)
    C22: float  # smallest C in A2 <= 8 C1^2 |ln delta|^-2 B + C delta^-2 D


@dataclass(frozen=True)
class ChainReport:
    C1: float
    delta: float
    delta0: float
    delta_star: float
    rows: tuple[ChainRow, ...]
    C21_max: float
    C22_max: float
    holds_21: bool
    holds_22: bool
    threshold: float
    threshold_bisect: float
    leading_22: float  # sup over f supported in r <= delta of A2 / int f^2 / (r^2 ln^2 r)


def check_log_criticality(gamma: RadialProfile, C1: float, delta0: float, rel_tol: float = 1e-12) -> None:
    r = gamma.mesh.r
    rows = r <= delta0
    bound = C1 / np.log(r[rows]) ** 2
    bad = np.abs(gamma.values[rows]) > bound * (1.0 + rel_tol)
    if bad.any():
        rad = float(r[rows][np.argmax(bad)])
        raise HypothesisViolation(f"|Gamma| exceeds C1 |ln r|^-2 at r = {rad:.6g}", radius=rad)


def _smallest_C(a: float, lead: float, b: float, delta: float, d: float) -> float:
    excess = a - lead * b
    if excess <= 0.0:
        return 0.0
    return excess * delta * delta / d if d > 0.0 else math.inf


def corollary_chain(gamma: RadialProfile, C1: float, delta: float, delta0: float = 0.25,
                    delta_star: float = 0.1, family: Optional[Sequence[RadialProfile]] = None) -> ChainReport:
    """Check both form-boundedness inequalities for v_theta = Gamma / r on a radial family.

    Per unit axial length; the tail below r_min is bounded with the
    log-critical envelope and added to the left-hand sides.
    """
    if not 0.0 < delta0 < 0.5:
        raise ConfigError(f"delta0 must lie in (0, 1/2), got {delta0!r}")
    if not 0.0 < delta < delta0 / 2.0:
        raise ConfigError(f"delta must lie in (0, delta0/2), got {delta!r}")
    check_log_criticality(gamma, C1, delta0)
    mesh = gamma.mesh
    family = list(family) if family is not None else dyadic_family(mesh)
    if not family:
        raise ConfigError("test-function family is empty")
    r = mesh.r
    G = np.abs(gamma.values)
    lmin = abs(math.log(mesh.r_min))
    lead21 = 4.0 * C1
    lead22 = 8.0 * C1 * C1 / math.log(delta) ** 2
    rows = []
    for f in family:
        if f.mesh != mesh:
            raise ConfigError(f"profile {f.name!r} lives on a different lab mesh")
        f2 = f.values ** 2
        t = f.inner_value ** 2
        a1 = mesh.integrate(G / (r * r) * f2) + C1 * t / lmin
        a2 = mesh.integrate(G * G / (r * r) * f2) + C1 * C1 * t / (3.0 * lmin ** 3)
        b = mesh.integrate(f.deriv ** 2)
        d = mesh.integrate(f2, start=delta)
        rows.append(ChainRow(f.name, a1, a2, b, d,
                             _smallest_C(a1, lead21, b, delta, d), _smallest_C(a2, lead22, b, delta, d)))
    inner = r <= delta
    leading = float(np.max((G[inner] * np.log(r[inner])) ** 2)) if inner.any() else 0.0
    c21 = max(x.C21 for x in rows)
    c22 = max(x.C22 for x in rows)
    return ChainReport(C1, delta, delta0, delta_star, tuple(rows), c21, c22,
                       math.isfinite(c21), math.isfinite(c22),
                       threshold_delta(C1, delta_star), threshold_delta_bisect(C1, delta_star), leading)


# --------------------------------------------------------- radial FBC

@dataclass(frozen=True)
class RadialFbc:
    A1: float
    A2: float
    B: float
    D: float

    def ratios(self, c0: float) -> tuple[float, float]:
        return (max(self.A1 - c0 * self.D, 0.0) / self.B, max(self.A2 - c0 * self.D, 0.0) / self.B)


def radial_fbc(v_theta: RadialProfile, f: RadialProfile, r0: float) -> RadialFbc:
    """FBC integrals per unit axial length on the lab mesh."""
    m = f.mesh
    if v_theta.mesh != m:
        raise ConfigError("v_theta and f live on different lab meshes")
    v = np.abs(v_theta.values)
    f2 = f.values ** 2
    b = m.integrate(f.deriv ** 2)
    if b <= 0.0:
        raise ConfigError(f"profile {f.name!r} is radially constant")
    return RadialFbc(m.integrate(v / m.r * f2), m.integrate(v * v * f2), b, m.integrate(f2, start=r0))


def rescale_profile(p: RadialProfile, lam: float, amplitude: float = 1.0) -> RadialProfile:
    """amplitude * p(lam r) on the rescaled mesh; samples coincide node by node."""
    return RadialProfile(f"{p.name}@x{lam:g}", p.mesh.rescaled(lam), amplitude * p.values,
                         amplitude * lam * p.deriv, p.support / lam)


# ------------------------------------------------------------------ K0

def random_vorticity(g: Grid, rng: np.random.Generator, modes: int = 3) -> np.ndarray:
    """Smooth compactly supported omega_theta = r rho(r) sum_m (a_m cos + b_m sin)(2 pi m z / L).

    Built from continuous coefficients, so the same draw samples one
    function on every grid.
    """
    R = 0.5 * g.r_max * rng.uniform(0.4, 1.0)
    coeffs = rng.standard_normal(3)
    a = rng.standard_normal(modes + 1)
    b = rng.standard_normal(modes + 1)
    r, z = g.mesh()
    s = (r / R) ** 2
    rho = np.polynomial.polynomial.polyval(s, coeffs) * cutoff_fn(r, R / 2.0)
    k = 2.0 * np.pi / g.z_len
    zpart = sum(a[m] * np.cos(k * m * z) + b[m] * np.sin(k * m * z) for m in range(1, modes + 1)) + a[0]
    return r * rho * zpart


def single_mode_vorticity(g: Grid, R: float = 1.0) -> np.ndarray:
    r, z = g.mesh()
    return r * bump(r / R) * np.sin(2.0 * np.pi * z / g.z_len)


def single_mode_R1_oracle(g: Grid, R: float = 1.0, refine: int = 8) -> float:
    """R1 for omega = r bump(r/R) sin(k z) from a dense 1D solve at ``refine`` x resolution.

    With psi = r h(r) sin(k z) the stream equation reduces to
    r^-3 (r^3 h')' - k^2 h = -bump, h even at the axis, h(r_max) = 0.
    Then v_r / r = -k h cos(k z) and the axial factor cancels in the ratio.
    """
    n = refine * g.nr
    dr = g.r_max / n
    r = (np.arange(n) + 0.5) * dr
    rf = np.arange(n + 1) * dr
    k = 2.0 * np.pi / g.z_len
    vol = r ** 3
    A = np.zeros((n, n))
    for j in range(n):
        lo, hi = rf[j] ** 3, rf[j + 1] ** 3
        A[j, j] = -(lo + hi) / (dr * dr * vol[j]) - k * k
        if j > 0:
            A[j, j - 1] = lo / (dr * dr * vol[j])
        if j < n - 1:
            A[j, j + 1] = hi / (dr * dr * vol[j])
        else:
            A[j, j] -= hi / (dr * dr * vol[j])  # antisymmetric ghost: h(r_max) = 0
    src = bump(r / R)
    h = np.linalg.solve(A, -src)
    hp = np.concatenate(([h[0]], h, [-h[-1]]))
    dh = (hp[1:] - hp[:-1]) / dr  # face derivatives
    grad = np.sum(rf * dh * dh) * dr - 0.5 * rf[-1] * dh[-1] ** 2 * dr + k * k * np.sum(r * h * h) * dr
    mass = np.sum(r * src * src) * dr
    return math.sqrt(k * k * grad / mass)


@dataclass(frozen=True)
class K0GridStats:
    shape: tuple[int, int]
    R1: tuple[float, ...]
    R2: tuple[float, ...]
    R1_max: Optional[float]
    R1_median: Optional[float]
    R2_max: Optional[float]
    R2_median: Optional[float]


@dataclass(frozen=True)
class K0Report:
    grids: tuple[K0GridStats, ...]
    R1_drift: Optional[float]
    R2_drift: Optional[float]
    single_mode_R1: Optional[float]
    single_mode_oracle: Optional[float]


def _stats(shape, r1, r2) -> K0GridStats:
    def mm(x):
        return (float(np.max(x)), float(np.median(x))) if x else (None, None)
    return K0GridStats(shape, tuple(r1), tuple(r2), *mm(r1), *mm(r2))


def estimate_K0(size: int = 32, seed: int = 0, shapes: Sequence[tuple[int, int]] = ((64, 64), (128, 128)),
                r_max: float = 2.0, z_len: float = 2.0, single_mode: bool = True,
                fields: Optional[Sequence[Callable[[Grid], np.ndarray]]] = None) -> K0Report:
    """Empirical lower envelope of the constant in ||grad(v_r/r)|| <= K0 ||Omega||
    and ||grad^2(v_r/r)|| <= K0 ||d_z Omega||.

    ``fields`` overrides the seeded ensemble with explicit omega_theta builders.
    Not-applicable ratios (vanishing denominators) are skipped.
    """
    if fields is None:
        if size < 0:
            raise ConfigError(f"ensemble size must be >= 0, got {size!r}")
        fields = [(lambda g, i=i: random_vorticity(g, np.random.default_rng([seed, i]))) for i in range(size)]
    stats = []
    for nr, nz in shapes:
        g = build_grid(nr, nz, r_max, z_len)
        zero = np.zeros(g.shape)
        r1, r2 = [], []
        builders = list(fields) + ([single_mode_vorticity] if single_mode else [])
        for build in builders:
            lr = lemma1_ratios(state_from_arrays(g, zero, build(g)))
            if lr.R1 is not None:
                r1.append(lr.R1)
            if lr.R2 is not None:
                r2.append(lr.R2)
        stats.append(_stats((nr, nz), r1, r2))

    def drift(a, b):
        return None if a is None or b is None else abs(b - a) / b

    sm = orc = None
    if single_mode and shapes:
        g = build_grid(*shapes[-1], r_max, z_len)
        sm = lemma1_ratios(state_from_arrays(g, np.zeros(g.shape), single_mode_vorticity(g))).R1
        orc = single_mode_R1_oracle(g)
    r1d = drift(stats[0].R1_max, stats[-1].R1_max) if len(stats) > 1 else None
    r2d = drift(stats[0].R2_max, stats[-1].R2_max) if len(stats) > 1 else None
    return K0Report(tuple(stats), r1d, r2d, sm, orc)
