"""Monitored quantities: energy budget, maximum principle, criticality
functionals, weighted vorticity norms, transformed-variable energies and
dimensionless smallness thresholds.

All norms use the measure r dr dz without the 2 pi azimuthal factor.
"""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass, field, fields
from typing import Callable, Optional, Sequence

import numpy as np

from .diffops import curl_axisym, ddz, derived_fields, grad_sq, gradient_sq_density, hessian_sq
from .errors import ConfigError
from .fields import (DIRICHLET, EVEN, EXTRAPOLATE, ODD, ZERO_GHOST, FlowState, ScalarField,
                     axis_trace_sq_integral, pad_r, linf_norm, weighted_l2_norm, weighted_lp_norm)
from .grid import Grid, quadrature
from .profiles import bump, cutoff, cutoff_deriv

DEFAULT_DELTA_SMALL = 0.01


def _safe_ratio(num: float, den: float) -> float:
    """num / den with 0 / 0 -> 0 (not-applicable ratios stay finite)."""
    if den > 0.0:
        return num / den
    return 0.0 if num == 0.0 else math.inf


# ------------------------------------------------------------------- energy

def kinetic_energy(state: FlowState) -> float:
    """E = |v_r|^2 + |v_theta|^2 + |v_z|^2 in the weighted L2 norm."""
    g = state.grid
    return quadrature(g, state.v_r.values ** 2 + state.v_theta.values ** 2 + state.v_z.values ** 2)


def dissipation_rate(state: FlowState) -> float:
    """||grad v||^2."""
    return quadrature(state.grid, gradient_sq_density(state).values)


def energy_ledger(states: Sequence[FlowState], nu: float = 1.0) -> np.ndarray:
    """E(t) + 2 nu (trapezoid of ||grad v||^2 over the series) - E(0) per state."""
    if len(states) == 0:
        return np.zeros(0)
    t = np.array([s.time for s in states])
    e = np.array([kinetic_energy(s) for s in states])
    d = np.array([dissipation_rate(s) for s in states])
    cum = np.concatenate(([0.0], np.cumsum(0.5 * np.diff(t) * (d[1:] + d[:-1]))))
    return e + 2.0 * nu * cum - e[0]


def max_principle_check(series, rel_tol: float = 1e-12) -> tuple[np.ndarray, bool]:
    """Margins ||Gamma_0||_inf - ||Gamma(t)||_inf and whether none drops below -tol.

    ``series`` holds FlowStates or precomputed sup norms of Gamma.
    """
    sups = np.array([linf_norm(s.gamma) if isinstance(s, FlowState) else float(s) for s in series])
    if sups.size == 0:
        return sups, True
    margins = sups[0] - sups
    return margins, bool(np.all(margins >= -rel_tol * sups[0]))


def log_criticality(gamma: ScalarField, delta0: float) -> float:
    """Smallest C with |Gamma(r, z)| <= C |ln r|^-2 at all samples with r <= delta0."""
    if not 0.0 < delta0 < 0.5:
        raise ConfigError(f"delta0 must lie in (0, 1/2), got {delta0!r}")
    g = gamma.grid
    rows = g.r <= delta0
    if not rows.any():
        return 0.0
    weight = np.log(g.r[rows]) ** 2
    return float(np.max(np.abs(gamma.values[rows]) * weight[:, None]))


def boundary_leakage(state: FlowState, nu: float = 1.0) -> float:
    """|energy flux| through the outer face r = r_max (viscous plus advective)."""
    g = state.grid
    flux = np.zeros(g.nz)
    faces = {}
    for f in (state.v_r, state.v_theta, state.v_z):
        p = pad_r(f.values, f.parity, f.outer)
        val = 0.5 * (p[-1] + p[-2])
        flux += nu * val * (p[-1] - p[-2]) / g.dr
        faces[f.name] = val
    ke = 0.5 * sum(v * v for v in faces.values())
    flux -= faces["v_r"] * ke
    return abs(float(np.sum(flux) * g.r_max * g.dz))


# ------------------------------------------------------- weighted vorticity

@dataclass(frozen=True)
class InitialReference:
    """Initial-data scalars entering the monitored bounds."""

    energy: float
    gamma_linf: float
    gamma_l2: float
    gamma_l3: float
    r_omega_r_sq: float
    r_omega_z_sq: float
    r2_omega_theta_sq: float

    @classmethod
    def from_state(cls, state: FlowState) -> "InitialReference":
        w = weighted_vorticity_norms(state)
        return cls(
            energy=kinetic_energy(state),
            gamma_linf=linf_norm(state.gamma),
            gamma_l2=weighted_l2_norm(state.gamma),
            gamma_l3=weighted_lp_norm(state.gamma, 3),
            r_omega_r_sq=w.r_omega_r ** 2,
            r_omega_z_sq=w.r_omega_z ** 2,
            r2_omega_theta_sq=w.r2_omega_theta ** 2,
        )

    def vorticity1_rhs(self) -> float:
        """||r w^r_0||^2 + ||r w^z_0||^2 + 4 (||Gamma_0||_inf^2 + 1) ||v_0||^2."""
        return self.r_omega_r_sq + self.r_omega_z_sq + 4.0 * (self.gamma_linf ** 2 + 1.0) * self.energy

    def vorticity2_log_rhs(self, t: float) -> float:
        """log of the r^2 w^theta bound with its generic constant set to 1.

        (||r^2 w_0||^2 + (||v_0||^4 + ||Gamma_0||_3^2) ||v_0||^2) exp(t / (||Gamma_0||_3^2 + ||v_0||^4)),
        returned as a logarithm because the exponent is large for small data.
        """
        s = self.gamma_l3 ** 2 + self.energy ** 2
        pre = self.r2_omega_theta_sq + s * self.energy
        if pre <= 0.0:
            return -math.inf
        return math.log(pre) + (t / s if s > 0 else 0.0)


@dataclass(frozen=True)
class WeightedVorticity:
    r_omega_r: float
    r2_omega_theta: float
    r_omega_z: float


def _weighted_components(state: FlowState):
    g = state.grid
    r = g.r[:, None]
    w = curl_axisym(state.v_r, state.v_theta, state.v_z)
    rwr = ScalarField(g, r * w.omega_r.values, EVEN, EXTRAPOLATE, "r_omega_r")
    rwz = ScalarField(g, r * w.omega_z.values, ODD, EXTRAPOLATE, "r_omega_z")
    # the prognostic omega_theta is the more accurate sample of the same curl component
    r2wt = ScalarField(g, r * r * state.omega_theta.values, ODD, DIRICHLET, "r2_omega_theta")
    return rwr, r2wt, rwz


def weighted_vorticity_norms(state: FlowState) -> WeightedVorticity:
    """(||r w^r||, ||r^2 w^theta||, ||r w^z||)."""
    rwr, r2wt, rwz = _weighted_components(state)
    return WeightedVorticity(weighted_l2_norm(rwr), weighted_l2_norm(r2wt), weighted_l2_norm(rwz))


def vorticity_gradient_rates(state: FlowState) -> tuple[float, float]:
    """(||grad(r w^r)||^2 + ||grad(r w^z)||^2, ||grad(r^2 w^theta)||^2)."""
    g = state.grid
    rwr, r2wt, rwz = _weighted_components(state)
    v1 = quadrature(g, grad_sq(rwr) + grad_sq(rwz))
    v2 = quadrature(g, grad_sq(r2wt))
    return v1, v2


# -------------------------------------------------------- J, Omega and V

@dataclass(frozen=True)
class JOmegaEnergy:
    J_sq: float
    Omega_sq: float
    gradJ_sq: float
    gradOmega_sq: float
    J_axis_trace: float
    Omega_axis_trace: float


def jomega_energy(state: FlowState) -> JOmegaEnergy:
    """Squared norms of J, Omega, their gradients, and axis traces of their squares."""
    d = derived_fields(state)
    g = state.grid
    return JOmegaEnergy(
        J_sq=weighted_l2_norm(d.J) ** 2,
        Omega_sq=weighted_l2_norm(d.Omega) ** 2,
        gradJ_sq=quadrature(g, grad_sq(d.J)),
        gradOmega_sq=quadrature(g, grad_sq(d.Omega)),
        J_axis_trace=axis_trace_sq_integral(d.J),
        Omega_axis_trace=axis_trace_sq_integral(d.Omega),
    )


@dataclass(frozen=True)
class VQuartic:
    Vsq_sq: float
    gradVsq_sq: float
    rinvVsq_sq: float
    vtheta_l4: float


def v_quartic(state: FlowState) -> VQuartic:
    """(|| |V|^2 ||^2, || grad |V|^2 ||^2, || r^-1 |V|^2 ||^2, ||v_theta||_L4)."""
    g = state.grid
    r = g.r[:, None]
    vt = state.v_theta.values
    vsq = ScalarField(g, vt * vt / r, ODD, ZERO_GHOST, "Vsq")
    return VQuartic(
        Vsq_sq=weighted_l2_norm(vsq) ** 2,
        gradVsq_sq=quadrature(g, grad_sq(vsq)),
        rinvVsq_sq=quadrature(g, (vt * vt / (r * r)) ** 2),
        vtheta_l4=weighted_lp_norm(state.v_theta, 4),
    )


# ------------------------------------------------------------- v_r / r

def vr_over_r(state: FlowState) -> ScalarField:
    g = state.grid
    return ScalarField(g, state.v_r.values / g.r[:, None], EVEN, DIRICHLET, "vr_over_r")


@dataclass(frozen=True)
class Lemma1Ratios:
    """R1 = ||grad(v_r/r)|| / ||Omega||, R2 = ||grad^2(v_r/r)|| / ||d_z Omega||.

    A ratio is None when its denominator vanishes.
    """

    R1: Optional[float]
    R2: Optional[float]
    grad_q: float
    hess_q: float
    omega_l2: float
    dz_omega_l2: float


def lemma1_ratios(state: FlowState) -> Lemma1Ratios:
    g = state.grid
    q = vr_over_r(state)
    gq = math.sqrt(quadrature(g, grad_sq(q)))
    hq = math.sqrt(quadrature(g, hessian_sq(q)))
    Om = state.omega_theta.values / g.r[:, None]
    om = math.sqrt(quadrature(g, Om * Om))
    dzo = math.sqrt(quadrature(g, ddz(Om, g) ** 2))
    return Lemma1Ratios(
        R1=gq / om if om > 0.0 else None,
        R2=hq / dzo if dzo > 0.0 else None,
        grad_q=gq, hess_q=hq, omega_l2=om, dz_omega_l2=dzo,
    )


@dataclass(frozen=True)
class InterpCheck:
    """||f||_inf against bound = ||grad f||^(1/2) ||grad^2 f||^(1/2); ratio = linf / bound."""

    linf: float
    bound: float
    ratio: Optional[float]


def interp_ratio(f: ScalarField) -> InterpCheck:
    g = f.grid
    linf = linf_norm(f)
    bound = math.sqrt(math.sqrt(quadrature(g, grad_sq(f))) * math.sqrt(quadrature(g, hessian_sq(f))))
    return InterpCheck(linf, bound, linf / bound if bound > 0.0 else None)


def vr_over_r_interp_check(state: FlowState) -> InterpCheck:
    return interp_ratio(vr_over_r(state))


# -------------------------------------------------------- scale invariants

@dataclass(frozen=True)
class ScaleInvariantReport:
    M0: float
    M1: float
    r0: float
    delta: float
    gamma0_linf: float
    gamma_linf_small_r: float
    margin_M0: float
    margin_M1: float
    degenerate: bool


def small_r_sup(gamma: ScalarField, r0: float) -> float:
    rows = gamma.grid.r <= r0
    return float(np.max(np.abs(gamma.values[rows]))) if rows.any() else 0.0


def scale_invariants(state0: FlowState, r0: float, delta: float = DEFAULT_DELTA_SMALL,
                     gamma_small_r_sup: Optional[float] = None) -> ScaleInvariantReport:
    """M0 = (||Omega_0|| + ||V_0^2||) ||Gamma_0||_2 and
    M1 = (||V_0^2|| + ||Omega_0|| + r0^-2 ||v_0|| ||Gamma_0||_inf^(3/2)) ||Gamma_0||_2,
    with smallness margins delta / M0 - ||Gamma_0||_inf and
    delta / M1 - sup_t ||Gamma||_inf(r <= r0).

    Zero data gives M0 = M1 = 0 and infinite margins, flagged ``degenerate``.
    """
    if not r0 > 0.0:
        raise ConfigError(f"r0 must be > 0, got {r0!r}")
    g = state0.grid
    om = weighted_l2_norm(ScalarField(g, state0.omega_theta.values / g.r[:, None], EVEN))
    vq = v_quartic(state0)
    vsq = math.sqrt(vq.Vsq_sq)
    gl2 = weighted_l2_norm(state0.gamma)
    ginf = linf_norm(state0.gamma)
    v_l2 = math.sqrt(kinetic_energy(state0))
    m0 = (om + vsq) * gl2
    m1 = (vsq + om + v_l2 * ginf ** 1.5 / (r0 * r0)) * gl2
    small = small_r_sup(state0.gamma, r0) if gamma_small_r_sup is None else gamma_small_r_sup
    degenerate = m0 == 0.0 or m1 == 0.0
    return ScaleInvariantReport(
        M0=m0, M1=m1, r0=r0, delta=delta, gamma0_linf=ginf, gamma_linf_small_r=small,
        margin_M0=delta / m0 - ginf if m0 > 0 else math.inf,
        margin_M1=delta / m1 - small if m1 > 0 else math.inf,
        degenerate=degenerate,
    )


# ------------------------------------------------------------------ FBC

@dataclass(frozen=True)
class TestFunction:
    """Tensor test function f(r, z) = radial(r) * axial(z).

    ``radial`` returns (values, d/dr values); derivatives are analytic.
    """

    name: str
    radial: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]] = field(repr=False)
    axial: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def sample(self, g: Grid) -> tuple[np.ndarray, np.ndarray]:
        rho, drho = self.radial(g.r)
        zeta = self.axial(g.z)
        return rho[:, None] * zeta[None, :], drho[:, None] * zeta[None, :]

    def rescaled(self, lam: float) -> "TestFunction":
        """f(lam .) as a test function."""
        rad, ax = self.radial, self.axial

        def radial(r):
            v, d = rad(lam * r)
            return v, lam * d

        return TestFunction(f"{self.name}@x{lam:g}", radial, lambda z: ax(lam * z))


@dataclass(frozen=True)
class FbcIntegrals:
    A1: float  # int (|v_theta| / r) f^2
    A2: float  # int |v_theta|^2 f^2
    B: float   # int |d_r f|^2
    D: float   # int_{r >= r0} f^2


def fbc_integrals(v_theta: ScalarField, f: TestFunction, r0: float) -> FbcIntegrals:
    g = v_theta.grid
    val, dr = f.sample(g)
    v = np.abs(v_theta.values)
    f2 = val * val
    outer = (g.r >= r0)[:, None]
    return FbcIntegrals(
        A1=quadrature(g, v / g.r[:, None] * f2),
        A2=quadrature(g, v * v * f2),
        B=quadrature(g, dr * dr),
        D=quadrature(g, np.where(outer, f2, 0.0)),
    )


def fbc_ratio(a: float, d: float, b: float, c0: float) -> float:
    """[a - c0 d]^+ / b."""
    return max(a - c0 * d, 0.0) / b


@dataclass(frozen=True)
class FbcReport:
    """Estimated C* and delta* per C0, as suprema over the sampled family.

    The estimates are lower bounds on the true best constants.
    """

    r0: float
    c0_grid: tuple[float, ...]
    c_star: tuple[float, ...]
    delta_star: tuple[float, ...]
    family: tuple[str, ...]
    worst_c_star: tuple[str, ...]
    worst_delta_star: tuple[str, ...]
    excluded: tuple[str, ...]


def fbc_report(v_theta: ScalarField, family: Sequence[TestFunction], r0: float,
               c0_grid: Sequence[float] = (0.0, 1.0, 10.0, 100.0)) -> FbcReport:
    if len(family) == 0:
        raise ConfigError("FBC test-function family is empty")
    rows = []
    excluded = []
    for f in family:
        it = fbc_integrals(v_theta, f, r0)
        if it.B <= 0.0:
            excluded.append(f"{f.name}: radially constant, B = 0")
            continue
        rows.append((f.name, it))
    if not rows:
        raise ConfigError("every FBC test function is radially constant (B = 0)")
    cs, ds, wc, wd = [], [], [], []
    for c0 in c0_grid:
        r1 = [fbc_ratio(it.A1, it.D, it.B, c0) for _, it in rows]
        r2 = [fbc_ratio(it.A2, it.D, it.B, c0) for _, it in rows]
        i1, i2 = int(np.argmax(r1)), int(np.argmax(r2))
        cs.append(r1[i1])
        ds.append(r2[i2])
        wc.append(rows[i1][0])
        wd.append(rows[i2][0])
    return FbcReport(r0, tuple(float(c) for c in c0_grid), tuple(cs), tuple(ds),
                     tuple(n for n, _ in rows), tuple(wc), tuple(wd), tuple(excluded))


def _radial_cutoff(delta):
    return lambda r: (cutoff(r, delta), cutoff_deriv(r, delta))


def _log_critical(delta0):
    def radial(r):
        lr = np.log(r)
        phi, dphi = cutoff(r, delta0), cutoff_deriv(r, delta0)
        return -phi / lr, -dphi / lr + phi / (r * lr * lr)
    return radial


def _random_radial(R, coeffs):
    # even polynomial in r / R times the smooth cut-off: regular on the axis
    def radial(r):
        s = r / R
        p = np.polynomial.polynomial.polyval(s * s, coeffs)
        dp = np.polynomial.polynomial.polyval(s * s, np.polynomial.polynomial.polyder(coeffs)) * 2 * s / R
        phi, dphi = cutoff(r, R / 2), cutoff_deriv(r, R / 2)
        return p * phi, dp * phi + p * dphi
    return radial


def default_fbc_family(g: Grid, delta0: float = 0.25, size: int = 8, seed: int = 0) -> list[TestFunction]:
    """Dyadic cut-offs, the log-critical profile and seeded random radial profiles,
    each times an axial factor (constant, a centred bump, one Fourier mode)."""
    zc, zl = 0.5 * g.z_len, g.z_len
    axials = {
        "one": lambda z: np.ones_like(z),
        "zbump": lambda z: bump((z - zc) / (0.4 * zl)),
        "cos1": lambda z: np.cos(2.0 * np.pi * z / zl),
    }
    radials = {}
    m_max = max(1, int(math.log2(g.nr)))
    for m in range(1, m_max + 1):
        d = 2.0 ** -m
        if 2.0 * d >= g.r_max or d < 2.0 * g.dr:
            continue
        radials[f"dyadic{m}"] = _radial_cutoff(d)
    if 2.0 * delta0 < g.r_max:
        radials["logcrit"] = _log_critical(delta0)
    rng = np.random.default_rng(seed)
    for i in range(size):
        coeffs = rng.standard_normal(4)
        R = g.r_max * rng.uniform(0.1, 1.0)
        radials[f"random{i}"] = _random_radial(R, coeffs)
    return [TestFunction(f"{rn}*{an}", rf, af) for rn, rf in radials.items() for an, af in axials.items()]


# ----------------------------------------------------------- diagnostics row

@dataclass(frozen=True)
class DiagnosticsRow:
    time: float
    energy: float
    dissipation: float
    energy_identity_residual: float
    gamma_linf: float
    gamma_l2: float
    gamma_l3: float
    max_principle_margin: float
    log_criticality_C: float
    J_l2: float
    Omega_l2: float
    gradJ_l2: float
    gradOmega_l2: float
    J_axis_trace: float
    Omega_axis_trace: float
    Vsq_l2: float
    gradVsq_l2: float
    rinvVsq_l2: float
    vtheta_l4: float
    r_omega_r_l2: float
    r2_omega_theta_l2: float
    r_omega_z_l2: float
    vorticity1_sup: float
    vorticity1_integral: float
    vorticity1_rhs: float
    vorticity2_sup: float
    vorticity2_integral: float
    vorticity2_log_rhs_unit: float
    vorticity2_C0_fit: float
    lemma1_R1: float
    lemma1_R2: float
    vr_over_r_linf: float
    boundary_leakage: float

    def values(self) -> tuple[float, ...]:
        return astuple(self)


COLUMNS = tuple(f.name for f in fields(DiagnosticsRow))


@dataclass
class RunAccumulators:
    """Time integrals and running suprema carried along a run (trapezoid per step)."""

    dissipation: float = 0.0        # 2 nu int ||grad v||^2
    vorticity1_integral: float = 0.0
    vorticity2_integral: float = 0.0
    vorticity1_sup: float = 0.0
    vorticity2_sup: float = 0.0
    gamma_small_r_sup: float = 0.0
    last_rates: tuple[float, float, float] = (0.0, 0.0, 0.0)

    @staticmethod
    def rates(state: FlowState) -> tuple[float, float, float]:
        v1, v2 = vorticity_gradient_rates(state)
        return dissipation_rate(state), v1, v2

    @classmethod
    def start(cls, state: FlowState, r0: float) -> "RunAccumulators":
        acc = cls(last_rates=cls.rates(state))
        acc.observe(state, r0)
        return acc

    def observe(self, state: FlowState, r0: float) -> None:
        w = weighted_vorticity_norms(state)
        self.vorticity1_sup = max(self.vorticity1_sup, w.r_omega_r ** 2 + w.r_omega_z ** 2)
        self.vorticity2_sup = max(self.vorticity2_sup, w.r2_omega_theta ** 2)
        self.gamma_small_r_sup = max(self.gamma_small_r_sup, small_r_sup(state.gamma, r0))

    def advance(self, state: FlowState, dt: float, nu: float, r0: float) -> None:
        new = self.rates(state)
        old = self.last_rates
        self.dissipation += nu * dt * (old[0] + new[0])
        self.vorticity1_integral += 0.5 * dt * (old[1] + new[1])
        self.vorticity2_integral += 0.5 * dt * (old[2] + new[2])
        self.last_rates = new
        self.observe(state, r0)


def compute_row(state: FlowState, ref: InitialReference, acc: RunAccumulators,
                delta0: float) -> DiagnosticsRow:
    g = state.grid
    e = kinetic_energy(state)
    ginf = linf_norm(state.gamma)
    jo = jomega_energy(state)
    vq = v_quartic(state)
    w = weighted_vorticity_norms(state)
    l1 = lemma1_ratios(state)
    log_rhs2 = ref.vorticity2_log_rhs(state.time)
    lhs2 = acc.vorticity2_sup + acc.vorticity2_integral
    if lhs2 == 0.0:
        fit2 = 0.0
    else:
        fit2 = math.exp(min(math.log(lhs2) - log_rhs2, 700.0)) if math.isfinite(log_rhs2) else math.inf
    return DiagnosticsRow(
        time=state.time,
        energy=e,
        dissipation=acc.dissipation,
        energy_identity_residual=e + acc.dissipation - ref.energy,
        gamma_linf=ginf,
        gamma_l2=weighted_l2_norm(state.gamma),
        gamma_l3=weighted_lp_norm(state.gamma, 3),
        max_principle_margin=ref.gamma_linf - ginf,
        log_criticality_C=log_criticality(state.gamma, delta0),
        J_l2=math.sqrt(jo.J_sq),
        Omega_l2=math.sqrt(jo.Omega_sq),
        gradJ_l2=math.sqrt(jo.gradJ_sq),
        gradOmega_l2=math.sqrt(jo.gradOmega_sq),
        J_axis_trace=jo.J_axis_trace,
        Omega_axis_trace=jo.Omega_axis_trace,
        Vsq_l2=math.sqrt(vq.Vsq_sq),
        gradVsq_l2=math.sqrt(vq.gradVsq_sq),
        rinvVsq_l2=math.sqrt(vq.rinvVsq_sq),
        vtheta_l4=vq.vtheta_l4,
        r_omega_r_l2=w.r_omega_r,
        r2_omega_theta_l2=w.r2_omega_theta,
        r_omega_z_l2=w.r_omega_z,
        vorticity1_sup=acc.vorticity1_sup,
        vorticity1_integral=acc.vorticity1_integral,
        vorticity1_rhs=ref.vorticity1_rhs(),
        vorticity2_sup=acc.vorticity2_sup,
        vorticity2_integral=acc.vorticity2_integral,
        vorticity2_log_rhs_unit=log_rhs2 if math.isfinite(log_rhs2) else 0.0,
        vorticity2_C0_fit=fit2,
        lemma1_R1=l1.R1 if l1.R1 is not None else 0.0,
        lemma1_R2=l1.R2 if l1.R2 is not None else 0.0,
        vr_over_r_linf=linf_norm(vr_over_r(state)),
        boundary_leakage=boundary_leakage(state),
    )
