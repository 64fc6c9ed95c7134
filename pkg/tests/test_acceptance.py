"""Numbered acceptance criteria, each at its stated tolerance.

Every test prints one ``criterion N PASS|FAIL`` line (also collected into a
terminal-summary section).  Criteria that cannot hold as stated are marked
strict xfail with the reason; their line still reads FAIL.
"""
import math
import time
from functools import lru_cache

import numpy as np
import pytest

from axisns import diagnostics as D
from axisns import ineqlab as L
from axisns.config import config_from_dict
from axisns.fields import EVEN, ODD, ZERO_GHOST, ScalarField, weighted_l2_norm
from axisns.grid import build_grid
from axisns.initial import make_initial_condition
from axisns.io import read_csv
from axisns.manufactured import ManufacturedSolution
from axisns.profiles import cutoff, cutoff_deriv
from axisns.residuals import residual_J_equation, residual_Omega_equation, residual_V_equation
from axisns.simulation import run_simulation
from axisns.solver import TimeStepper, state_from_arrays

from conftest import report

pytestmark = pytest.mark.acceptance


def run_config(kind, n, t_end=1.0, scheme="upwind1", **extra):
    raw = {
        "grid": {"nr": n, "nz": n, "r_max": 2.0, "z_len": 2.0},
        "physics": {"nu": 1.0},
        "time": {"t_end": t_end, "advection_scheme": scheme},
        "ic": {"kind": kind, "amplitude": 1.0, "support_radius": 1.0, "seed": 0},
    }
    for sec, kv in extra.items():
        raw.setdefault(sec, {}).update(kv)
    return config_from_dict(raw)


@lru_cache(maxsize=None)
def timed_run(kind, n):
    t0 = time.perf_counter()
    res = run_simulation(run_config(kind, n), write_files=False)
    return res, time.perf_counter() - t0


def energy_residual(res):
    e0 = res.rows[0].energy
    return max(abs(r.energy_identity_residual) for r in res.rows if r.time <= 1.0) / e0


# ---------------------------------------------------------------- 1

def test_criterion_01_maximum_principle():
    details, ok = [], True
    for kind in ("rigid_swirl_bump", "random_spectrum"):
        res, secs = timed_run(kind, 64)
        g0 = res.rows[0].gamma_linf
        worst = max(r.gamma_linf / g0 - 1.0 for r in res.rows)
        good = res.status == "ok" and all(r.gamma_linf <= g0 * (1 + 1e-12) for r in res.rows) and secs <= 120
        ok &= good
        details.append(f"{kind} max(|G|/|G0|-1)={worst:.3e} rows={len(res.rows)} {secs:.1f}s")
    assert report(1, "discrete maximum principle, 64^2, t<=1", ok, "; ".join(details))


# ---------------------------------------------------------------- 2

@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason=(
    "upwind1 numerical dissipation is an O(h) energy sink once meridional flow is present, so "
    "random_spectrum gains about 2 per halving (1.76 measured); rigid_swirl_bump has no "
    "meridional flow and gains 15"))
def test_criterion_02_energy_identity():
    details, ok = [], True
    for kind in ("rigid_swirl_bump", "random_spectrum"):
        e64 = energy_residual(timed_run(kind, 64)[0])
        e128 = energy_residual(timed_run(kind, 128)[0])
        good = e64 <= 1e-3 and e64 / e128 >= 3.0
        ok &= good
        details.append(f"{kind} 64^2={e64:.3e} 128^2={e128:.3e} gain={e64 / e128:.2f}")
    assert report(2, "energy identity residual / E0", ok, "; ".join(details))


# ---------------------------------------------------------------- 3

def manufactured_errors(n, steps=None, t_end=0.05):
    ms = ManufacturedSolution(width=0.5)
    g = build_grid(n, n, 2.0, 2.0)
    ts = TimeStepper(advection_scheme="centered2", forcing=ms.forcing(g))
    s = ms.state(g)
    if steps is None:
        steps = int(math.ceil(t_end / ts.cfl_dt(s)))
    dt = t_end / steps
    for _ in range(steps):
        s = ts.step(s, dt)
    return s, ms.exact(g, t_end)


def test_criterion_03_manufactured_convergence():
    errs = []
    for n in (32, 64, 128):
        s, (eg, ew) = manufactured_errors(n)
        errs.append((np.abs(s.gamma.values - eg).max(), np.abs(s.omega_theta.values - ew).max()))
    space = [[math.log2(errs[i][k] / errs[i + 1][k]) for i in range(2)] for k in range(2)]
    # fixed 16^2 grid: differences of successive dt halvings remove the spatial floor
    sols = [manufactured_errors(16, steps)[0] for steps in (16, 32, 64, 128)]
    temporal = []
    for name in ("gamma", "omega_theta"):
        v = [getattr(s, name).values for s in sols]
        d = [np.abs(v[i] - v[i + 1]).max() for i in range(3)]
        temporal.append(min(math.log2(d[i] / d[i + 1]) for i in range(2)))
    ok = all(1.7 <= p <= 2.3 for row in space for p in row) and min(temporal) >= 2.7
    detail = (f"space gamma={space[0][0]:.3f},{space[0][1]:.3f} omega={space[1][0]:.3f},{space[1][1]:.3f}; "
              f"time gamma={temporal[0]:.3f} omega={temporal[1]:.3f}")
    assert report(3, "manufactured solution orders", ok, detail)


# ---------------------------------------------------------------- 4

def ring_residuals(n, t_end=0.01):
    s = make_initial_condition(run_config("vortex_ring_swirl", n))
    ts = TimeStepper(advection_scheme="centered2")
    steps = int(math.ceil(t_end / ts.cfl_dt(s)))
    dt = t_end / steps
    prev = s
    for _ in range(steps):
        prev, s = s, ts.step(s, dt)
    return [weighted_l2_norm(f(prev, s)) for f in (residual_J_equation, residual_Omega_equation,
                                                  residual_V_equation)]


def test_criterion_04_transformed_equation_residuals():
    a, b = ring_residuals(64), ring_residuals(128)
    orders = [math.log2(x / y) for x, y in zip(a, b)]
    ok = min(orders) >= 1.7
    detail = ", ".join(f"{n} {x:.2e}->{y:.2e} order {p:.3f}" for n, x, y, p in zip("JOV", a, b, orders))
    assert report(4, "J/Omega/V residual orders 64^2->128^2", ok, detail)


# ---------------------------------------------------------------- 5

@pytest.mark.xfail(strict=True, reason=(
    "the sharp constant of the log-weighted Hardy inequality is 1/4, not 1; the 16384-point "
    "estimates sit above 0.95 only at delta = 0.1 and 0.05 because the mesh stops at r = 1e-8, "
    "and delta = 0.2 gives 0.775"))
def test_criterion_05_hardy_log_inequality():
    ok, parts = True, []
    for d in (0.2, 0.1, 0.05):
        rep = L.hardy_report(d, L.DEFAULT_POINTS, L.R_MIN)
        mesh_ds = L.LabMesh().ds
        good = rep.eigen.value >= 0.95 and rep.min_profile_ratio >= 1 - 5 * mesh_ds
        ok &= good
        parts.append(f"delta={d}: eigen={rep.eigen.value:.4f} min_profile={rep.min_profile_ratio:.3f}")
    assert report(5, "Hardy log inequality best constant >= 0.95", ok, "; ".join(parts))


# ---------------------------------------------------------------- 6

def test_criterion_06_corollary_chain():
    gam = L.log_critical_profile(1.0, 0.25, L.LabMesh())
    rep = L.corollary_chain(gam, 1.0, 0.05, 0.25, 0.1)
    target = math.exp(-math.sqrt(160.0))
    rel = abs(rep.threshold - target) / target
    rel_b = abs(rep.threshold_bisect - target) / target
    ok = rel <= 1e-6 and rel_b <= 1e-6 and rep.holds_21 and rep.holds_22
    detail = (f"delta={rep.threshold:.10e} rel={rel:.1e} bisect rel={rel_b:.1e}; "
              f"{len(rep.rows)} dyadic members, C21_max={rep.C21_max:g} C22_max={rep.C22_max:g}")
    assert report(6, "corollary chain threshold and inequalities", ok, detail)


# ---------------------------------------------------------------- 7

def test_criterion_07_fbc_scaling():
    lam = 2.0
    # lab mesh: v(r) = r phi(r / 0.2), rescaled to lam v(lam r)
    mesh = L.LabMesh()
    r = mesh.r
    v = L.RadialProfile("v", mesh, r * cutoff(r, 0.2), cutoff(r, 0.2) + r * cutoff_deriv(r, 0.2), 0.4)
    vl = L.rescale_profile(v, lam, lam)
    lab_worst = 0.0
    for f in L.dyadic_family(mesh) + L.standard_family(0.1, mesh):
        a = L.radial_fbc(v, f, 0.15)
        b = L.radial_fbc(vl, L.rescale_profile(f, lam), 0.15 / lam)
        for c0 in (0.0, 1.0, 10.0, 100.0):
            for x, y in zip(a.ratios(c0), b.ratios(lam * lam * c0)):
                lab_worst = max(lab_worst, abs(x - y) / x if x > 0 else abs(y))
    # PDE grid: the vortex-ring swirl on 64^2 and on the grid shrunk by lam
    g = build_grid(64, 64, 2.0, 2.0)
    s = make_initial_condition(run_config("vortex_ring_swirl", 64))
    gl = g.rescaled(lam)
    vt = ScalarField(gl, lam * s.v_theta.values, ODD, ZERO_GHOST)
    pde_worst = 0.0
    for f in D.default_fbc_family(g):
        a = D.fbc_integrals(s.v_theta, f, 0.5)
        if a.B <= 0:
            continue
        b = D.fbc_integrals(vt, f.rescaled(lam), 0.5 / lam)
        for c0 in (0.0, 1.0, 10.0, 100.0):
            for x, y in ((a.A1, b.A1), (a.A2, b.A2)):
                p, q = D.fbc_ratio(x, a.D, a.B, c0), D.fbc_ratio(y, b.D, b.B, lam * lam * c0)
                pde_worst = max(pde_worst, abs(p - q) / p if p > 0 else abs(q))
    ok = lab_worst <= 1e-10 and pde_worst <= 1e-3
    detail = f"lab max rel diff {lab_worst:.2e}; PDE grid max rel diff {pde_worst:.2e} (C0 -> lam^2 C0)"
    assert report(7, "FBC scaling invariance, lam = 2", ok, detail)


# ---------------------------------------------------------------- 8

def test_criterion_08_K0_stability():
    rep = L.estimate_K0(32, 0, ((64, 64), (128, 128)))
    sm_rel = abs(rep.single_mode_R1 - rep.single_mode_oracle) / rep.single_mode_oracle
    ok = rep.R1_drift <= 0.1 and rep.R2_drift <= 0.1 and sm_rel <= 0.05
    detail = (f"R1 max {rep.grids[0].R1_max:.4f}->{rep.grids[1].R1_max:.4f} drift {rep.R1_drift:.2%}; "
              f"R2 max {rep.grids[0].R2_max:.4f}->{rep.grids[1].R2_max:.4f} drift {rep.R2_drift:.2%}; "
              f"single mode {rep.single_mode_R1:.5f} vs oracle {rep.single_mode_oracle:.5f}")
    assert report(8, "K0 ensemble drift and single-mode oracle", ok, detail)


# ---------------------------------------------------------------- 9

@pytest.mark.xfail(strict=True, reason=(
    "M0 = (||Omega_0|| + ||V_0^2||) ||Gamma_0|| has a degree-2 and a degree-3 part in the "
    "amplitude, so M0(c v0) = c^2 M0(v0) fails whenever both Omega_0 and V_0 are nonzero"))
def test_criterion_09_M0_dimensionless():
    lam = 2.0
    g = build_grid(64, 64, 2.0, 2.0)
    s = make_initial_condition(run_config("vortex_ring_swirl", 64))
    gl = g.rescaled(lam)
    sl = state_from_arrays(gl, s.gamma.values, lam * lam * s.omega_theta.values)
    m0 = D.scale_invariants(s, 0.5).M0
    m0l = D.scale_invariants(sl, 0.5 / lam).M0
    scale_rel = abs(m0l - m0) / m0
    om = weighted_l2_norm(ScalarField(g, s.omega_theta.values / g.r[:, None], EVEN))
    vsq = math.sqrt(D.v_quartic(s).Vsq_sq)
    gl2 = weighted_l2_norm(s.gamma)
    worst_c2 = worst_split = 0.0
    for c in (0.5, 3.0):
        sc = state_from_arrays(g, c * s.gamma.values, c * s.omega_theta.values)
        mc = D.scale_invariants(sc, 0.5).M0
        worst_c2 = max(worst_c2, abs(mc - c * c * m0) / (c * c * m0))
        split = c * c * om * gl2 + c ** 3 * vsq * gl2
        worst_split = max(worst_split, abs(mc - split) / split)
    ok = scale_rel <= 1e-3 and worst_c2 <= 1e-12
    detail = (f"rescaling rel diff {scale_rel:.2e}; c^2 homogeneity rel diff {worst_c2:.3e}; "
              f"c^2 ||Omega|| ||G|| + c^3 ||V^2|| ||G|| matches to {worst_split:.1e}")
    assert report(9, "M0 dimensionless and c^2-homogeneous", ok, detail)


# ---------------------------------------------------------------- 10

def test_criterion_10_vorticity1_bound():
    res = run_simulation(run_config("vortex_ring_swirl", 64), write_files=False)
    margins = [r.vorticity1_rhs - r.vorticity1_sup for r in res.rows]
    ok = res.status == "ok" and min(margins) >= 0.0
    detail = (f"{len(res.rows)} samples to t={res.rows[-1].time:g}, sup={res.rows[-1].vorticity1_sup:.4e} "
              f"rhs={res.rows[0].vorticity1_rhs:.4e} min margin={min(margins):.4e}")
    assert report(10, "weighted vorticity bound on the ring run", ok, detail)


# ---------------------------------------------------------------- 11

def test_criterion_11_determinism_and_resume(tmp_path):
    cfg = run_config("vortex_ring_swirl", 32, t_end=0.2, diag={"sample_interval": 0.02},
                     output={"snapshot_interval": 0.1})
    run_simulation(cfg, out_dir=tmp_path / "a")
    run_simulation(cfg, out_dir=tmp_path / "b")
    same_csv = (tmp_path / "a/diagnostics.csv").read_bytes() == (tmp_path / "b/diagnostics.csv").read_bytes()
    same_snap = ((tmp_path / "a/snapshots/snap_000001.bin").read_bytes()
                 == (tmp_path / "b/snapshots/snap_000001.bin").read_bytes())
    run_simulation(cfg, out_dir=tmp_path / "c", resume_from=tmp_path / "a/snapshots/snap_000001.bin")
    _, full = read_csv(tmp_path / "a/diagnostics.csv")
    _, resumed = read_csv(tmp_path / "c/diagnostics.csv")
    tail = [row for row in full if row[0] > 0.1 + 1e-15]
    ok = same_csv and same_snap and resumed == tail and len(tail) > 0
    detail = f"csv identical={same_csv}, snapshot identical={same_snap}, resumed {len(resumed)} rows == tail {len(tail)}"
    assert report(11, "determinism and snapshot resume", ok, detail)
