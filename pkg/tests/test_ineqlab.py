import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from axisns import ineqlab as L
from axisns.errors import ConfigError, HypothesisViolation
from axisns.grid import build_grid
from axisns.profiles import cutoff as phi, cutoff_deriv as dphi

MESH = L.LabMesh()


# ------------------------------------------------------------------ cutoff

def test_cutoff_values():
    d = 0.1
    assert phi(np.array([d / 2]), d)[0] == 1.0
    assert phi(np.array([3 * d]), d)[0] == 0.0
    p = L.cutoff(d, MESH)
    assert p.values[0] == 1.0 and p.values[-1] == 0.0


@given(d=st.floats(0.001, 0.2))
def test_cutoff_slope_scales_inversely(d):
    a = L.cutoff(d, MESH)
    b = L.cutoff(2 * d, MESH.rescaled(0.5))
    assert np.abs(b.deriv).max() == pytest.approx(0.5 * np.abs(a.deriv).max(), rel=1e-10)


@pytest.mark.parametrize("d", [0.0, -0.1, 0.5, 0.6])
def test_cutoff_rejects_delta(d):
    with pytest.raises(ConfigError):
        L.cutoff(d, MESH)


# ------------------------------------------------------------------ Hardy

def _hardy_oracle(g, dg, support, r_min):
    """LHS through u = 1 / |ln r| (dr / (r ln^2 r) = du), RHS directly."""
    lhs = quad(lambda u: g(math.exp(-1.0 / u)) ** 2, 1.0 / abs(math.log(r_min)),
               1.0 / abs(math.log(support)), epsabs=0, epsrel=1e-12, limit=400)[0]
    rhs = quad(lambda r: dg(r) ** 2 * r, support / 2, support, epsabs=0, epsrel=1e-12, limit=400)[0]
    return lhs, rhs


def test_hardy_cutoff_matches_quadrature_oracle():
    d = 0.1
    h = L.hardy_log_ratio(L.cutoff(d, MESH))
    lhs, rhs = _hardy_oracle(lambda r: phi(r, d), lambda r: dphi(r, d), 2 * d, MESH.r_min)
    assert h.lhs == pytest.approx(lhs, rel=1e-8)
    assert h.rhs == pytest.approx(rhs, rel=1e-8)
    assert h.ratio >= 1.0
    assert h.lhs_tail == pytest.approx(1.0 / abs(math.log(MESH.r_min)))


def test_hardy_linear_cutoff_ratio():
    d = 0.1
    h = L.hardy_log_ratio(L.power_cutoff(1.0, d, MESH))
    lhs = quad(lambda u: (math.exp(-1 / u) * phi(math.exp(-1 / u), d)) ** 2,
               1 / abs(math.log(MESH.r_min)), 1 / abs(math.log(2 * d)), epsrel=1e-12, limit=400)[0]
    assert h.lhs == pytest.approx(lhs, rel=1e-8)
    assert h.ratio >= 1.0


@given(c=st.floats(1e-6, 1e6) | st.floats(-1e6, -1e-6))
def test_hardy_ratio_homogeneous(c):
    p = L.inverse_log_cutoff(0.1, L.LabMesh(n=1024))
    assert L.hardy_log_ratio(c * p).ratio == pytest.approx(L.hardy_log_ratio(p).ratio, rel=1e-12)


def test_hardy_rejects_wide_support():
    with pytest.raises(ConfigError):
        L.hardy_log_ratio(L.cutoff(0.3, MESH))


def test_hardy_eigen_refinement_is_monotone():
    vals = [L.hardy_best_constant(0.1, n).value for n in (1025, 2049, 4097, 8193)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))
    assert abs(vals[-1] - vals[-2]) < 1e-3


def test_hardy_eigen_matches_rayleigh_quotient():
    e = L.hardy_best_constant(0.1, 2049)
    assert e.rayleigh == pytest.approx(e.value, rel=1e-9)


def test_hardy_eigen_below_profile_ratios():
    rep = L.hardy_report(0.1, 4096)
    assert rep.eigen.value <= rep.min_profile_ratio


def test_hardy_eigen_nonincreasing_in_delta_at_fixed_inner_radius():
    vals = [L.hardy_best_constant(d, 4097).value for d in (0.2, 0.1, 0.05)]
    assert vals[0] <= vals[1] <= vals[2]


def test_hardy_eigen_drifts_down_as_inner_radius_shrinks():
    """The sharp constant of the log-weighted inequality is 1/4; pushing the
    inner radius toward the axis exposes it."""
    vals = [L.hardy_best_constant(0.1, 4097, rm).value for rm in (1e-4, 1e-8, 1e-16, 1e-32)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 0.95
    assert vals[-1] > 0.25


def test_hardy_eigen_rejects_delta():
    with pytest.raises(ConfigError):
        L.hardy_best_constant(0.25, 64)


# ------------------------------------------------------------------ chain

def test_threshold_closed_form_and_bisection():
    t = L.threshold_delta(1.0, 0.1)
    assert t == pytest.approx(math.exp(-math.sqrt(160.0)), rel=1e-12)
    assert L.threshold_delta_bisect(1.0, 0.1) == pytest.approx(t, rel=1e-12)
    assert 16.0 / math.log(t) ** 2 == pytest.approx(0.1, rel=1e-12)


@given(C1=st.floats(0.1, 10), ds=st.floats(0.01, 1.0))
def test_threshold_bisection_agrees(C1, ds):
    assert L.threshold_delta_bisect(C1, ds) == pytest.approx(L.threshold_delta(C1, ds), rel=1e-9)


def test_corollary_chain_log_critical_profile():
    gam = L.log_critical_profile(1.0, 0.25, MESH)
    rep = L.corollary_chain(gam, 1.0, 0.05)
    assert rep.holds_21 and rep.holds_22
    assert math.isfinite(rep.C21_max) and math.isfinite(rep.C22_max)
    assert len(rep.rows) == len(L.dyadic_family(MESH))


def test_corollary_chain_zero_swirl():
    rep = L.corollary_chain(0.0 * L.log_critical_profile(1.0, 0.25, MESH), 1.0, 0.05)
    assert rep.C21_max == 0.0 and rep.C22_max == 0.0 and rep.leading_22 == 0.0


def test_corollary_chain_leading_term_scales_like_inverse_log_square():
    gam = L.log_critical_profile(1.0, 0.25, MESH)
    a = L.corollary_chain(gam, 1.0, 0.05).leading_22
    b = L.corollary_chain(gam, 1.0, 0.025).leading_22
    expected = (math.log(0.025) / math.log(0.05)) ** 2
    assert a / b == pytest.approx(expected, rel=0.05)


def test_corollary_chain_rejects_supercritical_profile():
    gam = L.log_critical_profile(2.0, 0.25, MESH)
    with pytest.raises(HypothesisViolation) as info:
        L.corollary_chain(gam, 1.0, 0.05)
    assert 0.0 < info.value.radius <= 0.25


@pytest.mark.parametrize("delta, delta0", [(0.2, 0.25), (0.0, 0.25), (0.05, 0.6)])
def test_corollary_chain_rejects_scales(delta, delta0):
    with pytest.raises(ConfigError):
        L.corollary_chain(L.log_critical_profile(1.0, 0.25, MESH), 1.0, delta, delta0)


# ------------------------------------------------------------- radial FBC

@given(lam=st.floats(0.25, 8.0))
def test_radial_fbc_scale_invariance(lam):
    mesh = L.LabMesh(n=1024)
    v = L.RadialProfile("v", mesh, *(lambda r: (r * phi(r, 0.2), phi(r, 0.2) + r * dphi(r, 0.2)))(mesh.r), 0.4)
    f = L.cutoff(0.1, mesh)
    a = L.radial_fbc(v, f, 0.15)
    b = L.radial_fbc(L.rescale_profile(v, lam, lam), L.rescale_profile(f, lam), 0.15 / lam)
    for c0 in (0.0, 1.0, 10.0):
        for x, y in zip(a.ratios(c0), b.ratios(lam * lam * c0)):
            assert y == pytest.approx(x, rel=1e-10, abs=1e-300)


# ------------------------------------------------------------------ K0

def test_K0_zero_field_gives_empty_report():
    rep = L.estimate_K0(fields=[lambda g: np.zeros(g.shape)], single_mode=False, shapes=((16, 16),))
    st_ = rep.grids[0]
    assert st_.R1 == () and st_.R1_max is None and st_.R2_max is None
    assert rep.R1_drift is None and rep.single_mode_R1 is None


def test_K0_single_mode_never_lowers_max():
    kw = dict(size=4, seed=1, shapes=((32, 32),))
    without = L.estimate_K0(single_mode=False, **kw).grids[0]
    with_ = L.estimate_K0(single_mode=True, **kw).grids[0]
    assert with_.R1_max >= without.R1_max and with_.R2_max >= without.R2_max


def test_K0_seeded_ensemble_is_deterministic():
    a = L.estimate_K0(size=3, seed=5, shapes=((16, 16),), single_mode=False)
    b = L.estimate_K0(size=3, seed=5, shapes=((16, 16),), single_mode=False)
    assert a == b


def test_single_mode_R1_matches_oracle():
    from axisns.diagnostics import lemma1_ratios
    from axisns.solver import state_from_arrays
    g = build_grid(64, 64, 2.0, 2.0)
    r1 = lemma1_ratios(state_from_arrays(g, np.zeros(g.shape), L.single_mode_vorticity(g))).R1
    assert r1 == pytest.approx(L.single_mode_R1_oracle(g), rel=0.05)
