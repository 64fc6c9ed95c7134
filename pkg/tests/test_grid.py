import numpy as np
import pytest
from hypothesis import given, strategies as st

from axisns.errors import ConfigError
from axisns.grid import build_grid, quadrature


def test_unit_grid_centres_and_weights(unit_grid):
    np.testing.assert_allclose(unit_grid.r, [0.125, 0.375, 0.625, 0.875])
    assert unit_grid.weights.sum() == pytest.approx(0.5, rel=1e-12)


def test_weight_sum_rectangle():
    assert build_grid(8, 8, 2.0, 1.0).weights.sum() == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("args", [(3, 8, 1.0, 1.0), (8, 3, 1.0, 1.0), (8, 8, 0.0, 1.0),
                                  (8, 8, 1.0, -1.0), (8, 8, np.inf, 1.0)])
def test_rejects_bad_dimensions(args):
    with pytest.raises(ConfigError):
        build_grid(*args)


@given(st.integers(4, 80), st.integers(4, 80), st.floats(0.1, 10.0), st.floats(0.1, 10.0))
def test_weight_sum_is_exact(nr, nz, r_max, z_len):
    g = build_grid(nr, nz, r_max, z_len)
    assert np.all(g.r > 0) and g.dr > 0 and g.dz > 0
    assert quadrature(g, np.ones(g.shape)) == pytest.approx(r_max ** 2 * z_len / 2, rel=1e-12)


def test_quadrature_examples():
    g = build_grid(4, 4, 1.0, 1.0)
    assert quadrature(g, np.ones(g.shape)) == pytest.approx(0.5)
    g64 = build_grid(64, 64, 1.0, 1.0)
    r, z = g64.mesh()
    assert abs(quadrature(g64, r) - 1.0 / 3.0) < 1e-4
    assert abs(quadrature(g64, np.sin(2 * np.pi * z) * r)) < 1e-12


def test_quadrature_shape_mismatch():
    with pytest.raises(ValueError):
        quadrature(build_grid(4, 4, 1.0, 1.0), np.ones((5, 4)))


@pytest.mark.parametrize("p", [1, 2, 3])
def test_quadrature_second_order(p):
    # exact integral of r^p cos(2 pi z / L) r^? times cos^2 to avoid a zero target
    errs = []
    for n in (16, 32, 64):
        g = build_grid(n, n, 1.0, 1.0)
        r, z = g.mesh()
        f = r ** p * (1.0 + np.cos(2 * np.pi * z))
        errs.append(abs(quadrature(g, f) - 1.0 / (p + 2)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders >= 1.9)


def test_rescaled_grid():
    g = build_grid(8, 6, 2.0, 3.0).rescaled(2.0)
    assert (g.nr, g.nz, g.r_max, g.z_len) == (8, 6, 1.0, 1.5)
