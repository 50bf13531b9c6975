import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lagspec.eigenfunctions import g_closed_form
from lagspec.errors import ResolutionError
from lagspec.export import grid_csv, pgm_bytes
from lagspec.family import conformal_factor, derive_params
from lagspec.nodal import (NodalGrid, count_nodal_domains, expected_counts, g1_zero_lines,
                           g1_zero_offset, nodal_counts, nodal_report, sample_g, sign_map)


def test_g1_at_origin(k52):
    g = sample_g(k52, 1, 64, 64)
    b = k52.b
    assert g1_value(k52, 0.0) == pytest.approx((b**3 - 1) / (3 * b * b), rel=1e-12)
    assert g.values.shape == (64, 64)


def g1_value(params, x):
    return float(g_closed_form(params, 1, np.array([x]), np.array([0.0]))[0])


def test_closed_form_zeros(k52):
    y = np.linspace(0, k52.Ly, 17)
    quarter = k52.Lx / 4
    assert np.max(np.abs(g_closed_form(k52, 2, np.full_like(y, quarter), y))) <= 1e-12
    assert np.max(np.abs(g_closed_form(k52, 6, np.zeros_like(y), y))) <= 1e-15


def test_cell_centred_grid(k52):
    g = sample_g(k52, 3, 128, 64)
    assert g.x[0] == pytest.approx(0.5 * k52.Lx / 128)
    assert g.y[-1] == pytest.approx(k52.Ly * (1 - 0.5 / 64))
    assert np.all(g.values != 0)


@pytest.fixture(scope="module")
def report52(k52):
    return nodal_report(k52, 512, 512)


def test_counts_5_2(report52):
    assert report52.counts == [3, 8, 8, 6, 6, 4, 4]
    assert report52.refined_counts == report52.counts
    assert report52.match and report52.stable


def test_torus_control(report52):
    assert report52.torus_g1 == 4


def test_courant_number(report52):
    assert report52.courant == 8


@pytest.mark.parametrize("n,m,expected", [
    (5, 2, [3, 8, 8, 6, 6, 4, 4]),
    (7, 4, [3, 12, 12, 10, 10, 4, 4]),
    (11, 2, [3, 16, 16, 10, 10, 12, 12]),
])
def test_expected_counts(n, m, expected):
    assert expected_counts(derive_params(n, m)) == expected


def test_counts_7_4(k74):
    assert nodal_counts(k74, 512, 512) == [3, 12, 12, 10, 10, 4, 4]


@pytest.mark.parametrize("scale", [0.0, 1e-9, 1e-6])
def test_epsilon_stability(k52, scale):
    for i in range(1, 8):
        g = sample_g(k52, i, 256, 256)
        eps = scale * np.max(np.abs(g.values))
        assert count_nodal_domains(g, eps) == expected_counts(k52)[i - 1]


def test_epsilon_too_large(k52):
    g = sample_g(k52, 2, 256, 256)
    with pytest.raises(ResolutionError, match="excludes"):
        count_nodal_domains(g, 0.9 * np.max(np.abs(g.values)))
    with pytest.raises(ValueError):
        count_nodal_domains(g, -1.0)


def test_coarse_grid_rejected(k52):
    with pytest.raises(ResolutionError):
        sample_g(k52, 2, 512, 16)
    with pytest.raises(ResolutionError):
        sample_g(k52, 6, 32, 512)


def make_grid(values):
    Nx, Ny = values.shape
    return NodalGrid(None, 0, Nx, Ny, np.arange(Nx), np.arange(Ny), values)


@given(st.integers(2, 9), st.integers(2, 9), st.integers(0, 2**32 - 1),
       st.sampled_from(["klein", "torus"]))
@settings(max_examples=80, deadline=None)
def test_label_matches_queue(Nx, Ny, seed, gluing):
    values = np.random.default_rng(seed).choice([-1.0, 1.0], size=(Nx, Ny))
    g = make_grid(values)
    assert (count_nodal_domains(g, gluing=gluing, method="label")
            == count_nodal_domains(g, gluing=gluing, method="queue"))


def test_klein_gluing_by_hand():
    # positive cells at (0, 0) and (Nx-1, Ny-1) touch only through the reversed seam
    v = -np.ones((5, 4))
    v[0, 0] = v[4, 3] = 1.0
    g = make_grid(v)
    assert count_nodal_domains(g, gluing="klein") == 2
    assert count_nodal_domains(g, gluing="torus") == 3
    assert count_nodal_domains(g, gluing="klein", method="queue") == 2


def test_unknown_options(k52):
    g = make_grid(np.ones((3, 3)))
    with pytest.raises(ValueError):
        count_nodal_domains(g, gluing="mobius")
    with pytest.raises(ValueError):
        count_nodal_domains(g, method="dfs")


def test_g1_zero_lines(k52):
    a = g1_zero_offset(k52)
    assert 0 < a < k52.Lx / 4
    lines = g1_zero_lines(k52)
    level = (1 + 2 * k52.b**3) / (3 * k52.b**2)
    np.testing.assert_allclose(conformal_factor(k52, np.array(lines)), level, atol=1e-12)
    h = k52.Lx / 2
    assert lines == pytest.approx([a, h - a, h + a, k52.Lx - a])
    # exactly four sign changes of g_1 along x
    x = (np.arange(4096) + 0.5) * k52.Lx / 4096
    s = np.sign(conformal_factor(k52, x) - level)
    assert np.count_nonzero(s != np.roll(s, 1)) == 4


@pytest.mark.parametrize("i", range(1, 8))
def test_mean_zero(k52, i):
    # eigenfunctions with positive eigenvalue are L^2-orthogonal to constants
    g = sample_g(k52, i, 512, 256)
    w = conformal_factor(k52, g.x)[:, None]
    integral = np.sum(g.values * w) * (k52.Lx / 512) * (k52.Ly / 256)
    scale = np.sum(np.abs(g.values) * w) * (k52.Lx / 512) * (k52.Ly / 256)
    assert abs(integral) <= 1e-10 * scale


def test_sign_map_and_pgm(k52):
    g = sample_g(k52, 4, 64, 64)
    img = sign_map(g)
    assert set(np.unique(img)) <= {0, 128, 255}
    data = pgm_bytes(img)
    assert data.startswith(b"P5\n64 64\n255\n")
    assert len(data) == len(b"P5\n64 64\n255\n") + 64 * 64


def test_grid_csv(k52):
    g = sample_g(k52, 2, 64, 64)
    rows = grid_csv(g.x, g.y, g.values).splitlines()
    assert rows[0] == "x,y,value"
    assert len(rows) == 64 * 64 + 1


def test_report_json(report52):
    body = report52.to_json()
    assert body["counts"] == [3, 8, 8, 6, 6, 4, 4] and body["match"] is True
    assert body["grids"] == [[512, 512], [1024, 1024]]
