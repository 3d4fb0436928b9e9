import numpy as np
import pytest
from numpy.testing import assert_allclose

from fibeam import (
    ArrayConfig,
    ConePattern,
    SincPattern,
    TabulatedPattern,
    deformation_report,
    radius_for_frequency,
    sample_uv_grid,
    strict_band,
)


def lattice_points(grid):
    idx = grid.indices()
    u, v = np.meshgrid(idx, idx, indexing="ij")
    return u, v


def test_origin_takes_broadside_gain(cfg25, cone15, two_level, sinc6):
    for pattern in (cone15, two_level, sinc6):
        grid = sample_uv_grid(cfg25, pattern, 8000.0)
        center = cfg25.n_per_axis // 2
        assert grid.values[center, center] == pattern.gain(0.0, 0.0)


def test_cone_cutoff_at_16khz(cfg25, cone15):
    # support radius R*sin(15 deg) ~ 4.527: (4, 0) is inside, (5, 0) outside
    grid = sample_uv_grid(cfg25, cone15, 16000.0)
    c = cfg25.n_per_axis // 2
    assert grid.values[c + 4, c] == 1.0
    assert grid.values[c + 5, c] == 0.0
    assert grid.radius == pytest.approx(17.49271137026239, rel=1e-12)


def test_rim_point_maps_to_horizon():
    # N*d = 1 m and c = 1 m/s make R = f exactly, so (3, 0) sits on the rim
    cfg = ArrayConfig(8, 0.125, sound_speed_m_s=1.0)
    pattern = SincPattern(0.5)
    assert radius_for_frequency(cfg, 3.0) == 3.0
    grid = sample_uv_grid(cfg, pattern, 3.0)
    c = cfg.n_per_axis // 2
    assert grid.values[c + 3, c] == pytest.approx(pattern.gain(np.pi / 2, 0.0))
    assert grid.values[c + 3, c] > 0


def test_below_band_rejected(cfg25, cone15):
    f_min = strict_band(cfg25).f_min_hz
    with pytest.raises(ValueError, match="below the representable band"):
        sample_uv_grid(cfg25, cone15, 0.5 * f_min)
    # the band edge itself is fine
    grid = sample_uv_grid(cfg25, cone15, f_min)
    assert grid.radius == pytest.approx(1.0)


def test_zero_pattern_gives_zero_grid(cfg25):
    zero = TabulatedPattern(
        np.array([0.0, np.pi / 2]), np.array([0.0, np.pi]), np.zeros((2, 2))
    )
    grid = sample_uv_grid(cfg25, zero, 8000.0)
    assert np.all(grid.values == 0)
    assert grid.support_radius() == 0.0


def test_outside_visible_region_is_zero(cfg25, sinc6):
    grid = sample_uv_grid(cfg25, sinc6, 2000.0)  # R ~ 2.19, sphere well inside
    u, v = lattice_points(grid)
    rho = np.hypot(u, v)
    assert np.all(grid.values[rho > grid.radius] == 0.0)
    assert np.any(grid.values[rho <= grid.radius] > 0.0)


@pytest.mark.parametrize("pattern_name", ["cone15", "sinc6", "two_level"])
def test_circular_symmetry_on_equal_radius_points(request, cfg25, pattern_name):
    pattern = request.getfixturevalue(pattern_name)
    grid = sample_uv_grid(cfg25, pattern, 16000.0)
    u, v = lattice_points(grid)
    rho = np.hypot(u, v).round(9)
    for value in np.unique(rho):
        ring = grid.values[rho == value]
        assert np.ptp(ring) < 1e-12, f"ring rho={value} not constant"


def test_inverse_mapping_reproduces_lattice(cfg25, sinc6):
    grid = sample_uv_grid(cfg25, sinc6, 16000.0)
    u, v = lattice_points(grid)
    rho = np.hypot(u, v)
    inside = rho <= grid.radius
    theta = np.arcsin(np.clip(rho[inside] / grid.radius, 0, 1))
    phi = np.arctan2(v[inside], u[inside])
    u_back = grid.radius * np.sin(theta) * np.cos(phi)
    v_back = grid.radius * np.sin(theta) * np.sin(phi)
    assert np.max(np.abs(u_back - u[inside])) < 1e-12
    assert np.max(np.abs(v_back - v[inside])) < 1e-12


def test_even_n_grid_shape():
    cfg = ArrayConfig(4, 0.02)
    grid = sample_uv_grid(cfg, ConePattern(0.4), 9000.0)
    assert grid.values.shape == (4, 4)
    assert list(grid.indices()) == [-2, -1, 0, 1]


class TestDeformationReport:
    def test_example_relaxed_band(self, cfg25, cone15):
        rep = deformation_report(cfg25, cone15, 16000.0)
        band = rep.relaxed_band
        assert band.kind == "relaxed"
        # frozen from direct evaluation of c/(N d sin theta_c) and its
        # (N-1)/2 multiple; the published range rounds to 3.5 - 42.4 kHz
        assert band.f_min_hz == pytest.approx(3534.0006231162715, abs=1e-6)
        assert band.f_max_hz == pytest.approx(42408.00747739526, abs=1e-6)
        assert band.f_max_hz / band.f_min_hz == pytest.approx(12.0, rel=1e-12)

    def test_support_scales_linearly_with_frequency(self, cfg25, cone15):
        rep1 = deformation_report(cfg25, cone15, 8000.0)
        rep2 = deformation_report(cfg25, cone15, 16000.0)
        assert rep2.support_radius == pytest.approx(2 * rep1.support_radius, rel=1e-12)

    def test_boundary_frequency_touches_half_width(self, cfg25, cone15):
        f_top = deformation_report(cfg25, cone15, 8000.0).relaxed_band.f_max_hz
        rep = deformation_report(cfg25, cone15, f_top)
        assert rep.support_radius == pytest.approx(rep.lattice_half_width, rel=1e-9)
        assert not rep.clipped
        assert deformation_report(cfg25, cone15, f_top * 1.001).clipped

    def test_under_resolved_below_relaxed_band(self, cfg25, cone15):
        f_low = deformation_report(cfg25, cone15, 8000.0).relaxed_band.f_min_hz
        assert deformation_report(cfg25, cone15, 0.99 * f_low).under_resolved
        rep = deformation_report(cfg25, cone15, f_low)
        assert not rep.under_resolved
        assert not rep.deformed

    def test_nonzero_point_counts(self, cfg25, cone15):
        # support rho ~ 1.13 at 4 kHz: center plus the first axis ring
        assert deformation_report(cfg25, cone15, 4000.0).nonzero_points == 5
        assert deformation_report(cfg25, cone15, 16000.0).nonzero_points == 69

    def test_advisory_even_below_representable_band(self, cfg25, cone15):
        rep = deformation_report(cfg25, cone15, 100.0)
        assert rep.radius < 1
        assert rep.under_resolved
        assert rep.nonzero_points == 1  # only the origin

    def test_sinc_relaxed_band_equals_strict(self, cfg25, sinc6):
        rep = deformation_report(cfg25, sinc6, 8000.0)
        band = strict_band(cfg25)
        assert rep.relaxed_band.f_min_hz == pytest.approx(band.f_min_hz)
        assert rep.relaxed_band.f_max_hz == pytest.approx(band.f_max_hz)

    def test_empty_support_has_no_relaxed_band(self, cfg25):
        zero = TabulatedPattern(
            np.array([0.0, np.pi / 2]), np.array([0.0, np.pi]), np.zeros((2, 2))
        )
        rep = deformation_report(cfg25, zero, 8000.0)
        assert rep.relaxed_band is None
        assert rep.nonzero_points == 0

    def test_even_n_half_width(self):
        cfg = ArrayConfig(100, 0.015)
        rep = deformation_report(cfg, ConePattern(np.pi / 8), 16000.0)
        assert rep.lattice_half_width == 49
