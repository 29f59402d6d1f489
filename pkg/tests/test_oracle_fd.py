import numpy as np
import pytest
from scipy.integrate import trapezoid

from h2cure.diffusion import Direction, c_out
from h2cure.errors import DomainError
from h2cure.oracle_fd import FdConfig, center_value, compare_with_series, fd_solve


@pytest.fixture(scope="module")
def depleted():
    return fd_solve(FdConfig(512, 2048, theta_end=10.0), Direction.OUT)


@pytest.mark.parametrize("changes", [
    {"radial_points": 15}, {"time_steps": 8}, {"theta_end": 0.0},
    {"grading": 0.5}, {"startup_steps": -1},
])
def test_config_validation(changes):
    with pytest.raises(DomainError):
        FdConfig(**changes)


def test_time_grid_graded():
    grid = FdConfig(64, 64, theta_end=2.0).time_grid()
    assert grid[0] == 0.0 and grid[-1] == 2.0
    assert np.all(np.diff(grid) > 0) and np.all(np.diff(grid, 2) > 0)


def test_full_depletion(depleted):
    assert np.all(np.abs(depleted.values[-1]) < 1e-6)


def test_boundary_column_zero(depleted):
    assert np.all(depleted.values[1:, -1] == 0.0)


def test_stays_in_unit_interval(depleted):
    # discrete maximum principle, up to roundoff
    assert depleted.values.min() >= -1e-12
    assert depleted.values.max() <= 1.0 + 1e-12


def test_mass_decreases():
    field = fd_solve(FdConfig(256, 512, theta_end=1.0))
    r = field.r_fractions
    mass = trapezoid(field.values * r, r, axis=1)
    assert np.all(np.diff(mass) < 0)


def test_center_half_point_matches_series():
    value = center_value(FdConfig(512, 2048, theta_end=0.2005))
    assert value == pytest.approx(0.5, abs=5e-4)
    assert value == pytest.approx(c_out(0.0, 0.2005), abs=5e-4)


def test_in_diffusion_is_complement():
    cfg = FdConfig(128, 256, theta_end=0.3)
    out = fd_solve(cfg, Direction.OUT).values
    inn = fd_solve(cfg, Direction.IN).values
    assert np.max(np.abs(out + inn - 1.0)) < 1e-12


def test_default_comparison():
    cmp = compare_with_series()
    assert cmp.max_abs_error <= 5e-4
    assert cmp.r_frac < 1.0
    assert 1e-3 <= cmp.theta <= 1.0


def test_refinement_reduces_error_about_fourfold():
    coarse = compare_with_series(FdConfig(128, 512)).max_abs_error
    fine = compare_with_series(FdConfig(256, 1024)).max_abs_error
    assert 3.0 < coarse / fine < 6.0


def test_empty_window_rejected():
    with pytest.raises(DomainError):
        compare_with_series(FdConfig(32, 32, theta_end=0.5), theta_window=(0.6, 0.9))
