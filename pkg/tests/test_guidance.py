import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from h2cure.errors import ConfigurationError, DomainError, RangeError, UsageError
from h2cure.guidance import (
    LMA_PM_10_BEND,
    BendModelParams,
    IndexData,
    bend_loss_curve,
    critical_bend_radius,
    knee_radius,
    model_length_scale,
    v_number,
    v_pcf,
)


def test_step_index_example():
    check = v_number(2e-6, 0.12, 313e-9)
    assert check.v == pytest.approx(2 * math.pi * 2e-6 * 0.12 / 313e-9, rel=1e-15)
    assert check.v == pytest.approx(4.82, abs=0.01)
    assert not check.single_mode


def test_step_index_small_na_single_mode():
    check = v_number(2e-6, 1e-9, 313e-9)
    assert check.v < 1e-6 and check.single_mode


@given(st.floats(1e-7, 1e-4), st.floats(1e-3, 0.5))
def test_step_index_boundary_inclusive(rho, na):
    wavelength = 2 * math.pi * rho * na / 2.405
    assert v_number(rho, na, wavelength).single_mode


def test_pcf_example():
    check = v_pcf(6e-6, IndexData.constant(0.026), 313e-9)
    assert check.v == pytest.approx(3.13, abs=0.01)
    assert check.single_mode


@given(st.floats(1e-6, 2e-5), st.floats(200e-9, 2e-6))
def test_pcf_boundary_inclusive(pitch, wavelength):
    na = math.pi * wavelength / (2 * math.pi * pitch)
    if 0 < na < 1:
        assert v_pcf(pitch, na, wavelength).single_mode


@given(st.floats(1e-6, 1e-5), st.floats(0.01, 0.2))
def test_pcf_linear_in_pitch(pitch, na):
    assert v_pcf(2 * pitch, na, 500e-9).v == pytest.approx(2 * v_pcf(pitch, na, 500e-9).v,
                                                           rel=1e-15)


def test_tabulated_na():
    data = IndexData(wavelengths=(300e-9, 400e-9, 700e-9), na=(0.02, 0.03, 0.06))
    assert data.na_at(350e-9) == pytest.approx(0.025)
    assert v_pcf(6e-6, data, 400e-9).v == pytest.approx(2 * math.pi * 6e-6 * 0.03 / 400e-9)
    with pytest.raises(RangeError):
        v_pcf(6e-6, data, 800e-9)


@pytest.mark.parametrize("kwargs", [
    {"wavelengths": (), "na": ()},
    {"wavelengths": (2e-7, 1e-7), "na": (0.1, 0.1)},
    {"wavelengths": (1e-7,), "na": (1.5,)},
    {"constant_na": 0.0},
])
def test_index_data_validation(kwargs):
    with pytest.raises(DomainError):
        IndexData(**kwargs)


def test_nonpositive_inputs():
    with pytest.raises(DomainError):
        v_number(0.0, 0.1, 1e-6)
    with pytest.raises(DomainError):
        v_pcf(6e-6, 0.02, -1.0)


def test_critical_radius_scaling():
    assert critical_bend_radius(6e-6, 313e-9) == pytest.approx(0.035, rel=1e-15)
    assert critical_bend_radius(6e-6, 626e-9) == pytest.approx(0.00875, rel=1e-15)
    assert critical_bend_radius(6e-6, 313e-9) / critical_bend_radius(6e-6, 626e-9) == 4.0
    assert critical_bend_radius(12e-6, 500e-9) / critical_bend_radius(6e-6, 500e-9) == \
        pytest.approx(8.0, rel=1e-15)


def test_critical_radius_needs_calibration():
    with pytest.raises(ConfigurationError):
        critical_bend_radius(6e-6, 313e-9, BendModelParams(calibration=None))


@pytest.mark.parametrize("changes", [
    {"v_star": 0.0}, {"effective_area": -1.0}, {"calibration": (313e-9, 2.0)},
    {"calibration": (313e-9, 1e-4)},
])
def test_bend_params_validation(changes):
    with pytest.raises(DomainError):
        BendModelParams(**changes)


def test_model_length_scale_laws():
    base = model_length_scale(313e-9)
    assert base / model_length_scale(626e-9) == pytest.approx(4.0, rel=1e-14)
    wide = BendModelParams(pitch=12e-6)
    assert model_length_scale(313e-9, wide) / base == pytest.approx(8.0, rel=1e-14)


def test_bend_curve_properties():
    radii = np.linspace(0.02, 0.10, 81)
    att = np.array([a for _, a in bend_loss_curve(radii, 313e-9)])
    assert np.all(att >= 0) and np.all(np.diff(att) < 0)
    assert bend_loss_curve([math.inf], 313e-9) == [(math.inf, 0.0)]
    longer = np.array([a for _, a in bend_loss_curve(radii, 626e-9)])
    assert np.all(longer < att)


def test_knee_ratio():
    ratio = knee_radius(313e-9) / knee_radius(626e-9)
    assert ratio == pytest.approx(4.0, rel=0.1)
    crossing = bend_loss_curve([knee_radius(313e-9)], 313e-9)[0][1]
    assert crossing == pytest.approx(1.0, rel=1e-9)


def test_bend_curve_rejects():
    with pytest.raises(UsageError):
        bend_loss_curve([], 313e-9)
    with pytest.raises(DomainError):
        bend_loss_curve([0.0], 313e-9)


def test_default_params_are_calibrated():
    assert LMA_PM_10_BEND.calibration == (313e-9, 3.5e-2)
