import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from h2cure.errors import DomainError
from h2cure.material import (
    DEFAULT_DIFFUSIVITY,
    DiffusivityModel,
    SolubilityParams,
    absolute_concentration,
    diffusivity,
    solubility,
)

S_ORACLE_CM3 = float(oracles.solubility_cm3(1e7, 293.15))


def test_diffusivity_room_temperature():
    D = diffusivity(293.15) * 1e4
    assert D == pytest.approx(1.951e-11, rel=5e-3)
    assert D == pytest.approx(float(oracles.diffusivity_cm2_s(293.15)), rel=1e-13)


def test_diffusivity_ratio():
    assert diffusivity(333.15) / diffusivity(293.15) == pytest.approx(7.24, abs=0.01)


def test_diffusivity_high_temperature_limit():
    assert diffusivity(1e9) == pytest.approx(DEFAULT_DIFFUSIVITY.prefactor, rel=1e-3)


@given(st.floats(min_value=50, max_value=2000), st.floats(min_value=1e-3, max_value=100))
def test_diffusivity_increasing(T, dT):
    assert diffusivity(T + dT) > diffusivity(T)


def test_diffusivity_array():
    T = np.array([273.15, 293.15, 333.15])
    assert np.allclose(diffusivity(T), [diffusivity(t) for t in T], rtol=0, atol=0)


@pytest.mark.parametrize("T", [0.0, -5.0, float("nan"), float("inf")])
def test_diffusivity_rejects_bad_temperature(T):
    with pytest.raises(DomainError):
        diffusivity(T)


def test_solubility_oracle_and_band():
    S = solubility(1e7, 293.15) * 1e-6
    assert S == pytest.approx(S_ORACLE_CM3, rel=1e-12)
    assert 1e20 <= S <= 1e22


def test_solubility_second_oracle_point():
    want = float(oracles.solubility_cm3(1.6e7, 333.15))
    assert solubility(1.6e7, 333.15) * 1e-6 == pytest.approx(want, rel=1e-12)


def test_solubility_zero_pressure():
    assert solubility(0.0, 293.15) == 0.0


def test_solubility_doubles_with_pressure():
    assert solubility(2e7, 293.15) == pytest.approx(2 * solubility(1e7, 293.15), rel=1e-15)


@given(st.floats(min_value=1.0, max_value=1e9), st.floats(min_value=0.01, max_value=100))
def test_solubility_linear_in_pressure(p, k):
    assert solubility(k * p, 300.0) == pytest.approx(k * solubility(p, 300.0), rel=1e-12)


def test_solubility_rejects():
    with pytest.raises(DomainError):
        solubility(-1.0, 293.15)
    with pytest.raises(DomainError):
        solubility(1e7, 0.0)


def test_absolute_concentration():
    S = solubility(1e7, 293.15)
    assert absolute_concentration(1.0, 1e7, 293.15) == S
    assert absolute_concentration(0.0, 1e7, 293.15) == 0.0
    assert absolute_concentration(0.5, 1e7, 293.15) * 1e-6 == pytest.approx(
        S_ORACLE_CM3 / 2, rel=1e-12)
    with pytest.raises(DomainError):
        absolute_concentration(1.2, 1e7, 293.15)


def test_parameter_validation():
    with pytest.raises(DomainError):
        DiffusivityModel(prefactor=-1.0, activation_energy=1.0)
    with pytest.raises(DomainError):
        SolubilityParams(site_density=0.0, characteristic_temperature=1.0, binding_energy=0.0)
    # negative binding energy is physical
    SolubilityParams(site_density=1.0, characteristic_temperature=1.0, binding_energy=-5.0)
