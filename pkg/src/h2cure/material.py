"""Diffusivity and solubility of molecular hydrogen in fused silica.

The diffusivity is Arrhenius-type,

    D(T) = D0 * exp(-Ea / (N_A k T)),

with D0 = 2.83e-4 cm^2/s and Ea = 40.19 kJ/mol.  The solubility (the
saturation concentration reached at pressure p and temperature T) is the
statistical-mechanics expression

    S = p (h^2 / (2 pi m k T))^(3/2) (N_s / kT)
          [exp(-theta_v / 2T) / (1 - exp(-theta_v / T))]^3 exp(-E0 / (N_A k T))

with m the mass of an H2 molecule.  E0 is taken per mole.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .units import AVOGADRO, BOLTZMANN, H2_MASS, PLANCK


@dataclass(frozen=True)
class DiffusivityModel:
    prefactor: float  # m^2/s
    activation_energy: float  # J/mol

    def __post_init__(self):
        if not (self.prefactor > 0 and self.activation_energy > 0):
            raise DomainError("diffusivity prefactor and activation energy must be > 0")


@dataclass(frozen=True)
class SolubilityParams:
    site_density: float  # 1/m^3
    characteristic_temperature: float  # K
    binding_energy: float  # J/mol, negative for H2 in silica

    def __post_init__(self):
        if not (self.site_density > 0 and self.characteristic_temperature > 0):
            raise DomainError("site density and characteristic temperature must be > 0")
        if not math.isfinite(self.binding_energy):
            raise DomainError("binding energy must be finite")


@dataclass(frozen=True)
class Material:
    name: str
    diffusivity: DiffusivityModel
    solubility: SolubilityParams


DEFAULT_DIFFUSIVITY = DiffusivityModel(prefactor=2.83e-8, activation_energy=40.19e3)
DEFAULT_SOLUBILITY = SolubilityParams(
    site_density=2.22e28,
    characteristic_temperature=585.508,
    binding_energy=-12.727872e3,
)
DEFAULT_MATERIAL = Material("paper-defaults", DEFAULT_DIFFUSIVITY, DEFAULT_SOLUBILITY)


def _check_temperature(T):
    T = np.asarray(T, dtype=float)
    if not np.all(np.isfinite(T) & (T > 0)):
        raise DomainError(f"temperature must be finite and > 0 K, got {T}")
    return T


def _scalar(value, like):
    return float(value) if np.ndim(like) == 0 else value


def diffusivity(T, model=DEFAULT_DIFFUSIVITY):
    """Diffusivity of H2 in silica at temperature ``T`` [K], in m^2/s."""
    Tarr = _check_temperature(T)
    R = AVOGADRO * BOLTZMANN
    return _scalar(model.prefactor * np.exp(-model.activation_energy / (R * Tarr)), T)


def solubility(p, T, params=DEFAULT_SOLUBILITY):
    """Saturation concentration of H2 in silica, molecules per m^3.

    Parameters
    ----------
    p : float or array
        H2 pressure in Pa.
    T : float or array
        Temperature in K.
    params : SolubilityParams
    """
    parr = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(parr) & (parr >= 0)):
        raise DomainError(f"pressure must be finite and >= 0 Pa, got {p}")
    Tarr = _check_temperature(T)
    kT = BOLTZMANN * Tarr
    thermal = (PLANCK**2 / (2.0 * math.pi * H2_MASS * kT)) ** 1.5
    occupancy = params.site_density / kT
    ratio = params.characteristic_temperature / Tarr
    # exp(-x/2) / (1 - exp(-x)) without cancellation as x -> 0
    vibrational = np.exp(-0.5 * ratio) / -np.expm1(-ratio)
    binding = np.exp(-params.binding_energy / (AVOGADRO * kT))
    out = parr * thermal * occupancy * vibrational**3 * binding
    return float(out) if np.ndim(out) == 0 else out


def absolute_concentration(relative, p, T, params=DEFAULT_SOLUBILITY):
    """Scale a relative concentration in [0, 1] by the solubility."""
    rel = np.asarray(relative, dtype=float)
    if not np.all((rel >= 0) & (rel <= 1)):
        raise DomainError(f"relative concentration must lie in [0, 1], got {relative}")
    out = rel * solubility(p, T, params)
    return float(out) if np.ndim(out) == 0 else out
