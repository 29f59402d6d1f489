"""Physical constants and conversion of user units to SI.

Only the handful of dimensions the planner works with are supported.
Internally every quantity is SI; cm^2/s and cm^-3 only show up at the
input/output boundary.
"""
import math
import re
from dataclasses import dataclass

from .errors import DomainError, UsageError

# SI defining constants (exact since 2019)
BOLTZMANN = 1.380649e-23  # J/K
PLANCK = 6.62607015e-34  # J s
AVOGADRO = 6.02214076e23  # 1/mol

ATOMIC_MASS_CONSTANT = 1.66053906660e-27  # kg, CODATA 2018
HYDROGEN_ATOMIC_WEIGHT = 1.00794  # standard atomic weight of H
H2_MASS = 2.0 * HYDROGEN_ATOMIC_WEIGHT * ATOMIC_MASS_CONSTANT  # kg, molecule

GAS_CONSTANT = AVOGADRO * BOLTZMANN  # J/(mol K)

ZERO_CELSIUS = 273.15  # K
ROOM_TEMPERATURE = 293.15  # K

DIMENSIONS = (
    "pressure",
    "temperature",
    "length",
    "time",
    "diffusivity",
    "concentration",
    "energy",
    "power",
    "molar energy",
)


@dataclass(frozen=True)
class PhysicalConstants:
    boltzmann: float = BOLTZMANN
    planck: float = PLANCK
    avogadro: float = AVOGADRO
    h2_molecular_mass: float = H2_MASS

    @property
    def gas_constant(self):
        return self.avogadro * self.boltzmann


def constants():
    """Return the constants used throughout the package."""
    return PhysicalConstants()


@dataclass(frozen=True)
class Quantity:
    """An SI value tagged with its dimension."""

    value: float
    dimension: str

    def __post_init__(self):
        if self.dimension not in DIMENSIONS:
            raise UsageError(f"unknown dimension {self.dimension!r}")
        if not math.isfinite(self.value):
            raise DomainError(f"{self.dimension} must be finite, got {self.value}")
        if self.dimension == "temperature" and self.value <= 0:
            raise DomainError(f"temperature must be > 0 K, got {self.value} K")
        if self.dimension == "pressure" and self.value < 0:
            raise DomainError(f"pressure must be >= 0 Pa, got {self.value} Pa")

    def __float__(self):
        return float(self.value)


# unit tag -> (dimension, scale, offset); SI = value * scale + offset
_UNITS = {
    "Pa": ("pressure", 1.0, 0.0),
    "bar": ("pressure", 1e5, 0.0),
    "K": ("temperature", 1.0, 0.0),
    "C": ("temperature", 1.0, ZERO_CELSIUS),
    "m": ("length", 1.0, 0.0),
    "cm": ("length", 1e-2, 0.0),
    "mm": ("length", 1e-3, 0.0),
    "um": ("length", 1e-6, 0.0),
    "nm": ("length", 1e-9, 0.0),
    "s": ("time", 1.0, 0.0),
    "min": ("time", 60.0, 0.0),
    "h": ("time", 3600.0, 0.0),
    "d": ("time", 86400.0, 0.0),
    "m2/s": ("diffusivity", 1.0, 0.0),
    "cm2/s": ("diffusivity", 1e-4, 0.0),
    "m-3": ("concentration", 1.0, 0.0),
    "cm-3": ("concentration", 1e6, 0.0),
    "J": ("energy", 1.0, 0.0),
    "kJ": ("energy", 1e3, 0.0),
    "W": ("power", 1.0, 0.0),
    "mW": ("power", 1e-3, 0.0),
    "J/mol": ("molar energy", 1.0, 0.0),
    "kJ/mol": ("molar energy", 1e3, 0.0),
}

_ALIASES = {
    "°C": "C",
    "degC": "C",
    "μm": "um",
    "µm": "um",
    "cm²/s": "cm2/s",
    "m²/s": "m2/s",
    "cm⁻³": "cm-3",
    "m⁻³": "m-3",
}

SUPPORTED_UNITS = tuple(_UNITS) + tuple(_ALIASES)


def _canonical(unit):
    unit = _ALIASES.get(unit, unit)
    if unit not in _UNITS:
        raise UsageError(
            f"unknown unit {unit!r}; supported: {', '.join(sorted(_UNITS))}"
        )
    return unit


def _scale(value, factor):
    # dividing by an exact integer keeps 115 um == 115e-6 m to the last bit
    if factor < 1.0:
        return value / round(1.0 / factor)
    return value * factor


def unit_dimension(unit):
    return _UNITS[_canonical(unit)][0]


def to_si(value, unit):
    """Convert ``value`` given in ``unit`` to an SI :class:`Quantity`.

    >>> to_si(100, "bar").value
    10000000.0
    >>> to_si(20, "°C").value
    293.15
    """
    dimension, scale, offset = _UNITS[_canonical(unit)]
    si = _scale(float(value), scale)
    return Quantity(si + offset if offset else si, dimension)


def from_si(value, unit):
    """Inverse of :func:`to_si` for a bare SI float."""
    _, scale, offset = _UNITS[_canonical(unit)]
    return _scale(value - offset if offset else value, 1.0 / scale)


_QUANTITY_RE = re.compile(
    r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S+)\s*$"
)


def parse_quantity(text, dimension=None):
    """Parse ``"160bar"``, ``"60C"``, ``"2e20cm-3"`` into a Quantity.

    A bare number is rejected: dimensioned inputs must carry a unit.
    """
    try:
        float(text)
    except ValueError:
        pass
    else:
        raise UsageError(f"{text!r} needs a unit, e.g. 160bar, 60C, 2e20cm-3")
    match = _QUANTITY_RE.match(text)
    if match is None:
        raise UsageError(f"expected <number><unit>, got {text!r}")
    quantity = to_si(match.group(1), match.group(2))
    if dimension is not None and quantity.dimension != dimension:
        raise UsageError(
            f"{text!r} is a {quantity.dimension}, expected a {dimension}"
        )
    return quantity
