"""Single-mode criteria and macrobending estimates for fibers.

Step-index fibers are single mode for V = 2 pi rho NA / lambda <= 2.405;
the hexagonal-lattice photonic crystal fiber criterion replaces the core
radius by the pitch and the bound by pi, with an effective NA that the
user supplies (it depends strongly on wavelength and is only available
numerically).

Bend loss uses an effective step-index picture.  At the single-mode
boundary of the PCF the transverse decay constant of the cladding field is
gamma = V* / pitch, and the propagation constant is beta = 2 pi n_s / lambda.
The familiar exponential bend-loss factor exp(-(2/3) gamma^3 R / beta^2)
then defines the length scale

    R_model = 3 beta^2 / (2 gamma^3)  ~  pitch^3 / lambda^2,

the short-wavelength critical radius scaling.  The attenuation is

    alpha(R) = sqrt(R_model / R) exp(-R / R_model) / (2 sqrt(A_eff))   [1/m]

reported in dB/m.  Only its shape is meaningful: monotone in R, vanishing
for straight fiber, knee moving as pitch^3 / lambda^2.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigurationError, DomainError, RangeError, UsageError

SINGLE_MODE_STEP_INDEX = 2.405
SINGLE_MODE_PCF = math.pi
NEPER_TO_DB = 10.0 / math.log(10.0)
# the single-mode bounds are inclusive; allow for rounding in V itself
_BOUND_SLACK = 1.0 + 1e-12


@dataclass(frozen=True)
class ModeCheck:
    v: float
    single_mode: bool


@dataclass(frozen=True)
class IndexData:
    """Effective NA, either a constant or tabulated against wavelength (m)."""

    wavelengths: tuple = ()
    na: tuple = ()
    constant_na: float | None = None

    def __post_init__(self):
        if self.constant_na is not None:
            if not 0 < self.constant_na < 1:
                raise DomainError(f"NA must lie in (0, 1), got {self.constant_na}")
            return
        wl = np.asarray(self.wavelengths, dtype=float)
        na = np.asarray(self.na, dtype=float)
        if wl.size == 0 or wl.size != na.size:
            raise DomainError("index data needs matching, non-empty wavelength and NA lists")
        if np.any(np.diff(wl) <= 0):
            raise DomainError("index data wavelengths must be strictly increasing")
        if np.any((na <= 0) | (na >= 1)):
            raise DomainError("index data NA values must lie in (0, 1)")

    @classmethod
    def constant(cls, na):
        return cls(constant_na=float(na))

    def na_at(self, wavelength):
        if self.constant_na is not None:
            return self.constant_na
        lo, hi = self.wavelengths[0], self.wavelengths[-1]
        if not lo <= wavelength <= hi:
            raise RangeError(
                f"wavelength {wavelength * 1e9:.6g} nm outside index table "
                f"[{lo * 1e9:.6g}, {hi * 1e9:.6g}] nm"
            )
        return float(np.interp(wavelength, self.wavelengths, self.na))


def _positive(**values):
    for name, value in values.items():
        if not (math.isfinite(value) and value > 0):
            raise DomainError(f"{name} must be > 0, got {value}")


def v_number(core_radius, na, wavelength):
    """Normalized frequency of a step-index fiber and its single-mode flag."""
    _positive(core_radius=core_radius, na=na, wavelength=wavelength)
    v = 2.0 * math.pi * core_radius * na / wavelength
    return ModeCheck(v, v <= SINGLE_MODE_STEP_INDEX * _BOUND_SLACK)


def v_pcf(pitch, index_data, wavelength):
    """PCF normalized frequency using the pitch; single mode when <= pi."""
    _positive(pitch=pitch, wavelength=wavelength)
    if not isinstance(index_data, IndexData):
        index_data = IndexData.constant(index_data)
    na = index_data.na_at(wavelength)
    v = 2.0 * math.pi * pitch * na / wavelength
    return ModeCheck(v, v <= SINGLE_MODE_PCF * _BOUND_SLACK)


@dataclass(frozen=True)
class BendModelParams:
    v_star: float = 3.75
    effective_area: float = 36.75e-12  # m^2
    silica_index: float = 1.444
    pitch: float = 6e-6  # m, pitch of the calibrated fiber
    calibration: tuple | None = (313e-9, 3.5e-2)  # (wavelength m, R_c m)

    def __post_init__(self):
        _positive(v_star=self.v_star, effective_area=self.effective_area,
                  silica_index=self.silica_index, pitch=self.pitch)
        if self.calibration is not None:
            wl, rc = self.calibration
            _positive(calibration_wavelength=wl)
            if not 1e-3 <= rc <= 1.0:
                raise DomainError(f"calibration radius must lie in [1 mm, 1 m], got {rc} m")


LMA_PM_10_BEND = BendModelParams()


def critical_bend_radius(pitch, wavelength, params=LMA_PM_10_BEND):
    """Short-wavelength critical bend radius, scaled from the calibration
    point as pitch^3 / wavelength^2."""
    _positive(pitch=pitch, wavelength=wavelength)
    if params.calibration is None:
        raise ConfigurationError("critical bend radius needs a calibration point")
    wl_ref, rc_ref = params.calibration
    return rc_ref * (wl_ref / wavelength) ** 2 * (pitch / params.pitch) ** 3


def model_length_scale(wavelength, params=LMA_PM_10_BEND):
    """R_model = 3 beta^2 / (2 gamma^3) of the effective step-index picture."""
    _positive(wavelength=wavelength)
    beta = 2.0 * math.pi * params.silica_index / wavelength
    gamma = params.v_star / params.pitch
    return 1.5 * beta**2 / gamma**3


def bend_loss_curve(radii, wavelength, params=LMA_PM_10_BEND):
    """Attenuation in dB/m at each bend radius (m); returns (radius, dB/m) pairs."""
    radii = [float(r) for r in radii]
    if not radii:
        raise UsageError("bend_loss_curve needs at least one radius")
    for r in radii:
        if not r > 0:
            raise DomainError(f"bend radius must be > 0, got {r}")
    scale = model_length_scale(wavelength, params)
    amplitude = 1.0 / (2.0 * math.sqrt(params.effective_area))
    out = []
    for r in radii:
        if math.isinf(r):
            out.append((r, 0.0))
            continue
        u = r / scale
        alpha = amplitude * math.sqrt(1.0 / u) * math.exp(-u)
        out.append((r, NEPER_TO_DB * alpha))
    return out


def knee_radius(wavelength, params=LMA_PM_10_BEND, threshold_db=1.0):
    """Bend radius at which attenuation falls to ``threshold_db`` dB/m."""
    scale = model_length_scale(wavelength, params)

    def excess(u):
        return bend_loss_curve([u * scale], wavelength, params)[0][1] - threshold_db

    lo, hi = 1e-6, 1e3
    if excess(lo) < 0 or excess(hi) > 0:
        raise DomainError(f"attenuation never crosses {threshold_db} dB/m")
    return brentq(excess, lo, hi, xtol=1e-14, rtol=1e-14) * scale
