"""Preset files and the CSV inputs the command line reads.

Presets are INI-style text with sections ``[fiber NAME]``,
``[bend NAME]`` and ``[material NAME]``.  Keys carry their unit as a
suffix (``cladding_radius_um``); unknown keys are rejected.  The packaged
file is always loaded first; a user file (``--presets`` or the
``H2CURE_PRESETS`` environment variable) is layered on top, section by
section.

CSV inputs are comma separated UTF-8 with a mandatory header:

* power log: ``time_s,power_mW``
* temperature schedule: ``duration_s,temperature_C``
* index data: ``wavelength_nm,effective_NA``
"""
import configparser
import csv
import math
import os
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .diffusion import FiberSpec, TemperatureSchedule
from .errors import DataError, UsageError
from .guidance import BendModelParams, IndexData
from .material import DEFAULT_MATERIAL, DiffusivityModel, Material, SolubilityParams
from .units import to_si

PRESET_ENV = "H2CURE_PRESETS"

# key -> (attribute, unit); unit None means dimensionless
_FIBER_KEYS = {
    "cladding_radius_um": ("cladding_radius", "um"),
    "pitch_um": ("pitch", "um"),
    "hole_diameter_um": ("hole_diameter", "um"),
    "mode_field_diameter_um": ("mode_field_diameter", "um"),
    "endcap_thickness_min_um": ("endcap_thickness_min", "um"),
    "endcap_thickness_max_um": ("endcap_thickness_max", "um"),
    "open_hole_radius_um": ("open_hole_radius", "um"),
    "index_table": ("index_table", "path"),
}
_FIBER_OPTIONAL = {"open_hole_radius", "index_table"}

_BEND_KEYS = {
    "v_star": ("v_star", None),
    "effective_area_um2": ("effective_area", "um2"),
    "silica_index": ("silica_index", None),
    "pitch_um": ("pitch", "um"),
    "calibration_wavelength_nm": ("calibration_wavelength", "nm"),
    "calibration_radius_cm": ("calibration_radius", "cm"),
}

_MATERIAL_KEYS = {
    "diffusivity_prefactor_cm2_s": ("prefactor", "cm2/s"),
    "activation_energy_kJ_mol": ("activation_energy", "kJ/mol"),
    "site_density_cm-3": ("site_density", "cm-3"),
    "characteristic_temperature_K": ("characteristic_temperature", "K"),
    "binding_energy_kJ_mol": ("binding_energy", "kJ/mol"),
}


@dataclass
class Presets:
    fibers: dict = field(default_factory=dict)
    bends: dict = field(default_factory=dict)
    materials: dict = field(default_factory=dict)

    def fiber(self, name):
        try:
            return self.fibers[name]
        except KeyError:
            raise UsageError(
                f"unknown fiber preset {name!r}; known: {', '.join(sorted(self.fibers))}"
            ) from None

    def material(self, name):
        try:
            return self.materials[name]
        except KeyError:
            raise UsageError(
                f"unknown material preset {name!r}; known: {', '.join(sorted(self.materials))}"
            ) from None

    def bend(self, name):
        try:
            return self.bends[name]
        except KeyError:
            raise UsageError(f"no bend model for fiber {name!r}") from None


def _convert(source, section, key, raw, unit):
    if unit == "path":
        return raw
    try:
        value = float(raw)
    except ValueError:
        raise DataError(f"{source} [{section}] {key}: not a number: {raw!r}") from None
    if not math.isfinite(value):
        raise DataError(f"{source} [{section}] {key}: must be finite")
    if unit is None:
        return value
    if unit == "um2":
        return value / 1e12
    return to_si(value, unit).value


def _read_section(source, section, items, schema):
    values = {}
    for key, raw in items:
        if key not in schema:
            raise DataError(
                f"{source} [{section}]: unknown key {key!r}; allowed: {', '.join(schema)}"
            )
        attr, unit = schema[key]
        values[attr] = _convert(source, section, key, raw, unit)
    return values


def _parse(text, source, presets):
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";"), default_section="\0"
    )
    parser.optionxform = str
    try:
        parser.read_string(text, source=str(source))
    except configparser.Error as exc:
        raise DataError(f"{source}: {exc}") from None
    for section in parser.sections():
        kind, _, name = section.partition(" ")
        name = name.strip()
        if not name:
            raise DataError(f"{source}: section [{section}] needs a name")
        items = parser.items(section)
        try:
            if kind == "fiber":
                values = _read_section(source, section, items, _FIBER_KEYS)
                missing = {a for a, _ in _FIBER_KEYS.values()} - _FIBER_OPTIONAL - set(values)
                if missing:
                    raise DataError(f"{source} [{section}]: missing {', '.join(sorted(missing))}")
                presets.fibers[name] = FiberSpec(name=name, **values)
            elif kind == "bend":
                values = _read_section(source, section, items, _BEND_KEYS)
                wl = values.pop("calibration_wavelength", None)
                rc = values.pop("calibration_radius", None)
                if (wl is None) != (rc is None):
                    raise DataError(f"{source} [{section}]: calibration needs wavelength and radius")
                presets.bends[name] = BendModelParams(
                    calibration=None if wl is None else (wl, rc), **values
                )
            elif kind == "material":
                values = _read_section(source, section, items, _MATERIAL_KEYS)
                base = presets.materials.get(name, DEFAULT_MATERIAL)
                diff = {k: values[k] for k in ("prefactor", "activation_energy") if k in values}
                sol = {k: values[k] for k in ("site_density", "characteristic_temperature",
                                              "binding_energy") if k in values}
                presets.materials[name] = Material(
                    name,
                    replace(base.diffusivity, **diff) if diff else base.diffusivity,
                    replace(base.solubility, **sol) if sol else base.solubility,
                )
            else:
                raise DataError(f"{source}: unknown section kind {kind!r} in [{section}]")
        except (TypeError, ValueError) as exc:
            if isinstance(exc, DataError):
                raise
            raise DataError(f"{source} [{section}]: {exc}") from None
    return presets


def builtin_preset_text():
    return resources.files("h2cure").joinpath("data/presets.ini").read_text(encoding="utf-8")


def load_presets(path=None):
    """Built-in presets, overlaid with ``path`` or ``$H2CURE_PRESETS`` if set."""
    presets = _parse(builtin_preset_text(), "<builtin presets>", Presets())
    if path is None:
        path = os.environ.get(PRESET_ENV) or None
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot read preset file {path}: {exc.strerror}") from None
        _parse(text, path, presets)
    return presets


# -- CSV inputs --------------------------------------------------------------

def _read_rows(path, header):
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    if not rows or [c.strip() for c in rows[0]] != list(header):
        raise DataError(f"{path}: header must be {','.join(header)}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise DataError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
        try:
            values = [float(c) for c in row]
        except ValueError:
            raise DataError(f"{path}:{lineno}: non-numeric value in {row}") from None
        if not all(math.isfinite(v) for v in values):
            raise DataError(f"{path}:{lineno}: non-finite value in {row}")
        out.append((lineno, values))
    return out


@dataclass(frozen=True)
class PowerLog:
    """Optical power samples: times in s (strictly increasing), power in W."""

    times: tuple
    powers: tuple
    rows: tuple = ()

    def __post_init__(self):
        rows = self.rows or tuple(range(1, len(self.times) + 1))
        object.__setattr__(self, "rows", rows)
        if len(self.times) != len(self.powers):
            raise DataError("power log needs one power per time")
        if len(self.times) < 2:
            raise DataError("power log needs at least 2 rows")
        for i, p in enumerate(self.powers):
            if p < 0:
                raise DataError(f"row {rows[i]}: negative power {p} W")
        for i in range(1, len(self.times)):
            if not self.times[i] > self.times[i - 1]:
                raise DataError(f"row {rows[i]}: time {self.times[i]} s is not increasing")


def read_power_log(path):
    rows = _read_rows(path, ("time_s", "power_mW"))
    return PowerLog(
        times=tuple(v[0] for _, v in rows),
        powers=tuple(v[1] * 1e-3 for _, v in rows),
        rows=tuple(n for n, _ in rows),
    )


def integrate_energy(log):
    """Cumulative energy (J) of a power log by the trapezoidal rule."""
    t, p = log.times, log.powers
    return math.fsum(0.5 * (p[i] + p[i + 1]) * (t[i + 1] - t[i]) for i in range(len(t) - 1))


def read_schedule(path):
    rows = _read_rows(path, ("duration_s", "temperature_C"))
    segments = []
    for lineno, (duration, temp_c) in rows:
        if not duration > 0:
            raise DataError(f"{path}:{lineno}: duration must be > 0 s")
        T = temp_c + 273.15
        if not T > 0:
            raise DataError(f"{path}:{lineno}: temperature below absolute zero")
        segments.append((duration, T))
    return TemperatureSchedule(tuple(segments))


def read_index_data(path):
    rows = _read_rows(path, ("wavelength_nm", "effective_NA"))
    try:
        return IndexData(
            wavelengths=tuple(v[0] * 1e-9 for _, v in rows),
            na=tuple(v[1] for _, v in rows),
        )
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
