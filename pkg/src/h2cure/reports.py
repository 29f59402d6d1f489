"""Formatting of results: records, tables, CSV and the contour grid."""
import io
from dataclasses import dataclass

import numpy as np

from .diffusion import (
    DEFAULT_MATERIAL,
    Direction,
    GeometryCase,
    concentration,
    theta,
)
from .errors import PlannerError, UsageError
from .material import diffusivity

MACHINE_DIGITS = 9
HUMAN_DIGITS = 4

CONTOUR_HEADER = ("temperature_K", "time_s", "concentration")


def fmt(value, digits):
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, str):
        return value
    return f"{value:.{digits}g}"


def humanize_duration(seconds):
    """'43.1 min', '15.7 d', '2.3 y' style duration text."""
    s = float(seconds)
    if s != s or s in (float("inf"), float("-inf")):
        return "never"
    for limit, unit, size in (
        (60.0, "s", 1.0),
        (3600.0, "min", 60.0),
        (86400.0, "h", 3600.0),
        (86400.0 * 365.25, "d", 86400.0),
    ):
        if abs(s) < limit:
            return f"{s / size:.3g} {unit}"
    return f"{s / (86400.0 * 365.25):.3g} y"


@dataclass(frozen=True)
class Record:
    quantity: str
    value: object
    unit: str = ""
    detail: str = ""


def duration_record(name, seconds):
    return Record(name, seconds, "s", humanize_duration(seconds))


def render_records(records, machine):
    """Records as CSV (machine) or as an aligned table."""
    if machine:
        buf = io.StringIO()
        buf.write("quantity,value,unit,detail\n")
        for r in records:
            buf.write(f"{r.quantity},{fmt(r.value, MACHINE_DIGITS)},{r.unit},{r.detail}\n")
        return buf.getvalue()
    rows = [(r.quantity, fmt(r.value, HUMAN_DIGITS), r.unit, r.detail) for r in records]
    widths = [max(len(row[i]) for row in rows) for i in range(3)]
    lines = []
    for q, v, u, d in rows:
        line = f"{q:<{widths[0]}}  {v:>{widths[1]}}  {u:<{widths[2]}}"
        if d:
            line += f"  ({d})"
        lines.append(line.rstrip())
    return "\n".join(lines) + "\n"


def render_table(header, rows, machine):
    """Columnar data as CSV or an aligned table."""
    digits = MACHINE_DIGITS if machine else HUMAN_DIGITS
    cells = [[fmt(v, digits) for v in row] for row in rows]
    if machine:
        return "".join(",".join(r) + "\n" for r in [list(header)] + cells)
    widths = [max(len(str(h)), *(len(r[i]) for r in cells)) if cells else len(str(h))
              for i, h in enumerate(header)]
    lines = ["  ".join(f"{h:>{w}}" for h, w in zip(header, widths))]
    lines += ["  ".join(f"{c:>{w}}" for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


# -- contour grid ------------------------------------------------------------

def contour_grid(temperatures, times, fiber, case=GeometryCase.SOLID, r_frac=0.0,
                 direction=Direction.IN, material=DEFAULT_MATERIAL):
    """Relative concentration on a (temperature, time) grid.

    ``values[i, j]`` belongs to ``temperatures[i]`` (K) and ``times[j]`` (s).
    A failing cell re-raises its error annotated with the cell index.
    """
    temperatures = [float(T) for T in temperatures]
    times = [float(t) for t in times]
    if not temperatures or not times:
        raise UsageError("contour needs non-empty temperature and time ranges")
    R = GeometryCase(case).effective_radius(fiber)
    values = np.empty((len(temperatures), len(times)))
    for i, T in enumerate(temperatures):
        for j, t in enumerate(times):
            try:
                D = diffusivity(T, material.diffusivity)
                values[i, j] = concentration(r_frac, theta(D, t, R), direction)
            except PlannerError as exc:
                raise type(exc)(f"contour cell ({i}, {j}) T={T} K t={t} s: {exc}") from exc
    return values


def emit_contour(temperatures, times, fiber, case=GeometryCase.SOLID, r_frac=0.0,
                 direction=Direction.IN, material=DEFAULT_MATERIAL):
    """Contour grid as CSV text, temperature-major, 9 significant digits."""
    values = contour_grid(temperatures, times, fiber, case, r_frac, direction, material)
    buf = io.StringIO()
    buf.write(",".join(CONTOUR_HEADER) + "\n")
    for i, T in enumerate(temperatures):
        for j, t in enumerate(times):
            buf.write(
                f"{fmt(float(T), MACHINE_DIGITS)},{fmt(float(t), MACHINE_DIGITS)},"
                f"{fmt(float(values[i, j]), MACHINE_DIGITS)}\n"
            )
    return buf.getvalue()


def parse_contour(text):
    """Inverse of :func:`emit_contour`: (temperatures, times, values)."""
    lines = text.strip("\n").split("\n")
    if tuple(lines[0].split(",")) != CONTOUR_HEADER:
        raise ValueError("not a contour CSV")
    rows = [tuple(float(c) for c in line.split(",")) for line in lines[1:]]
    temps = list(dict.fromkeys(r[0] for r in rows))
    times = list(dict.fromkeys(r[1] for r in rows))
    values = np.array([r[2] for r in rows]).reshape(len(temps), len(times))
    return temps, times, values
