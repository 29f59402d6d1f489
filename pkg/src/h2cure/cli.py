"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain or data error,
3 convergence error, 4 infeasible request.  Diagnostics go to stderr.
"""
import argparse
import math
import sys

import numpy as np

from . import __version__
from .diffusion import (
    Direction,
    GeometryCase,
    OptimizerGrid,
    concentration,
    equivalent_time,
    loading_plan,
    optimize_conditions,
    schedule_concentration,
    storage_time,
    theta,
    time_to_fraction,
)
from .errors import DomainError, PlannerError, UsageError
from .files import integrate_energy, load_presets, read_index_data, read_power_log, read_schedule
from .guidance import (
    IndexData,
    bend_loss_curve,
    critical_bend_radius,
    knee_radius,
    v_number,
    v_pcf,
)
from .material import diffusivity, solubility
from .oracle_fd import FdConfig, compare_with_series, richardson_ratio
from .reports import (
    Record,
    duration_record,
    emit_contour,
    humanize_duration,
    render_records,
    render_table,
)
from .units import ROOM_TEMPERATURE, constants, parse_quantity

VERIFY_THRESHOLD = 5e-4

CASE_CHOICES = [c.value for c in GeometryCase]
DIRECTION_CHOICES = [d.value for d in Direction]


class _ArgumentDomainError(Exception):
    """Carries a domain error past argparse, which would turn any
    ValueError raised by a type converter into a usage error."""

    def __init__(self, error):
        super().__init__(str(error))
        self.error = error


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _quantity(dimension):
    def parse(text):
        try:
            return parse_quantity(text, dimension).value
        except DomainError as exc:
            raise _ArgumentDomainError(exc) from None
        except PlannerError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    parse.__name__ = dimension
    return parse


def _fraction(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def _series(dimension):
    """'a,b,c' or 'start:stop:count', each bound carrying a unit."""
    one = _quantity(dimension)

    def parse(text):
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise argparse.ArgumentTypeError(f"range must be start:stop:count, got {text!r}")
            try:
                count = int(parts[2])
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad count in {text!r}") from None
            if count < 1:
                raise argparse.ArgumentTypeError(f"count must be >= 1 in {text!r}")
            return [float(v) for v in np.linspace(one(parts[0]), one(parts[1]), count)]
        return [one(part) for part in text.split(",") if part]

    parse.__name__ = f"{dimension} list"
    return parse


temperature = _quantity("temperature")
pressure = _quantity("pressure")
length = _quantity("length")
duration = _quantity("time")
density = _quantity("concentration")


def _add_common(p):
    p.add_argument("--format", choices=["table", "csv"], default="table",
                   help="human table (default) or machine CSV")
    p.add_argument("--presets", metavar="PATH",
                   help="extra preset file (default: $H2CURE_PRESETS)")
    p.add_argument("--material", default="paper-defaults", help="material preset name")


def _add_fiber(p, case_default="solid"):
    p.add_argument("--fiber", default="LMA-PM-10", help="fiber preset name")
    p.add_argument("--case", choices=CASE_CHOICES, default=case_default,
                   help="geometry case (default: %(default)s)")


def build_parser():
    parser = _Parser(prog="h2cure", description="H2 loading, storage and curing planner")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("constants", help="physical constants in use")
    _add_common(p)

    p = sub.add_parser("diffusivity", help="D(T) of H2 in silica")
    _add_common(p)
    p.add_argument("--temp", type=temperature, required=True)

    p = sub.add_parser("solubility", help="saturation concentration S(p, T)")
    _add_common(p)
    p.add_argument("--pressure", type=pressure, required=True)
    p.add_argument("--temp", type=temperature, required=True)

    p = sub.add_parser("concentration", help="relative concentration C(r, t)")
    _add_common(p)
    _add_fiber(p)
    p.add_argument("--r-frac", type=_fraction, default=0.0, help="r / R_eff (default 0)")
    p.add_argument("--direction", choices=DIRECTION_CHOICES, default="in")
    p.add_argument("--theta", type=_fraction, help="dimensionless time D t / R^2")
    p.add_argument("--time", type=duration)
    p.add_argument("--temp", type=temperature)

    p = sub.add_parser("load-time", help="time to load the center to a fraction of S")
    _add_common(p)
    _add_fiber(p)
    p.add_argument("--fraction", type=_fraction, required=True)
    p.add_argument("--temp", type=temperature, required=True)
    p.add_argument("--r-frac", type=_fraction, default=0.0)

    p = sub.add_parser("storage-time", help="time for a loaded fiber to decay to a fraction")
    _add_common(p)
    _add_fiber(p)
    p.add_argument("--remaining", type=_fraction, required=True)
    p.add_argument("--temp", type=temperature, required=True)
    p.add_argument("--r-frac", type=_fraction, default=0.0)

    p = sub.add_parser("plan", help="four-step loading plan for a target concentration")
    _add_common(p)
    p.add_argument("--fiber", default="LMA-PM-10")
    p.add_argument("--target", type=density, required=True, help="e.g. 2e20cm-3")
    p.add_argument("--pressure", type=pressure, required=True)
    p.add_argument("--temp", type=temperature, required=True)

    p = sub.add_parser("optimize", help="fastest (p, T) pair for a target concentration")
    _add_common(p)
    _add_fiber(p)
    p.add_argument("--target", type=density, required=True)
    p.add_argument("--pmax", type=pressure, required=True)
    p.add_argument("--tmax", type=temperature, default=333.15, help="default 60C")
    p.add_argument("--tmin", type=temperature, default=273.15, help="default 0C")
    p.add_argument("--grid", type=int, default=25, help="points per axis (default 25)")
    p.add_argument("--refinements", type=int, default=2)

    p = sub.add_parser("schedule", help="concentration through a temperature history")
    _add_common(p)
    _add_fiber(p)
    p.add_argument("--file", required=True, help="CSV with duration_s,temperature_C")
    p.add_argument("--r-frac", type=_fraction, default=0.0)
    p.add_argument("--direction", choices=DIRECTION_CHOICES, default="out")

    p = sub.add_parser("contour", help="C at r on a temperature x time grid, as CSV")
    _add_common(p)
    _add_fiber(p)
    p.add_argument("--temps", type=_series("temperature"), required=True,
                   help="'0C,20C' or '0C:60C:13'")
    p.add_argument("--times", type=_series("time"), required=True,
                   help="'1h,1d' or '0s:30d:31'")
    p.add_argument("--r-frac", type=_fraction, default=0.0)
    p.add_argument("--direction", choices=DIRECTION_CHOICES, default="in")
    p.add_argument("--output", metavar="PATH", help="write CSV here instead of stdout")

    p = sub.add_parser("single-mode", help="V parameter and single-mode check")
    _add_common(p)
    p.add_argument("--wavelength", type=length, required=True)
    p.add_argument("--core-radius", type=length, help="step-index core radius")
    p.add_argument("--pitch", type=length, help="PCF hole pitch")
    p.add_argument("--na", type=_fraction, help="(effective) numerical aperture")
    p.add_argument("--index-file", help="CSV with wavelength_nm,effective_NA")

    p = sub.add_parser("bend", help="critical bend radius and bend-loss curve")
    _add_common(p)
    p.add_argument("--fiber", default="LMA-PM-10")
    p.add_argument("--wavelength", type=length, required=True)
    p.add_argument("--pitch", type=length, help="default: the fiber's pitch")
    p.add_argument("--radii", type=_series("length"), default=None,
                   help="default '1cm:10cm:10'")

    p = sub.add_parser("energy", help="cumulative optical energy of a power log")
    _add_common(p)
    p.add_argument("--log", required=True, help="CSV with time_s,power_mW")

    p = sub.add_parser("verify", help="check the series against the FD solver")
    _add_common(p)
    p.add_argument("--radial-points", type=int, default=512)
    p.add_argument("--time-steps", type=int, default=2048)
    p.add_argument("--richardson", action="store_true",
                   help="also report the FD convergence ratio")

    p = sub.add_parser("presets", help="list fiber and material presets")
    _add_common(p)
    return parser


# -- command handlers --------------------------------------------------------

def _cmd_constants(args, presets, out):
    c = constants()
    return [
        Record("boltzmann", c.boltzmann, "J/K"),
        Record("planck", c.planck, "J s"),
        Record("avogadro", c.avogadro, "1/mol"),
        Record("h2_molecular_mass", c.h2_molecular_mass, "kg"),
        Record("gas_constant", c.gas_constant, "J/(mol K)"),
    ]


def _cmd_diffusivity(args, presets, out):
    material = presets.material(args.material)
    D = diffusivity(args.temp, material.diffusivity)
    ratio = D / diffusivity(ROOM_TEMPERATURE, material.diffusivity)
    return [
        Record("temperature", args.temp, "K"),
        Record("diffusivity", D * 1e4, "cm2/s"),
        Record("ratio_to_20C", ratio, ""),
    ]


def _cmd_solubility(args, presets, out):
    material = presets.material(args.material)
    S = solubility(args.pressure, args.temp, material.solubility)
    return [
        Record("pressure", args.pressure * 1e-5, "bar"),
        Record("temperature", args.temp, "K"),
        Record("solubility", S * 1e-6, "cm-3"),
    ]


def _cmd_concentration(args, presets, out):
    material = presets.material(args.material)
    records = []
    if args.theta is not None:
        if args.time is not None or args.temp is not None:
            raise UsageError("give either --theta or --time with --temp, not both")
        th = args.theta
    else:
        if args.time is None or args.temp is None:
            raise UsageError("need --theta, or --time together with --temp")
        fiber = presets.fiber(args.fiber)
        R = GeometryCase(args.case).effective_radius(fiber)
        D = diffusivity(args.temp, material.diffusivity)
        th = theta(D, args.time, R)
        records += [Record("effective_radius", R * 1e6, "um"), duration_record("time", args.time)]
    records += [
        Record("theta", th, ""),
        Record("r_frac", args.r_frac, ""),
        Record("concentration", concentration(args.r_frac, th, args.direction), "",
               f"{args.direction}-diffusion"),
    ]
    return records


def _cmd_load_time(args, presets, out):
    material = presets.material(args.material)
    fiber = presets.fiber(args.fiber)
    R = GeometryCase(args.case).effective_radius(fiber)
    t = time_to_fraction(args.fraction, args.temp, R, Direction.IN, args.r_frac, material)
    return [
        Record("case", args.case, ""),
        Record("effective_radius", R * 1e6, "um"),
        Record("fraction", args.fraction, ""),
        duration_record("load_time", t),
    ]


def _cmd_storage_time(args, presets, out):
    material = presets.material(args.material)
    fiber = presets.fiber(args.fiber)
    t = storage_time(args.remaining, args.temp, fiber, args.case, material, args.r_frac)
    return [
        Record("case", args.case, ""),
        Record("effective_radius", GeometryCase(args.case).effective_radius(fiber) * 1e6, "um"),
        Record("remaining_fraction", args.remaining, ""),
        duration_record("storage_time", t),
    ]


def _cmd_plan(args, presets, out):
    material = presets.material(args.material)
    fiber = presets.fiber(args.fiber)
    plan = loading_plan(args.target, args.pressure, args.temp, fiber, material)
    records = [
        Record("step1_target", plan.n_target * 1e-6, "cm-3"),
        Record("step2_solubility", plan.solubility * 1e-6, "cm-3",
               f"{plan.pressure * 1e-5:.4g} bar, {plan.temperature:.2f} K"),
        Record("step2_fraction", plan.fraction, ""),
        Record("step3_theta", plan.theta, ""),
        Record("step3_diffusivity", plan.diffusivity * 1e4, "cm2/s"),
        duration_record(f"step3_time_R{plan.reference_radius * 1e6:g}um", plan.reference_time),
    ]
    for entry in plan.cases:
        records.append(duration_record(
            f"step4_{entry.case.value}_R{entry.effective_radius * 1e6:g}um", entry.time))
    records.append(Record("center_concentration", plan.center_concentration * 1e-6, "cm-3"))
    return records


def _cmd_optimize(args, presets, out):
    material = presets.material(args.material)
    fiber = presets.fiber(args.fiber)
    if args.grid < 2 or args.refinements < 0:
        raise UsageError("--grid must be >= 2 and --refinements >= 0")
    grid = OptimizerGrid(args.grid, args.grid, args.refinements, args.tmin)
    best = optimize_conditions(args.target, args.pmax, args.tmax, fiber, args.case,
                               material, grid)
    return [
        Record("pressure", best.pressure * 1e-5, "bar"),
        Record("temperature", best.temperature, "K"),
        Record("fraction", best.fraction, ""),
        duration_record("load_time", best.time),
        Record("grid_evaluations", len(best.evaluations), ""),
    ]


def _cmd_schedule(args, presets, out):
    material = presets.material(args.material)
    fiber = presets.fiber(args.fiber)
    schedule = read_schedule(args.file)
    field = schedule_concentration(schedule, fiber, args.case, args.r_frac,
                                   args.direction, material)
    machine = args.format == "csv"
    rows = [(float(t), float(v[0])) for t, v in zip(field.times, field.values)]
    out.write(render_table(("time_s", "concentration"), rows, machine))
    eq = equivalent_time(schedule, ROOM_TEMPERATURE, material)
    if not machine:
        out.write(f"equivalent time at 20C: {eq:.4g} s ({humanize_duration(eq)})\n")
    return None


def _cmd_contour(args, presets, out):
    material = presets.material(args.material)
    fiber = presets.fiber(args.fiber)
    text = emit_contour(args.temps, args.times, fiber, args.case, args.r_frac,
                        args.direction, material)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.output}: {exc.strerror}") from None
    else:
        out.write(text)
    return None


def _cmd_single_mode(args, presets, out):
    if (args.core_radius is None) == (args.pitch is None):
        raise UsageError("give exactly one of --core-radius (step index) or --pitch (PCF)")
    if args.core_radius is not None:
        if args.na is None:
            raise UsageError("--core-radius needs --na")
        check = v_number(args.core_radius, args.na, args.wavelength)
        kind, bound = "step-index", 2.405
    else:
        if (args.na is None) == (args.index_file is None):
            raise UsageError("--pitch needs exactly one of --na or --index-file")
        data = IndexData.constant(args.na) if args.na is not None else read_index_data(args.index_file)
        check = v_pcf(args.pitch, data, args.wavelength)
        kind, bound = "pcf", math.pi
    return [
        Record("fiber_type", kind, ""),
        Record("v", check.v, ""),
        Record("bound", bound, ""),
        Record("single_mode", check.single_mode, ""),
    ]


def _cmd_bend(args, presets, out):
    fiber = presets.fiber(args.fiber)
    params = presets.bend(args.fiber)
    pitch = args.pitch if args.pitch is not None else fiber.pitch
    radii = args.radii or [float(r) for r in np.linspace(0.01, 0.10, 10)]
    machine = args.format == "csv"
    rc = critical_bend_radius(pitch, args.wavelength, params)
    if not machine:
        out.write(f"critical bend radius: {rc * 100:.4g} cm\n")
        if pitch == params.pitch:
            out.write(f"1 dB/m knee: {knee_radius(args.wavelength, params) * 100:.4g} cm\n")
    rows = [(r, a) for r, a in bend_loss_curve(radii, args.wavelength, params)]
    out.write(render_table(("radius_m", "attenuation_dB_per_m"), rows, machine))
    return None


def _cmd_energy(args, presets, out):
    log = read_power_log(args.log)
    E = integrate_energy(log)
    return [
        Record("samples", len(log.times), ""),
        duration_record("duration", log.times[-1] - log.times[0]),
        Record("energy", E, "J"),
    ]


def _cmd_verify(args, presets, out):
    config = FdConfig(radial_points=args.radial_points, time_steps=args.time_steps)
    cmp = compare_with_series(config)
    passed = cmp.max_abs_error <= VERIFY_THRESHOLD
    records = [
        Record("radial_points", config.radial_points, ""),
        Record("time_steps", config.time_steps, ""),
        Record("max_abs_error", cmp.max_abs_error, ""),
        Record("at_r_frac", cmp.r_frac, ""),
        Record("at_theta", cmp.theta, ""),
        Record("threshold", VERIFY_THRESHOLD, ""),
    ]
    if args.richardson:
        records.append(Record("richardson_ratio", richardson_ratio(
            FdConfig(129, 512, 0.2)), "", "4 for second order"))
    records.append(Record("result", "PASS" if passed else "FAIL", ""))
    out.write(render_records(records, args.format == "csv"))
    return 0 if passed else 3


def _cmd_presets(args, presets, out):
    rows = []
    for name, f in sorted(presets.fibers.items()):
        rows.append(("fiber", name, f"R0={f.cladding_radius * 1e6:g}um pitch={f.pitch * 1e6:g}um "
                     f"d={f.hole_diameter * 1e6:g}um endcap={f.endcap_thickness_min * 1e6:g}-"
                     f"{f.endcap_thickness_max * 1e6:g}um"))
    for name, m in sorted(presets.materials.items()):
        rows.append(("material", name, f"D0={m.diffusivity.prefactor * 1e4:g}cm2/s "
                     f"Ea={m.diffusivity.activation_energy * 1e-3:g}kJ/mol"))
    for name in sorted(presets.bends):
        rows.append(("bend", name, "bend model"))
    out.write(render_table(("kind", "name", "summary"), rows, args.format == "csv"))
    return None


_HANDLERS = {
    "constants": _cmd_constants,
    "diffusivity": _cmd_diffusivity,
    "solubility": _cmd_solubility,
    "concentration": _cmd_concentration,
    "load-time": _cmd_load_time,
    "storage-time": _cmd_storage_time,
    "plan": _cmd_plan,
    "optimize": _cmd_optimize,
    "schedule": _cmd_schedule,
    "contour": _cmd_contour,
    "single-mode": _cmd_single_mode,
    "bend": _cmd_bend,
    "energy": _cmd_energy,
    "verify": _cmd_verify,
    "presets": _cmd_presets,
}


def run(argv, out=None, err=None):
    """Run the CLI on ``argv``; returns the exit code."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        try:
            args = build_parser().parse_args(argv)
        except _ArgumentDomainError as exc:
            raise exc.error from None
        presets = load_presets(args.presets)
        result = _HANDLERS[args.command](args, presets, out)
        if isinstance(result, list):
            out.write(render_records(result, args.format == "csv"))
            return 0
        return result or 0
    except PlannerError as exc:
        err.write(f"h2cure: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except SystemExit as exc:  # --help / --version
        return exc.code if isinstance(exc.code, int) else 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
