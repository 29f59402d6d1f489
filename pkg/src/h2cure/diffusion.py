"""Radial H2 diffusion in a fiber and the loading/storage planner built on it.

The fiber is an infinitely long silica cylinder of radius R.  For a
saturated fiber released into H2-free surroundings (out-diffusion) the
relative concentration is the Fourier-Bessel series

    C_out(r, t) = 2 sum_n J0(mu_n r / R) / (mu_n J1(mu_n)) exp(-mu_n^2 D t / R^2)

where mu_n are the positive zeros of J0.  Loading an empty fiber is the
complement, C_in = 1 - C_out.  Everything depends on time, diffusivity
and radius only through theta = D t / R^2, which gives the radius scaling
t(R1) = t(R2) (R1 / R2)^2 and lets a temperature history enter through
the accumulated integral of D(T(t)).

The derivation (separation of variables, dropping Y0 for finiteness at
the axis, projecting the uniform initial profile onto J0(mu_n r / R))
has no runtime counterpart here beyond the final series.

Three effective radii bracket a photonic crystal fiber:

* open holes: H2 escapes through the air holes, so only the silica
  inside the first ring of holes matters;
* solid: the full cladding radius, a conservative loading estimate;
* endcap limited: a solid cylinder whose radius is the thinnest endcap,
  a conservative (short) storage estimate.  This substitutes a radius
  into a radial model for what is physically axial transport.
"""
import enum
import logging
import math
import threading
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import bessel
from .errors import ConvergenceError, DomainError, InfeasibleError
from .material import DEFAULT_MATERIAL, diffusivity, solubility
from .units import ROOM_TEMPERATURE, ZERO_CELSIUS

log = logging.getLogger(__name__)

TAIL_TOLERANCE = 1e-12
MAX_TERMS = 10**6
THETA_BRACKET = (1e-9, 50.0)
INVERSION_TOLERANCE = 1e-9
MAX_CLAMP_LOGGED = 1e-6

_CHUNK = 1 << 15


class _Choice(enum.Enum):
    @classmethod
    def _missing_(cls, value):
        choices = ", ".join(m.value for m in cls)
        raise DomainError(f"unknown {cls.__name__} {value!r}; expected one of {choices}")


class Direction(_Choice):
    IN = "in"
    OUT = "out"


class InitialState(enum.Enum):
    EMPTY = "empty"
    SATURATED = "saturated"


_INITIAL_FOR = {Direction.IN: InitialState.EMPTY, Direction.OUT: InitialState.SATURATED}


@dataclass(frozen=True)
class FiberSpec:
    """Geometry of a fiber; all lengths in metres.

    ``open_hole_radius`` is the radius of silica enclosed by the first ring
    of holes.  It is not derived from pitch or hole size and must be given
    for the open-holes case to be usable.
    """

    name: str
    cladding_radius: float
    pitch: float
    hole_diameter: float
    mode_field_diameter: float
    endcap_thickness_min: float
    endcap_thickness_max: float
    open_hole_radius: float | None = None
    index_table: str | None = None

    def __post_init__(self):
        if not self.cladding_radius > 0:
            raise DomainError(f"{self.name}: cladding radius must be > 0")
        if not 0 < self.hole_diameter < self.pitch < self.cladding_radius:
            raise DomainError(
                f"{self.name}: need 0 < hole diameter < pitch < cladding radius"
            )
        if not 0 < self.endcap_thickness_min <= self.endcap_thickness_max:
            raise DomainError(f"{self.name}: need 0 < endcap min <= endcap max")
        if self.open_hole_radius is not None and not self.open_hole_radius > 0:
            raise DomainError(f"{self.name}: open-hole radius must be > 0")


LMA_PM_10 = FiberSpec(
    name="LMA-PM-10",
    cladding_radius=115e-6,
    pitch=6e-6,
    hole_diameter=3e-6,
    mode_field_diameter=10e-6,
    endcap_thickness_min=50e-6,
    endcap_thickness_max=100e-6,
    open_hole_radius=5e-6,
)


class GeometryCase(_Choice):
    OPEN_HOLES = "open-holes"
    SOLID = "solid"
    ENDCAP_LIMITED = "endcap"

    def effective_radius(self, fiber):
        if self is GeometryCase.SOLID:
            return fiber.cladding_radius
        if self is GeometryCase.ENDCAP_LIMITED:
            return fiber.endcap_thickness_min
        if fiber.open_hole_radius is None:
            raise DomainError(f"fiber {fiber.name} does not declare an open-hole radius")
        return fiber.open_hole_radius


@dataclass(frozen=True)
class GasConditions:
    pressure: float  # Pa
    temperature: float  # K

    def __post_init__(self):
        if not (math.isfinite(self.pressure) and self.pressure >= 0):
            raise DomainError(f"pressure must be >= 0 Pa, got {self.pressure}")
        if not (math.isfinite(self.temperature) and self.temperature > 0):
            raise DomainError(f"temperature must be > 0 K, got {self.temperature}")


@dataclass(frozen=True)
class DiffusionScenario:
    fiber: FiberSpec
    case: GeometryCase
    conditions: GasConditions
    direction: Direction
    initial_state: InitialState | None = None

    def __post_init__(self):
        expected = _INITIAL_FOR[self.direction]
        if self.initial_state is None:
            object.__setattr__(self, "initial_state", expected)
        elif self.initial_state is not expected:
            raise DomainError(
                f"{self.direction.value}-diffusion starts {expected.value}, "
                f"not {self.initial_state.value}"
            )

    @property
    def effective_radius(self):
        return self.case.effective_radius(self.fiber)

    def theta(self, t, material=DEFAULT_MATERIAL):
        D = diffusivity(self.conditions.temperature, material.diffusivity)
        return theta(D, t, self.effective_radius)

    def concentration(self, r_frac, t, material=DEFAULT_MATERIAL):
        return concentration(r_frac, self.theta(t, material), self.direction)


@dataclass(frozen=True)
class ConcentrationField:
    """Relative concentration sampled on (time, radius); ``values[i, j]``
    is at ``times[i]`` and ``r_fractions[j]``."""

    r_fractions: np.ndarray
    times: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class TemperatureSchedule:
    """Piecewise-constant temperature history: (duration s, temperature K)."""

    segments: tuple = ()

    def __post_init__(self):
        segs = tuple((float(d), float(T)) for d, T in self.segments)
        for i, (d, T) in enumerate(segs):
            if not (math.isfinite(d) and d > 0):
                raise DomainError(f"segment {i}: duration must be > 0 s, got {d}")
            if not (math.isfinite(T) and T > 0):
                raise DomainError(f"segment {i}: temperature must be > 0 K, got {T}")
        object.__setattr__(self, "segments", segs)

    @property
    def total_duration(self):
        return math.fsum(d for d, _ in self.segments)


def theta(D, t, R_eff):
    """Dimensionless diffusion time D t / R_eff^2."""
    if not (D > 0 and R_eff > 0):
        raise DomainError(f"diffusivity and radius must be > 0, got D={D}, R={R_eff}")
    if not t >= 0:
        raise DomainError(f"time must be >= 0, got {t}")
    return D * t / R_eff**2


def scale_time(t, R_from, R_to):
    """Rescale a diffusion time from radius ``R_from`` to ``R_to``."""
    if not (R_from > 0 and R_to > 0):
        raise DomainError(f"radii must be > 0, got {R_from}, {R_to}")
    return t * (R_to / R_from) ** 2


# -- series ------------------------------------------------------------------

def tail_bound(theta_value, n_terms):
    """Upper bound on the summed magnitude of series terms beyond ``n_terms``.

    Uses |J0| <= 1, mu |J1(mu)|^2 ~ 2/pi (padded by 1%), mu_n >= (n - 1/4) pi
    and zero spacing >= 3.
    """
    mu = (n_terms + 0.75) * math.pi
    lead = 1.01 * math.sqrt(2.0 * math.pi / mu) * math.exp(-mu * mu * theta_value)
    ratio = -math.expm1(-6.0 * mu * theta_value)
    return math.inf if ratio == 0 else lead / ratio


def terms_needed(theta_value, tolerance=TAIL_TOLERANCE):
    """Smallest term count whose tail bound is below ``tolerance``."""
    if not theta_value > 0:
        raise DomainError(f"theta must be > 0, got {theta_value}")
    if tail_bound(theta_value, MAX_TERMS) >= tolerance:
        raise ConvergenceError(
            f"theta={theta_value:g} needs more than {MAX_TERMS} terms; "
            f"best achievable tail bound {tail_bound(theta_value, MAX_TERMS):.3g}"
        )
    lo, hi = 0, MAX_TERMS
    while lo < hi:
        mid = (lo + hi) // 2
        if tail_bound(theta_value, mid) < tolerance:
            hi = mid
        else:
            lo = mid + 1
    return max(lo, 1)


_coef_lock = threading.Lock()
_coefficients = np.empty(0)


def _series_coefficients(count):
    """2 / (mu_n J1(mu_n)) for the first ``count`` zeros."""
    global _coefficients
    coef = _coefficients
    if count > coef.size:
        with _coef_lock:
            coef = _coefficients
            if count > coef.size:
                mu = bessel.j0_zeros(max(count, 2 * coef.size))
                coef = 2.0 / (mu * bessel.j1(mu))
                coef.flags.writeable = False
                _coefficients = coef
    return coef[:count]


def series_sum(r_frac, theta_value):
    """Raw (unclamped) truncated series for C_out at ``theta_value`` > 0."""
    r = np.atleast_1d(np.asarray(r_frac, dtype=float))
    n = terms_needed(theta_value)
    mu = bessel.j0_zeros(n)
    coef = _series_coefficients(n)
    total = np.zeros(r.shape)
    for start in range(0, n, _CHUNK):
        m = mu[start:start + _CHUNK]
        weight = coef[start:start + _CHUNK] * np.exp(-m * m * theta_value)
        total += weight @ bessel.j0(np.outer(m, r))
    return total


def _check_inputs(r_frac, theta_value):
    r = np.asarray(r_frac, dtype=float)
    if not np.all((r >= 0) & (r <= 1)):
        raise DomainError(f"r_frac must lie in [0, 1], got {r_frac}")
    if not (math.isfinite(theta_value) and theta_value >= 0):
        raise DomainError(f"theta must be finite and >= 0, got {theta_value}")
    return r


def c_out(r_frac, theta_value):
    """Relative concentration during out-diffusion from a saturated start.

    ``r_frac`` (scalar or array) is r / R_eff; ``theta_value`` is D t / R_eff^2.
    The result is clamped to [0, 1].
    """
    theta_value = float(theta_value)
    r = _check_inputs(r_frac, theta_value)
    flat = np.atleast_1d(r)
    if theta_value == 0.0:
        out = np.where(flat < 1.0, 1.0, 0.0)
    else:
        raw = series_sum(flat, theta_value)
        out = np.clip(raw, 0.0, 1.0)
        clamp = float(np.max(np.abs(raw - out)))
        if clamp > 0:
            log.debug("clamped series by %.3g at theta=%g", clamp, theta_value)
        out[flat == 1.0] = 0.0
    return float(out[0]) if r.ndim == 0 else out.reshape(r.shape)


def c_in(r_frac, theta_value):
    """Relative concentration during in-diffusion into an empty fiber."""
    return 1.0 - c_out(r_frac, theta_value)


def concentration(r_frac, theta_value, direction):
    direction = Direction(direction)
    if direction is Direction.OUT:
        return c_out(r_frac, theta_value)
    return c_in(r_frac, theta_value)


def invert_time(target_fraction, r_frac=0.0, direction=Direction.OUT):
    """Dimensionless time at which the concentration at ``r_frac`` reads
    ``target_fraction``.

    Brent's method on the monotone series within ``THETA_BRACKET``.
    """
    x = float(target_fraction)
    direction = Direction(direction)
    if not 0.0 < x < 1.0:
        raise DomainError(f"target fraction must lie strictly in (0, 1), got {x}")
    if not 0.0 <= r_frac <= 0.9:
        raise DomainError(f"r_frac must lie in [0, 0.9] for inversion, got {r_frac}")
    target = x if direction is Direction.OUT else 1.0 - x

    def residual(th):
        return float(series_sum(r_frac, th)[0]) - target

    lo, hi = THETA_BRACKET
    f_lo, f_hi = residual(lo), residual(hi)
    if f_lo < 0 or f_hi > 0:
        raise ConvergenceError(
            f"fraction {x} at r={r_frac} is not reached for theta in [{lo:g}, {hi:g}]"
        )
    root = brentq(residual, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    achieved = concentration(r_frac, root, direction)
    if abs(achieved - x) >= INVERSION_TOLERANCE:
        raise ConvergenceError(
            f"inversion for fraction {x} stalled at {achieved} (theta={root:g})"
        )
    return root


def time_to_fraction(fraction, temperature, radius, direction=Direction.IN,
                     r_frac=0.0, material=DEFAULT_MATERIAL):
    """Seconds until the concentration at ``r_frac`` reaches ``fraction``."""
    th = invert_time(fraction, r_frac, direction)
    return th * radius**2 / diffusivity(temperature, material.diffusivity)


# -- planning ----------------------------------------------------------------

@dataclass(frozen=True)
class CaseTime:
    case: GeometryCase
    effective_radius: float
    time: float


@dataclass(frozen=True)
class LoadingPlan:
    n_target: float
    pressure: float
    temperature: float
    solubility: float
    fraction: float
    diffusivity: float
    theta: float
    reference_radius: float
    reference_time: float
    cases: tuple
    center_concentration: float

    def time_for(self, case):
        for entry in self.cases:
            if entry.case is GeometryCase(case):
                return entry.time
        raise KeyError(case)


def loading_plan(n_target, pressure, temperature, fiber=LMA_PM_10,
                 material=DEFAULT_MATERIAL):
    """Loading time to reach ``n_target`` (1/m^3) at the fiber center.

    Follows the four planning steps: take the target, express it as a
    fraction of the solubility at (p, T), read off the time for that
    fraction at the fiber's cladding radius, then rescale that time to the
    open-holes, solid and endcap-limited effective radii.
    """
    if not (math.isfinite(n_target) and n_target > 0):
        raise DomainError(f"target concentration must be > 0, got {n_target}")
    conditions = GasConditions(pressure, temperature)
    S = solubility(conditions.pressure, conditions.temperature, material.solubility)
    x = n_target / S if S > 0 else math.inf
    if x >= 1.0:
        raise InfeasibleError(
            f"target {n_target * 1e-6:.4g} cm^-3 is not below the solubility "
            f"S = {S * 1e-6:.4g} cm^-3 at {pressure * 1e-5:.4g} bar, "
            f"{temperature:.2f} K",
            max_concentration=S,
        )
    D = diffusivity(temperature, material.diffusivity)
    th = invert_time(x, 0.0, Direction.IN)
    R_ref = fiber.cladding_radius
    t_ref = th * R_ref**2 / D
    cases = []
    for case in GeometryCase:
        try:
            R = case.effective_radius(fiber)
        except DomainError:
            continue
        cases.append(CaseTime(case, R, scale_time(t_ref, R_ref, R)))
    return LoadingPlan(
        n_target=n_target,
        pressure=pressure,
        temperature=temperature,
        solubility=S,
        fraction=x,
        diffusivity=D,
        theta=th,
        reference_radius=R_ref,
        reference_time=t_ref,
        cases=tuple(cases),
        center_concentration=x * S,
    )


def storage_time(remaining_fraction, temperature, fiber=LMA_PM_10,
                 case=GeometryCase.ENDCAP_LIMITED, material=DEFAULT_MATERIAL,
                 r_frac=0.0):
    """Seconds until a saturated fiber keeps only ``remaining_fraction`` of
    its H2 at ``r_frac``."""
    R = GeometryCase(case).effective_radius(fiber)
    return time_to_fraction(remaining_fraction, temperature, R, Direction.OUT,
                            r_frac, material)


def accumulated_theta(schedule, radius, material=DEFAULT_MATERIAL):
    """theta at every segment boundary, starting with 0."""
    exposure = [0.0]
    for duration, T in schedule.segments:
        exposure.append(exposure[-1] + diffusivity(T, material.diffusivity) * duration)
    return np.array([e / radius**2 for e in exposure])


def equivalent_time(schedule, reference_temperature=ROOM_TEMPERATURE,
                    material=DEFAULT_MATERIAL):
    """Duration at ``reference_temperature`` producing the same diffusion."""
    exposure = math.fsum(diffusivity(T, material.diffusivity) * d
                         for d, T in schedule.segments)
    return exposure / diffusivity(reference_temperature, material.diffusivity)


def schedule_concentration(schedule, fiber=LMA_PM_10, case=GeometryCase.SOLID,
                           r_frac=0.0, direction=Direction.OUT,
                           material=DEFAULT_MATERIAL):
    """Concentration at each segment boundary of a temperature history.

    D(T) only rescales time, so the series is evaluated at the accumulated
    theta; a constant-temperature schedule reproduces the direct
    evaluation exactly.
    """
    direction = Direction(direction)
    R = GeometryCase(case).effective_radius(fiber)
    r = np.atleast_1d(np.asarray(r_frac, dtype=float))
    thetas = accumulated_theta(schedule, R, material)
    values = np.array([np.atleast_1d(concentration(r, th, direction)) for th in thetas])
    times = np.concatenate([[0.0], np.cumsum([d for d, _ in schedule.segments])])
    return ConcentrationField(r_fractions=r, times=times, values=values)


# -- optimisation ------------------------------------------------------------

@dataclass(frozen=True)
class OptimizerGrid:
    pressure_points: int = 25
    temperature_points: int = 25
    refinements: int = 2
    temperature_min: float = ZERO_CELSIUS
    pressure_min: float | None = None  # defaults to p_max / pressure_points


@dataclass(frozen=True)
class Optimum:
    pressure: float
    temperature: float
    time: float
    fraction: float
    evaluations: tuple = field(default=(), repr=False)


def optimize_conditions(n_target, p_max, T_max=333.15, fiber=LMA_PM_10,
                        case=GeometryCase.SOLID, material=DEFAULT_MATERIAL,
                        grid=OptimizerGrid()):
    """Fastest (pressure, temperature) pair that can load ``n_target``.

    Scans a ``pressure_points`` x ``temperature_points`` grid over
    [p_min, p_max] x [T_min, T_max], then re-scans the cell around the best
    point ``refinements`` times.  ``evaluations`` lists every
    (p, T, time) examined; infeasible points have infinite time.
    """
    if not (p_max > 0 and T_max > 0):
        raise DomainError("p_max and T_max must be > 0")
    if not n_target > 0:
        raise DomainError(f"target concentration must be > 0, got {n_target}")
    p_min = grid.pressure_min if grid.pressure_min is not None else p_max / grid.pressure_points
    if not 0 < p_min <= p_max or not 0 < grid.temperature_min <= T_max:
        raise DomainError("empty optimisation grid")
    R = GeometryCase(case).effective_radius(fiber)
    cache = {}
    evaluations = []

    def loading_time(p, T):
        key = (p, T)
        if key not in cache:
            S = solubility(p, T, material.solubility)
            x = n_target / S
            if x >= 1.0:
                t = math.inf
            else:
                t = time_to_fraction(x, T, R, Direction.IN, 0.0, material)
            cache[key] = (t, x, S)
            evaluations.append((p, T, t))
        return cache[key]

    def scan(ps, Ts):
        best = None
        for i, p in enumerate(ps):
            for j, T in enumerate(Ts):
                t = loading_time(float(p), float(T))[0]
                if best is None or t < best[0]:
                    best = (t, i, j)
        return best

    ps = np.linspace(p_min, p_max, grid.pressure_points)
    Ts = np.linspace(grid.temperature_min, T_max, grid.temperature_points)
    best_t, i, j = scan(ps, Ts)
    if math.isinf(best_t):
        S_max = max(s for _, _, s in cache.values())
        raise InfeasibleError(
            f"target {n_target * 1e-6:.4g} cm^-3 exceeds the solubility at every "
            f"grid point (max {S_max * 1e-6:.4g} cm^-3)",
            max_concentration=S_max,
        )
    best = (best_t, float(ps[i]), float(Ts[j]))
    for _ in range(grid.refinements):
        ps = np.linspace(ps[max(i - 1, 0)], ps[min(i + 1, ps.size - 1)], grid.pressure_points)
        Ts = np.linspace(Ts[max(j - 1, 0)], Ts[min(j + 1, Ts.size - 1)], grid.temperature_points)
        t, i, j = scan(ps, Ts)
        if t < best[0]:
            best = (t, float(ps[i]), float(Ts[j]))
    t, p, T = best
    return Optimum(pressure=p, temperature=T, time=t, fraction=cache[(p, T)][1],
                   evaluations=tuple(evaluations))
