"""Finite-difference solver for the dimensionless radial diffusion equation.

    dC/dtheta = d2C/dr2 + (1/r) dC/dr,   0 <= r <= 1

with dC/dr = 0 on the axis and a Dirichlet value at r = 1.  On the axis
the Laplacian is replaced by its limit 2 d2C/dr2.  Time stepping is
Crank-Nicolson on a quadratically graded time grid, started with a few
pairs of backward-Euler half steps (Rannacher start-up).  Both measures
target the jump between the initial and the boundary value, which plain
Crank-Nicolson turns into persistent oscillations.

This solver shares nothing with the series evaluator and serves as its
independent check.
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .diffusion import ConcentrationField, Direction, concentration
from .errors import DomainError, NumericError


@dataclass(frozen=True)
class FdConfig:
    radial_points: int = 512
    time_steps: int = 2048
    theta_end: float = 1.0
    grading: float = 2.0
    startup_steps: int = 8

    def __post_init__(self):
        if self.radial_points < 16 or self.time_steps < 16:
            raise DomainError("radial_points and time_steps must both be >= 16")
        if not self.theta_end > 0:
            raise DomainError(f"theta_end must be > 0, got {self.theta_end}")
        if not self.grading >= 1:
            raise DomainError(f"grading must be >= 1, got {self.grading}")
        if not 0 <= self.startup_steps <= self.time_steps:
            raise DomainError("startup_steps must lie in [0, time_steps]")

    def time_grid(self):
        k = np.arange(self.time_steps + 1) / self.time_steps
        return self.theta_end * k**self.grading


def _operator(r):
    """Tridiagonal radial Laplacian on the unknown nodes r[0..M-2]."""
    h = r[1] - r[0]
    n = r.size - 1
    lower = np.zeros(n)
    diag = np.full(n, -2.0 / h**2)
    upper = np.zeros(n)
    diag[0] = -4.0 / h**2
    upper[0] = 4.0 / h**2
    ri = r[1:n]
    lower[1:] = 1.0 / h**2 - 1.0 / (2.0 * ri * h)
    upper[1:] = 1.0 / h**2 + 1.0 / (2.0 * ri * h)
    # coupling of the last unknown to the boundary node
    boundary_coupling = 1.0 / h**2 + 1.0 / (2.0 * r[n - 1] * h)
    return lower, diag, upper, boundary_coupling


def _implicit_step(C, dt, weight, lower, diag, upper, coupling, wall):
    """One theta-method step; weight 1/2 is Crank-Nicolson, 1 backward Euler."""
    explicit = (1.0 - weight) * dt
    implicit = weight * dt
    rhs = C.copy()
    if explicit:
        LC = diag * C
        LC[1:] += lower[1:] * C[:-1]
        LC[:-1] += upper[:-1] * C[1:]
        rhs += explicit * LC
    rhs[-1] += dt * coupling * wall
    ab = np.zeros((3, C.size))
    ab[0, 1:] = -implicit * upper[:-1]
    ab[1] = 1.0 - implicit * diag
    ab[2, :-1] = -implicit * lower[1:]
    return solve_banded((1, 1), ab, rhs)


def fd_solve(config=FdConfig(), direction=Direction.OUT):
    """March the radial problem to ``config.theta_end``.

    Returns the full field: ``values[i, j]`` at ``times[i]`` and
    ``r_fractions[j]``, boundary column included.
    """
    direction = Direction(direction)
    initial, wall = (1.0, 0.0) if direction is Direction.OUT else (0.0, 1.0)
    r = np.linspace(0.0, 1.0, config.radial_points)
    lower, diag, upper, coupling = _operator(r)
    n = r.size - 1
    times = config.time_grid()
    field = np.empty((times.size, r.size))
    C = np.full(n, initial)
    field[0, :n] = C
    field[0, n] = wall
    for k in range(times.size - 1):
        dt = times[k + 1] - times[k]
        try:
            if k < config.startup_steps:
                # two backward-Euler half steps damp the initial jump
                C = _implicit_step(C, 0.5 * dt, 1.0, lower, diag, upper, coupling, wall)
                C = _implicit_step(C, 0.5 * dt, 1.0, lower, diag, upper, coupling, wall)
            else:
                C = _implicit_step(C, dt, 0.5, lower, diag, upper, coupling, wall)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NumericError(f"tridiagonal solve failed at step {k}: {exc}") from exc
        if not np.all(np.isfinite(C)):
            raise NumericError(f"non-finite values at step {k}")
        field[k + 1, :n] = C
        field[k + 1, n] = wall
    return ConcentrationField(r_fractions=r, times=times, values=field)


@dataclass(frozen=True)
class Comparison:
    max_abs_error: float
    r_frac: float
    theta: float
    config: FdConfig


DEFAULT_R_FRACTIONS = tuple(i / 10 for i in range(10))


def compare_with_series(config=FdConfig(), r_fractions=DEFAULT_R_FRACTIONS,
                        theta_window=(1e-3, 1.0), direction=Direction.OUT):
    """Largest |series - FD| over ``r_fractions`` and the FD time levels in
    ``theta_window``.  FD values off the radial grid are linearly interpolated."""
    direction = Direction(direction)
    fd = fd_solve(config, direction)
    r_eval = np.asarray(r_fractions, dtype=float)
    lo, hi = theta_window
    rows = np.flatnonzero((fd.times >= lo) & (fd.times <= hi))
    if rows.size == 0:
        raise DomainError(f"no FD time level inside {theta_window}")
    worst = (-1.0, 0.0, 0.0)
    for i in rows:
        th = float(fd.times[i])
        numeric = np.interp(r_eval, fd.r_fractions, fd.values[i])
        analytic = np.atleast_1d(concentration(r_eval, th, direction))
        err = np.abs(numeric - analytic)
        j = int(np.argmax(err))
        if err[j] > worst[0]:
            worst = (float(err[j]), float(r_eval[j]), th)
    return Comparison(max_abs_error=worst[0], r_frac=worst[1], theta=worst[2],
                      config=config)


def center_value(config, direction=Direction.OUT):
    """FD concentration on the axis at ``config.theta_end``."""
    return float(fd_solve(config, direction).values[-1, 0])


def richardson_ratio(config, direction=Direction.OUT):
    """(F_h - F_h/2) / (F_h/2 - F_h/4) for the axis value at theta_end.

    Radial and time resolution are refined together; a ratio near 4
    indicates second-order convergence.
    """
    values = []
    for level in range(3):
        scale = 2**level
        refined = FdConfig(
            radial_points=(config.radial_points - 1) * scale + 1,
            time_steps=config.time_steps * scale,
            theta_end=config.theta_end,
            grading=config.grading,
        )
        values.append(center_value(refined, direction))
    return (values[0] - values[1]) / (values[1] - values[2])

