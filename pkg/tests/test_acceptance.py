"""The fourteen acceptance criteria, one test each.

Run alone with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per
criterion is printed in the terminal summary.
"""
import math
import subprocess
import sys

import numpy as np
import pytest

import oracles
from h2cure import bessel
from h2cure.cli import run
from h2cure.diffusion import (
    LMA_PM_10,
    Direction,
    TemperatureSchedule,
    c_in,
    c_out,
    concentration,
    equivalent_time,
    invert_time,
    loading_plan,
    scale_time,
    schedule_concentration,
    theta,
)
from h2cure.files import PowerLog, integrate_energy
from h2cure.guidance import bend_loss_curve, critical_bend_radius, knee_radius
from h2cure.material import diffusivity, solubility
from h2cure.oracle_fd import FdConfig, compare_with_series, fd_solve, richardson_ratio


def test_01_diffusivity_ratio(acceptance):
    with acceptance(1, "D(333.15 K)/D(293.15 K) = 7.24 +- 0.01"):
        ratio = diffusivity(333.15) / diffusivity(293.15)
        assert abs(ratio - 7.24) <= 0.01
        oracle = oracles.diffusivity_cm2_s(333.15) / oracles.diffusivity_cm2_s(293.15)
        assert ratio == pytest.approx(float(oracle), rel=1e-12)


def test_02_radius_scaling(acceptance):
    with acceptance(2, "115 um -> 5 um divides time by 529"):
        for t in (1.0, 1.359e6, 3.7e9):
            assert scale_time(t, 115e-6, 5e-6) == pytest.approx(t / 529, rel=1e-12)


def test_03_series_matches_fd(acceptance):
    with acceptance(3, "series vs FD <= 5e-4; FD second order"):
        cmp = compare_with_series(FdConfig(radial_points=512, time_steps=2048))
        assert cmp.max_abs_error <= 5e-4
        ratio = richardson_ratio(FdConfig(129, 512, 0.2005240814102))
        assert 3.5 < ratio < 4.5


def test_04_complementarity(acceptance):
    with acceptance(4, "c_in + c_out = 1 on 1e4 random points"):
        rng = np.random.default_rng(20261018)
        r = rng.uniform(0.0, 1.0, 10_000)
        th = 10 ** rng.uniform(-5, 1, 10_000)
        worst = max(abs(c_in(ri, ti) + c_out(ri, ti) - 1.0) for ri, ti in zip(r, th))
        assert worst <= 1e-9


def test_05_radial_profile(acceptance):
    with acceptance(5, "c(0.2)/c(0) = 0.943 +- 0.002 for theta >= 0.5"):
        expected = float(oracles.bessel_power_series(0.2 * 2.404825557695773, 0))
        assert abs(expected - 0.943) < 1e-3
        for th in (0.5, 0.8, 1.0, 2.0):
            ratio = c_out(0.2, th) / c_out(0.0, th)
            assert abs(ratio - 0.943) <= 0.002


def test_06_solubility(acceptance):
    with acceptance(6, "S linear in p; S(100 bar, 20 C) matches oracle"):
        base = solubility(1e7, 293.15)
        for factor in (0.5, 2.0, 3.0, 16.0):
            assert solubility(factor * 1e7, 293.15) == pytest.approx(factor * base, rel=1e-12)
        oracle = float(oracles.solubility_cm3(1e7, 293.15))
        assert base * 1e-6 == pytest.approx(oracle, rel=1e-3)
        assert 1e20 <= base * 1e-6 <= 1e22


def _fd_time_to_center(fraction, R, D):
    """Interpolate the FD center trace for the in-diffusion crossing."""
    field = fd_solve(FdConfig(radial_points=512, time_steps=2048, theta_end=0.4), Direction.IN)
    center = field.values[:, 0]
    k = int(np.argmax(center >= fraction))
    th0, th1 = field.times[k - 1], field.times[k]
    c0, c1 = center[k - 1], center[k]
    th = th0 + (fraction - c0) * (th1 - th0) / (c1 - c0)
    return th * R**2 / D


def test_07_loading_time(acceptance):
    with acceptance(7, "50% center loading, solid 230 um, 20 C = 1.36e6 s +- 2%"):
        S = solubility(1e7, 293.15)
        plan = loading_plan(0.5 * S, 1e7, 293.15, LMA_PM_10)
        t = plan.time_for("solid")
        oracle = _fd_time_to_center(0.5, 115e-6, diffusivity(293.15))
        assert t == pytest.approx(oracle, rel=0.02)
        assert t == pytest.approx(1.36e6, rel=0.02)
        assert 14 < t / 86400 < 17


def test_08_boundary_and_initial(acceptance):
    with acceptance(8, "c_out(1) = 0; c_out(r<=0.5, 1e-9) ~ 1; monotone in theta"):
        for th in (1e-9, 1e-5, 0.01, 0.2, 1.0, 10.0):
            assert c_out(1.0, th) == 0.0
        for r in np.linspace(0, 0.5, 11):
            assert c_out(r, 1e-9) >= 1 - 1e-6
        thetas = np.geomspace(1e-5, 3.0, 300)
        for r in (0.0, 0.3, 0.6, 0.9):
            values = np.array([c_out(r, th) for th in thetas])
            # values are only defined to the series tolerance of 1e-12
            assert np.all(np.diff(values) <= 1e-12)
            assert values[-1] < values[0]


def test_09_bessel_layer(acceptance):
    with acceptance(9, "J0 zeros, mu_1 vs bisection, J0' = -J1"):
        zeros = bessel.j0_zeros(10_000)
        assert np.max(np.abs(bessel.j0(zeros))) < 1e-10
        mu1 = oracles.bisect(lambda x: float(oracles.bessel_power_series(x, 0)), 2.0, 3.0)
        assert abs(zeros[0] - mu1) <= 1e-6
        assert abs(zeros[0] - 2.404826) <= 1e-6
        rng = np.random.default_rng(7)
        xs = rng.uniform(0.1, 50.0, 100)
        h = 1e-5
        derivative = (bessel.j0(xs + h) - bessel.j0(xs - h)) / (2 * h)
        assert np.max(np.abs(derivative + bessel.j1(xs))) <= 1e-6


def test_10_bend_scaling(acceptance):
    with acceptance(10, "R_c ratio 1/4; curve monotone; knee ratio 4 +- 10%"):
        assert critical_bend_radius(6e-6, 313e-9) / critical_bend_radius(6e-6, 626e-9) == 4.0
        radii = np.linspace(0.005, 0.2, 200)
        for wl in (313e-9, 626e-9):
            att = np.array([a for _, a in bend_loss_curve(radii, wl)])
            assert np.all(att >= 0)
            assert np.all(np.diff(att) < 0)
        ratio = knee_radius(313e-9) / knee_radius(626e-9)
        assert abs(ratio - 4.0) <= 0.4


def test_11_energy(acceptance):
    with acceptance(11, "20 mW for 24 h = 1728 J"):
        log = PowerLog(times=(0.0, 43200.0, 86400.0), powers=(0.02, 0.02, 0.02))
        assert integrate_energy(log) == 1728.0


def test_12_round_trip(acceptance):
    with acceptance(12, "c(r, invert_time(x, r)) = x within 1e-9"):
        for direction in (Direction.OUT, Direction.IN):
            for r in (0.0, 0.2):
                for x in np.arange(1, 10) / 10:
                    th = invert_time(x, r, direction)
                    assert abs(concentration(r, th, direction) - x) <= 1e-9


def test_13_schedule(acceptance):
    with acceptance(13, "one-segment schedule bit-exact; -70 C month = 29 +- 1 min"):
        for T, d, r in ((293.15, 86400.0 * 3, 0.0), (333.15, 5e4, 0.4), (203.15, 1e7, 0.9)):
            field = schedule_concentration(TemperatureSchedule(((d, T),)), r_frac=r)
            direct = c_out(r, theta(diffusivity(T), d, LMA_PM_10.cladding_radius))
            assert field.values[-1, 0] == direct
        month = TemperatureSchedule(((30 * 86400.0, 203.15),))
        minutes = equivalent_time(month, 293.15) / 60
        oracle = float(30 * 86400 * oracles.diffusivity_cm2_s(203.15)
                       / oracles.diffusivity_cm2_s(293.15)) / 60
        assert minutes == pytest.approx(oracle, rel=1e-9)
        assert abs(minutes - 29) <= 1


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "h2cure", *args],
                          capture_output=True, check=False)


def test_14_cli(acceptance, tmp_path):
    with acceptance(14, "CLI byte-identical output; exit codes 0/1/2/3/4"):
        args = ("plan", "--target", "2e20cm-3", "--pressure", "160bar", "--temp", "60C",
                "--format", "csv")
        first, second = _cli(*args), _cli(*args)
        assert first.returncode == 0
        assert first.stdout == second.stdout and first.stdout
        assert run(["plan", "--target", "2e20cm-3"]) == 1
        assert run(["diffusivity", "--temp=-300C"]) == 2
        assert run(["concentration", "--theta", "1e-13"]) == 3
        assert run(["plan", "--target", "1e25cm-3", "--pressure", "1bar",
                    "--temp", "20C"]) == 4


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
