"""Bessel functions J0, J1 and the positive zeros of J0.

Small arguments use the ascending power series, large arguments the
Hankel asymptotic expansion truncated at its smallest term.  At the
crossover ``SERIES_LIMIT`` both branches agree to ~1e-12.

Zeros are seeded with McMahon's expansion and polished by Newton steps
(J0' = -J1), with a bisection fallback on the bracket
``[(n - 1/2) pi, n pi]``.  The zero table is memoized and grown on demand.
"""
import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

SERIES_LIMIT = 12.0
MAX_ZERO_INDEX = 10**6
ZERO_TOLERANCE = 1e-10

_SERIES_TERMS = 60
_HANKEL_TERMS = 60
_NEWTON_RESIDUAL = 1e-13


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Bessel argument must be finite")
    return arr


def _power_series(x, order):
    q = -0.25 * x * x
    term = np.ones_like(x) if order == 0 else 0.5 * x
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + order))
        total += term
    return total


def _hankel(x, order):
    # P ~ sum_{k even} (-1)^(k/2) a_k,  Q ~ sum_{k odd} (-1)^((k-1)/2) a_k
    # a_k = prod_{j<=k} (4 order^2 - (2j-1)^2) / (8 j x)
    m = 4.0 * order * order
    z = 8.0 * x
    p = np.ones_like(x)
    q = np.zeros_like(x)
    a = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    stopped = np.zeros(x.shape, dtype=bool)
    for k in range(1, _HANKEL_TERMS):
        a = a * (m - (2 * k - 1) ** 2) / (k * z)
        mag = np.abs(a)
        stopped |= (mag >= prev) | (mag < 1e-17)
        if stopped.all():
            break
        contrib = np.where(stopped, 0.0, a)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            q += sign * contrib
        else:
            p += sign * contrib
        prev = np.where(stopped, prev, mag)
    phase = x - (2 * order + 1) * math.pi / 4
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(phase) - q * np.sin(phase))


def _evaluate(x, order):
    arr = _as_array(x)
    ax = np.abs(arr)
    out = np.empty_like(ax)
    small = ax <= SERIES_LIMIT
    if small.any():
        out[small] = _power_series(ax[small], order)
    if (~small).any():
        out[~small] = _hankel(ax[~small], order)
    if order == 1:
        out = np.where(arr < 0, -out, out)
    if np.ndim(x) == 0:
        return float(out)
    return out


def j0(x):
    """Bessel function of the first kind, order zero."""
    return _evaluate(x, 0)


def j1(x):
    """Bessel function of the first kind, order one."""
    return _evaluate(x, 1)


def series_branch(x, order):
    """Power-series branch alone, exposed for seam checks."""
    return _power_series(_as_array(x) * 1.0, order)


def asymptotic_branch(x, order):
    """Hankel-expansion branch alone, exposed for seam checks."""
    return _hankel(_as_array(x) * 1.0, order)


@dataclass(frozen=True)
class BesselZeroTable:
    zeros: np.ndarray
    max_index: int

    def __getitem__(self, n):
        return float(self.zeros[n - 1])


def _mcmahon(n):
    b = (n - 0.25) * math.pi
    e = 1.0 / (8.0 * b)
    return b + e - (124.0 / 3.0) * e**3 + (120928.0 / 15.0) * e**5


def _bisect(n):
    lo, hi = (n - 0.5) * math.pi, n * math.pi
    flo = j0(lo)
    if flo * j0(hi) > 0:
        raise ConvergenceError(f"no sign change bracketing zero {n} of J0")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = j0(mid)
        if fmid == 0.0 or hi - lo < 4e-16 * hi:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _compute_zeros(first, last):
    n = np.arange(first, last + 1, dtype=float)
    x = _mcmahon(n)
    active = np.ones(x.shape, dtype=bool)
    for _ in range(20):
        xa = x[active]
        value = j0(xa)
        done = np.abs(value) < _NEWTON_RESIDUAL
        xa[~done] += value[~done] / j1(xa[~done])
        x[active] = xa
        active[np.flatnonzero(active)[done]] = False
        if not active.any():
            break
    lo, hi = (n - 0.5) * math.pi, n * math.pi
    bad = ~((x > lo) & (x < hi)) | ~(np.abs(j0(x)) < ZERO_TOLERANCE)
    for i in np.flatnonzero(bad):
        x[i] = _bisect(int(n[i]))
    residual = np.abs(j0(x))
    if not np.all(residual < ZERO_TOLERANCE):
        worst = int(n[np.argmax(residual)])
        raise ConvergenceError(f"zero {worst} of J0 did not converge")
    return x


_lock = threading.Lock()
_zeros = np.empty(0)


def j0_zeros(count):
    """First ``count`` positive zeros of J0 as a read-only array."""
    global _zeros
    if not 0 <= count <= MAX_ZERO_INDEX:
        raise DomainError(f"zero count must lie in [0, {MAX_ZERO_INDEX}], got {count}")
    table = _zeros
    if count > table.size:
        with _lock:
            table = _zeros
            if count > table.size:
                # grow geometrically so repeated small extensions stay cheap
                target = min(MAX_ZERO_INDEX, max(count, 2 * table.size))
                extra = _compute_zeros(table.size + 1, target)
                table = np.concatenate([table, extra])
                table.flags.writeable = False
                _zeros = table
    return table[:count]


def j0_zero(n):
    """The ``n``-th positive zero of J0 (``n`` starts at 1)."""
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"zero index must be an integer, got {n!r}")
    n = int(n)
    if not 1 <= n <= MAX_ZERO_INDEX:
        raise DomainError(f"zero index must lie in [1, {MAX_ZERO_INDEX}], got {n}")
    return float(j0_zeros(n)[n - 1])


def zero_table(count):
    return BesselZeroTable(j0_zeros(count), count)
