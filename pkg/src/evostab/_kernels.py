"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Every kernel exists twice: ``*_nb`` (compiled with ``numba.njit``) and
``*_np`` (vectorized numpy). The exported unsuffixed names point at one of
the two, selected once at import time:

* ``EVOSTAB_BACKEND=numpy``  forces the numpy path,
* ``EVOSTAB_BACKEND=numba``  (or unset) uses numba when importable,
* missing numba silently falls back to numpy.

All magnitudes handled here are natural logarithms; minus infinity encodes
an exact zero and must survive every kernel.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import ConfigError

_LN4 = math.log(4.0)
_NEG_INF = float("-inf")


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def cum_logaddexp_np(x: np.ndarray) -> np.ndarray:
    """Running log(sum(exp)) of a 1-d array, pivoting on the running max."""
    return np.logaddexp.accumulate(np.asarray(x, dtype=np.float64))


def simpson_panel_logs_np(node_logs: np.ndarray, knots: np.ndarray) -> np.ndarray:
    """Per-panel Simpson rule in log space.

    ``knots`` are the m+1 panel boundaries and ``node_logs`` holds log f at
    the 2m+1 interleaved points (boundary, midpoint, boundary, ...). Returns
    the m per-panel log-integrals log((h/6)(f0 + 4 fm + f1)).
    """
    node_logs = np.asarray(node_logs, dtype=np.float64)
    knots = np.asarray(knots, dtype=np.float64)
    fa = node_logs[0:-1:2]
    fm = node_logs[1::2] + _LN4
    fb = node_logs[2::2]
    h = np.diff(knots)
    stacked = np.stack((fa, fm, fb))
    pivot = stacked.max(axis=0)
    out = np.full(pivot.shape, _NEG_INF)
    finite = pivot > _NEG_INF
    if np.any(finite):
        body = np.exp(stacked[:, finite] - pivot[finite]).sum(axis=0)
        out[finite] = np.log(h[finite] / 6.0) + pivot[finite] + np.log(body)
    return out


def min_feasible_rate_np(dlog: np.ndarray, dt: np.ndarray, log_cap: float) -> float:
    """min over pairs with dt > 0 of (dlog + log_cap)/dt; +inf when empty."""
    dt = np.asarray(dt, dtype=np.float64)
    dlog = np.asarray(dlog, dtype=np.float64)
    pos = dt > 0.0
    if not np.any(pos):
        return math.inf
    # denormal dt can overflow the quotient; inf saturation is the intended
    # result (such a pair can never set the min), match the compiled twin
    with np.errstate(over="ignore"):
        return float(np.min((dlog[pos] + log_cap) / dt[pos]))


def max_shortfall_np(dlog: np.ndarray, dt: np.ndarray, rate: float) -> float:
    """max(0, max over pairs of rate*dt - dlog); the log of the N floor."""
    dt = np.asarray(dt, dtype=np.float64)
    dlog = np.asarray(dlog, dtype=np.float64)
    if dt.size == 0:
        return 0.0
    return max(0.0, float(np.max(rate * dt - dlog)))


def spike_log_u_np(t: np.ndarray) -> np.ndarray:
    """Piecewise-linear spike log-profile.

    Zero on [0, 2]; on each [n, n+1] with integer n >= 2 it climbs linearly
    to n^2 at n + 1/n and back to 0 at n + 1.
    """
    t = np.asarray(t, dtype=np.float64)
    n = np.floor(t)
    safe_n = np.maximum(n, 2.0)
    frac = t - n
    cube = safe_n * safe_n * safe_n
    up = cube * frac
    down = cube * (1.0 - frac) / (safe_n - 1.0)
    val = np.where(frac <= 1.0 / safe_n, up, down)
    return np.where(t < 2.0, 0.0, val)


# ---------------------------------------------------------------------------
# numba implementations (loop form of the same arithmetic)
# ---------------------------------------------------------------------------

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

if HAVE_NUMBA:

    @_njit(cache=True)
    def cum_logaddexp_nb(x):  # pragma: no cover - compiled
        out = np.empty_like(x)
        acc = x[0]
        out[0] = acc
        for i in range(1, x.shape[0]):
            a = acc
            b = x[i]
            if a < b:
                a, b = b, a
            if b == -np.inf:
                acc = a
            else:
                acc = a + math.log1p(math.exp(b - a))
            out[i] = acc
        return out

    @_njit(cache=True)
    def simpson_panel_logs_nb(node_logs, knots):  # pragma: no cover - compiled
        m = knots.shape[0] - 1
        out = np.empty(m)
        ln4 = math.log(4.0)
        for i in range(m):
            fa = node_logs[2 * i]
            fm = node_logs[2 * i + 1] + ln4
            fb = node_logs[2 * i + 2]
            pivot = fa
            if fm > pivot:
                pivot = fm
            if fb > pivot:
                pivot = fb
            if pivot == -np.inf:
                out[i] = -np.inf
            else:
                body = (
                    math.exp(fa - pivot)
                    + math.exp(fm - pivot)
                    + math.exp(fb - pivot)
                )
                h = knots[i + 1] - knots[i]
                out[i] = math.log(h / 6.0) + pivot + math.log(body)
        return out

    @_njit(cache=True)
    def min_feasible_rate_nb(dlog, dt, log_cap):  # pragma: no cover - compiled
        best = np.inf
        for i in range(dt.shape[0]):
            if dt[i] > 0.0:
                r = (dlog[i] + log_cap) / dt[i]
                if r < best:
                    best = r
        return best

    @_njit(cache=True)
    def max_shortfall_nb(dlog, dt, rate):  # pragma: no cover - compiled
        worst = 0.0
        for i in range(dt.shape[0]):
            v = rate * dt[i] - dlog[i]
            if v > worst:
                worst = v
        return worst

    @_njit(cache=True)
    def spike_log_u_nb(t):  # pragma: no cover - compiled
        out = np.empty_like(t)
        for i in range(t.shape[0]):
            ti = t[i]
            if ti < 2.0:
                out[i] = 0.0
                continue
            n = math.floor(ti)
            frac = ti - n
            cube = n * n * n
            if frac <= 1.0 / n:
                out[i] = cube * frac
            else:
                out[i] = cube * (1.0 - frac) / (n - 1.0)
        return out


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

def _pick_backend() -> str:
    requested = os.environ.get("EVOSTAB_BACKEND", "").strip().lower()
    if requested not in ("", "numba", "numpy"):
        raise ConfigError(
            f"EVOSTAB_BACKEND must be 'numba' or 'numpy', got {requested!r}"
        )
    if requested == "numpy":
        return "numpy"
    if not HAVE_NUMBA:
        return "numpy"
    return "numba"


BACKEND = _pick_backend()

if BACKEND == "numba":
    cum_logaddexp = cum_logaddexp_nb
    simpson_panel_logs = simpson_panel_logs_nb
    min_feasible_rate = min_feasible_rate_nb
    max_shortfall = max_shortfall_nb
    spike_log_u = spike_log_u_nb
else:
    cum_logaddexp = cum_logaddexp_np
    simpson_panel_logs = simpson_panel_logs_np
    min_feasible_rate = min_feasible_rate_np
    max_shortfall = max_shortfall_np
    spike_log_u = spike_log_u_np


def warmup() -> None:
    """Trigger JIT compilation of every kernel on tiny inputs."""
    x = np.array([0.0, -np.inf, 1.0])
    cum_logaddexp(x)
    simpson_panel_logs(np.zeros(5), np.linspace(0.0, 1.0, 3))
    min_feasible_rate(x, np.array([0.0, 0.5, 1.0]), 1.0)
    max_shortfall(x, np.array([0.0, 0.5, 1.0]), 1.0)
    spike_log_u(np.array([0.5, 2.5, 7.25]))
