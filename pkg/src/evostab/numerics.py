"""Log-space quadrature of orbit-norm powers and elementary fitting.

The central object is the cumulative table of
log( integral_{t0}^{t} ||U(tau, start) x0||^p dtau )
evaluated at caller-supplied knots. Each knot pair forms one Simpson panel
with a single interior midpoint; panel masses are combined by running
log-sum-exp, so the table is exact arithmetic on logarithms and never
materializes the integrand. The reported ``quad_error`` is the maximum
log-space Richardson difference between the caller's panels and the same
panels split in half; the table itself keeps the half-step values.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import AccuracyError, InputError, OrderingError
from .operators import EvolutionOperator
from .serialize import write_series_csv

_NEG_INF = float("-inf")

DEFAULT_PANEL_WIDTH = 1.0 / 64.0

# Richardson differences below this floor measure rounding noise, not
# discretization error; downstream tolerances multiply quad_error, so it
# must not collapse to zero.
QUAD_ERROR_FLOOR = 1e-14


def quad_grid(t0: float, t_end: float, panel_width: float = DEFAULT_PANEL_WIDTH,
              kinks: np.ndarray | None = None) -> np.ndarray:
    """Knot grid for quadrature: [t0, t_end] split at every kink, each
    segment subdivided evenly into panels no wider than ``panel_width``."""
    if not (t_end >= t0):
        raise OrderingError(f"need t_end >= t0, got [{t0}, {t_end}]")
    if panel_width <= 0.0:
        raise InputError("panel width must be positive")
    if t_end == t0:
        return np.array([t0])
    bounds = [t0, t_end]
    if kinks is not None:
        for k in np.asarray(kinks, dtype=np.float64):
            if t0 < k < t_end:
                bounds.append(float(k))
    bounds = np.array(sorted(set(bounds)))
    pieces = []
    for a, b in zip(bounds[:-1], bounds[1:]):
        n = max(1, int(np.ceil((b - a) / panel_width - 1e-12)))
        pieces.append(np.linspace(a, b, n + 1)[:-1])
    pieces.append(np.array([t_end]))
    return np.concatenate(pieces)


def orbit_quad_grid(op: EvolutionOperator, t0: float, t_end: float,
                    panel_width: float = DEFAULT_PANEL_WIDTH) -> np.ndarray:
    """Knot-aware grid: panel boundaries include the operator's profile kinks."""
    return quad_grid(t0, t_end, panel_width, kinks=op.quad_kinks(t0, t_end))


@dataclasses.dataclass(frozen=True)
class CumulativeTable:
    """Cumulative log-integral of ||U(., start) x0||^p at fixed knots.

    ``values[k]`` is the log of the integral from ``knots[0]`` to
    ``knots[k]``; the first entry is -inf (empty range). ``start`` is the
    orbit's initial time, which may sit before ``knots[0]``.
    """

    p: float
    start: float
    knots: np.ndarray
    values: np.ndarray
    quad_error: float

    def value_at(self, t: float) -> float:
        idx = int(np.searchsorted(self.knots, t))
        if idx >= self.knots.size or self.knots[idx] != t:
            raise InputError(f"t={t} is not a table knot")
        return float(self.values[idx])

    def export_csv(self, path: str | Path) -> None:
        write_series_csv(path, ("t", "cum_log_integral"), self.knots, self.values)


def _interleave(knots: np.ndarray) -> np.ndarray:
    """Boundaries plus midpoints; doubles as Simpson nodes and halved panels."""
    mids = 0.5 * (knots[:-1] + knots[1:])
    nodes = np.empty(knots.size + mids.size)
    nodes[0::2] = knots
    nodes[1::2] = mids
    return nodes


def _cumulative(node_logs: np.ndarray, knots: np.ndarray) -> np.ndarray:
    panel_logs = _kernels.simpson_panel_logs(node_logs, knots)
    cum = _kernels.cum_logaddexp(panel_logs)
    return np.concatenate(([_NEG_INF], cum))


def log_integral_power(op: EvolutionOperator, x0: np.ndarray, p: float,
                       knots: np.ndarray, start: float | None = None,
                       error_ceiling: float | None = None) -> CumulativeTable:
    """Cumulative Simpson table of the orbit-norm power, entirely in log space.

    Parameters
    ----------
    op, x0 : the operator and the orbit's initial state at time ``start``.
    p : norm power, > 0.
    knots : strictly increasing panel boundaries; integration runs from
        ``knots[0]``. ``start`` defaults to ``knots[0]`` and must not
        exceed it.
    error_ceiling : optional bound on the Richardson log-error estimate;
        exceeding it raises ``AccuracyError``.
    """
    if p <= 0.0:
        raise InputError(f"norm power must be positive, got {p}")
    knots = np.asarray(knots, dtype=np.float64)
    if knots.ndim != 1 or knots.size == 0:
        raise InputError("knots must be a nonempty 1-d array")
    if np.any(np.diff(knots) <= 0.0):
        raise InputError("knots must be strictly increasing")
    if start is None:
        start = float(knots[0])
    if start > knots[0]:
        raise OrderingError(f"orbit start {start} lies after first knot {knots[0]}")

    if knots.size == 1:
        return CumulativeTable(p, start, knots, np.array([_NEG_INF]), 0.0)

    fine_knots = _interleave(knots)
    fine_nodes = _interleave(fine_knots)
    fine_logs = p * op.orbit_log_norms(fine_nodes, start, np.asarray(x0, float))

    # the coarse pass reuses every other fine node (edges and old midpoints)
    coarse = _cumulative(fine_logs[0::2], knots)
    fine = _cumulative(fine_logs, fine_knots)[0::2]

    both = np.isfinite(coarse) & np.isfinite(fine)
    if np.any(both):
        quad_error = float(np.max(np.abs(coarse[both] - fine[both])))
        quad_error = max(quad_error, QUAD_ERROR_FLOOR)
    else:
        quad_error = 0.0

    if error_ceiling is not None and quad_error > error_ceiling:
        raise AccuracyError(
            f"quadrature log-error {quad_error:.3e} exceeds ceiling {error_ceiling:.3e}",
            quad_error, error_ceiling,
        )
    return CumulativeTable(p, start, knots, fine, quad_error)


@dataclasses.dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    max_abs_residual: float


def fit_log_slope(ts: np.ndarray, logs: np.ndarray) -> LineFit:
    """Least-squares line through (t, log-magnitude) samples."""
    ts = np.asarray(ts, dtype=np.float64)
    logs = np.asarray(logs, dtype=np.float64)
    if ts.ndim != 1 or ts.shape != logs.shape or ts.size < 2:
        raise InputError("need matching 1-d arrays with at least two samples")
    if np.unique(ts).size < 2:
        raise InputError("need at least two distinct times")
    if not np.all(np.isfinite(logs)):
        raise InputError("log samples must be finite (zero magnitudes have no slope)")
    slope, intercept = np.polyfit(ts, logs, 1)
    residual = float(np.max(np.abs(logs - (slope * ts + intercept))))
    return LineFit(float(slope), float(intercept), residual)
