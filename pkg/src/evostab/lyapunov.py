"""Lyapunov functions for instability built from orbit integrals.

Along one orbit the function

    L(t) = - integral_{t0}^{t} ||U(tau,t0)x0||^2 dtau

is nonpositive, satisfies the two-time equation
L(t) = L(s) - integral_s^t ||U||^2, and weak exponential instability with
constants (N, nu) forces the bound |L(t)| <= m ||U(t,t0)x0||^2 with
m = N^2 / (2 nu). Tables store log|L| so late-time magnitudes never
overflow; the displayed value is -exp(log|L|).
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .certify import WeakCertificate
from .datko import RatioSeries
from .errors import InputError, PreconditionError
from .numerics import (DEFAULT_PANEL_WIDTH, log_integral_power,
                       orbit_quad_grid, quad_grid)
from .operators import EvolutionOperator
from .serialize import write_series_csv


@dataclasses.dataclass(frozen=True)
class LyapunovTable:
    """log|L| on quadrature knots, with the orbit log-norms alongside."""
    t0: float
    x0: np.ndarray
    knots: np.ndarray
    log_abs: np.ndarray
    orbit_log: np.ndarray
    quad_error: float
    panel_width: float

    def value_at(self, t: float) -> float:
        """L(t) itself; may underflow to -0.0 or overflow to -inf in
        extreme ranges, which is why comparisons use log_abs."""
        idx = np.searchsorted(self.knots, t)
        if idx == self.knots.size or self.knots[idx] != t:
            raise InputError(f"time {t} is not a table knot")
        return -math.exp(self.log_abs[idx]) if math.isfinite(self.log_abs[idx]) \
            else (-0.0 if self.log_abs[idx] == -math.inf else -math.inf)

    def export_csv(self, path) -> None:
        write_series_csv(path, ("t", "L_value_neglog"), self.knots, self.log_abs)


def build_lyapunov(op: EvolutionOperator, x0: np.ndarray, t0: float,
                   horizon: float = 20.0,
                   panel_width: float = DEFAULT_PANEL_WIDTH,
                   knots: np.ndarray | None = None,
                   error_ceiling: float | None = None) -> LyapunovTable:
    x0 = np.asarray(x0, dtype=np.float64)
    if knots is None:
        if not (horizon > t0):
            raise InputError(f"horizon {horizon} must exceed the start time {t0}")
        knots = orbit_quad_grid(op, t0, horizon, panel_width)
    table = log_integral_power(op, x0, 2.0, knots, start=t0,
                               error_ceiling=error_ceiling)
    orbit_log = op.orbit_log_norms(table.knots, t0, x0)
    return LyapunovTable(t0, x0, table.knots, table.values, orbit_log,
                         table.quad_error, panel_width)


# ---------------------------------------------------------------------------
# two-time equation
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class EquationPair:
    s: float
    t: float
    residual: float
    indep_quad_error: float


@dataclasses.dataclass(frozen=True)
class EquationReport:
    passed: bool
    max_residual: float
    allowance: float
    tol: float
    pairs: tuple[EquationPair, ...]


def verify_lyapunov_equation(op: EvolutionOperator, table: LyapunovTable,
                             pairs: list[tuple[float, float]] | None = None,
                             tol: float = 1e-8) -> EquationReport:
    """Check L(t) = L(s) - integral_s^t ||U||^2 at sampled knot pairs.

    The segment integral is recomputed on a refined grid independent of the
    table's cumulative pass, so a perturbed table cannot agree with itself.
    Residuals are relative: |e^{B-A} + e^{C-A} - 1| with A = log|L(t)|,
    B = log|L(s)|, C the independent segment integral. The allowance adds
    both quadrature error estimates to ``tol``.
    """
    if pairs is None:
        idx = np.unique(np.linspace(0, table.knots.size - 1, 5).astype(int))
        pairs = [(float(table.knots[i]), float(table.knots[j]))
                 for ii, i in enumerate(idx) for j in idx[ii + 1:]]
    if not pairs:
        raise InputError("need at least one (s, t) pair")

    rows: list[EquationPair] = []
    max_residual = 0.0
    max_indep_error = 0.0
    for s, t in pairs:
        if not (table.t0 <= s < t):
            raise InputError(f"pair ({s}, {t}) is not ordered inside the table")
        a = _log_abs_at(table, t)
        b = _log_abs_at(table, s)
        seg_knots = quad_grid(s, t, table.panel_width / 2.0,
                              kinks=op.quad_kinks(s, t))
        seg = log_integral_power(op, table.x0, 2.0, seg_knots, start=table.t0)
        c = float(seg.values[-1])
        residual = abs(math.exp(b - a) + math.exp(c - a) - 1.0)
        max_residual = max(max_residual, residual)
        max_indep_error = max(max_indep_error, seg.quad_error)
        rows.append(EquationPair(s, t, residual, seg.quad_error))

    allowance = tol + table.quad_error + max_indep_error
    return EquationReport(max_residual <= allowance, max_residual, allowance,
                          tol, tuple(rows))


def _log_abs_at(table: LyapunovTable, t: float) -> float:
    idx = np.searchsorted(table.knots, t)
    if idx == table.knots.size or table.knots[idx] != t:
        raise InputError(f"time {t} is not a table knot")
    return float(table.log_abs[idx])


# ---------------------------------------------------------------------------
# the instability bound
# ---------------------------------------------------------------------------

def bound_constant(cert: WeakCertificate) -> float:
    """m = N^2 / (2 nu), the Lyapunov ceiling a weak certificate implies."""
    return cert.N ** 2 / (2.0 * cert.nu)


@dataclasses.dataclass(frozen=True)
class BoundReport:
    passed: bool
    m: float
    max_excess: float          # log-domain excess over the ceiling
    witness_time: float | None
    tol: float


def verify_lyapunov_bound(table: LyapunovTable, m: float,
                          tol: float = 1e-9) -> BoundReport:
    """Check |L(t)| <= m ||U(t,t0)x0||^2 in log form over the table knots."""
    if not (m > 0.0):
        raise InputError(f"ceiling m must be positive, got {m}")
    excess = table.log_abs - (math.log(m) + 2.0 * table.orbit_log)
    finite = np.isfinite(excess)
    if not np.any(finite):
        return BoundReport(True, m, -math.inf, None, tol)
    i_max = int(np.argmax(np.where(finite, excess, -math.inf)))
    max_excess = float(excess[i_max])
    passed = max_excess <= tol
    witness = float(table.knots[i_max]) if not passed else None
    return BoundReport(passed, m, max_excess, witness, tol)


# ---------------------------------------------------------------------------
# bridge back to the Datko ratio
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class LyapunovDatkoBridge:
    series: RatioSeries
    m: float
    within_bound: bool


def lyapunov_to_datko(table: LyapunovTable, m: float,
                      equation_report: EquationReport,
                      tol: float = 1e-9) -> LyapunovDatkoBridge:
    """Read the Datko ratio |L(t)| / ||U(t,t0)x0||^2 off a verified table.

    The two-time equation must have been checked first; the table is the
    only quadrature this bridge consumes, so an unverified one would
    propagate silently.
    """
    if not equation_report.passed:
        raise PreconditionError(
            "lyapunov_to_datko requires a passing two-time equation report"
        )
    log_ratio = table.log_abs - 2.0 * table.orbit_log
    series = RatioSeries(2.0, table.t0, table.knots, log_ratio,
                         table.quad_error)
    within = series.log_sup <= math.log(m) + tol
    return LyapunovDatkoBridge(series, m, within)
