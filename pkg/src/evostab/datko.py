"""Datko-style integral and sum tests for exponential instability.

The central object is the ratio

    R(t) = (1 / ||U(t,t0)x0||^p) * integral_{t0}^{t} ||U(tau,t0)x0||^p dtau

whose boundedness over every orbit is equivalent, at the certificate level,
to weak exponential instability. Everything here is measured on declared
finite horizons; a verdict reports what the scan saw, not a limit claim.
All sups and sums are carried in log space.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .certify import GrowthFunction, UniformCertificate
from .errors import InputError
from .numerics import DEFAULT_PANEL_WIDTH, log_integral_power, orbit_quad_grid
from .operators import EvolutionOperator, LogMagnitude
from .serialize import write_series_csv


# ---------------------------------------------------------------------------
# integral ratio scans
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class RatioSeries:
    """Log of the Datko ratio along one orbit, on the quadrature knots."""
    p: float
    t0: float
    times: np.ndarray
    log_ratio: np.ndarray
    quad_error: float

    @property
    def log_sup(self) -> float:
        return float(np.max(self.log_ratio))

    @property
    def K_measured(self) -> LogMagnitude:
        return LogMagnitude(self.log_sup)

    def export_csv(self, path) -> None:
        write_series_csv(path, ("t", "log_ratio"), self.times, self.log_ratio)


def datko_ratio_scan(op: EvolutionOperator, x0: np.ndarray, t0: float,
                     p: float = 2.0, horizon: float = 20.0,
                     panel_width: float = DEFAULT_PANEL_WIDTH,
                     knots: np.ndarray | None = None,
                     error_ceiling: float | None = None) -> RatioSeries:
    """Scan R(t) for one probe up to the absolute end time ``horizon``."""
    if not (horizon > t0):
        raise InputError(f"horizon {horizon} must exceed the start time {t0}")
    if knots is None:
        knots = orbit_quad_grid(op, t0, horizon, panel_width)
    table = log_integral_power(op, x0, p, knots, start=t0,
                               error_ceiling=error_ceiling)
    orbit_logs = op.orbit_log_norms(table.knots, t0, np.asarray(x0, dtype=np.float64))
    # R(t0) = 0 comes out as -inf here and never dominates the sup.
    log_ratio = table.values - p * orbit_logs
    return RatioSeries(p, t0, table.knots, log_ratio, table.quad_error)


# ---------------------------------------------------------------------------
# corpus-level verdicts
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class DatkoProbeReport:
    probe_index: int
    verdict: str              # "bounded" | "unbounded-trend"
    t0: float
    log_sup_ratio: float
    sup_time: float
    trend_confirmed: bool
    quad_error: float


@dataclasses.dataclass(frozen=True)
class DatkoVerdict:
    verdict: str              # "bounded" | "unbounded-trend"
    probe_reports: tuple[DatkoProbeReport, ...]
    K_ceiling: float
    horizon: float
    p: float
    degenerate_horizon: bool

    @property
    def bounded(self) -> bool:
        return self.verdict == "bounded"

    @property
    def t0_of(self) -> tuple[float, ...]:
        return tuple(r.t0 for r in self.probe_reports)


def _trend(series: RatioSeries, log_ceiling: float) -> bool:
    """Growth trend over the final quarter of the scanned span.

    The sup there must beat the ceiling and sit at least 50% above the
    ratio at the three-quarter mark; a one-off early excursion does not
    count as a trend.
    """
    span = series.times[-1] - series.times[0]
    cut = series.times[0] + 0.75 * span
    tail = series.times >= cut
    if not np.any(tail):
        return False
    tail_sup = float(np.max(series.log_ratio[tail]))
    mark = float(series.log_ratio[np.searchsorted(series.times, cut)])
    return tail_sup > log_ceiling and tail_sup > mark + math.log(1.5)


def datko_verdict(op: EvolutionOperator, probes: np.ndarray,
                  t0_search: np.ndarray | None = None, horizon: float = 20.0,
                  p: float = 2.0, K_ceiling: float = 1e10,
                  panel_width: float = DEFAULT_PANEL_WIDTH) -> DatkoVerdict:
    """Label each probe bounded or unbounded by its Datko ratio scan.

    A probe is bounded when some start time in ``t0_search`` keeps the
    measured sup at or below ``K_ceiling`` (the first such t0 is recorded).
    Otherwise the most favorable scan, the one with the smallest sup, is
    reported together with its tail trend. Start times leaving less than
    two quadrature panels of span are skipped and flag the verdict as
    degenerate.
    """
    probes = np.asarray(probes, dtype=np.float64)
    if probes.ndim != 2 or probes.shape[0] == 0:
        raise InputError("probes must be a nonempty (k, d) array")
    if t0_search is None:
        t0_search = np.arange(0.0, 2.0 * np.pi, 1.0)
    t0_search = np.asarray(t0_search, dtype=np.float64)
    if not (K_ceiling > 0.0):
        raise InputError(f"K_ceiling must be positive, got {K_ceiling}")
    log_ceiling = math.log(K_ceiling)

    degenerate = False
    reports: list[DatkoProbeReport] = []
    for ip in range(probes.shape[0]):
        bounded_report: DatkoProbeReport | None = None
        best: tuple[float, RatioSeries] | None = None
        for t0 in t0_search:
            if horizon - t0 < 2.0 * panel_width:
                degenerate = True
                continue
            series = datko_ratio_scan(op, probes[ip], float(t0), p=p,
                                      horizon=horizon, panel_width=panel_width)
            sup = series.log_sup
            if best is None or sup < best[0]:
                best = (sup, series)
            if sup <= log_ceiling:
                i_sup = int(np.argmax(series.log_ratio))
                bounded_report = DatkoProbeReport(
                    ip, "bounded", float(t0), sup,
                    float(series.times[i_sup]), False, series.quad_error,
                )
                break
        if bounded_report is not None:
            reports.append(bounded_report)
            continue
        if best is None:
            raise InputError(
                "no start time in t0_search leaves a scannable span"
            )
        sup, series = best
        i_sup = int(np.argmax(series.log_ratio))
        reports.append(DatkoProbeReport(
            ip, "unbounded-trend", series.t0, sup,
            float(series.times[i_sup]), _trend(series, log_ceiling),
            series.quad_error,
        ))

    verdict = "bounded" if all(r.verdict == "bounded" for r in reports) \
        else "unbounded-trend"
    return DatkoVerdict(verdict, tuple(reports), K_ceiling, horizon, p,
                        degenerate)


# ---------------------------------------------------------------------------
# explicit constants, both directions
# ---------------------------------------------------------------------------

def necessity_constant(cert: UniformCertificate, p: float) -> float:
    """Ratio ceiling N^p / (nu p) implied by a uniform certificate."""
    if not (p > 0.0):
        raise InputError(f"exponent p must be positive, got {p}")
    return cert.N ** p / (cert.nu * p)


def discrete_necessity_constant(cert: UniformCertificate, p: float) -> float:
    """Unit-step sum ceiling N^p / (1 - e^{-nu p}) implied by a uniform
    certificate."""
    if not (p > 0.0):
        raise InputError(f"exponent p must be positive, got {p}")
    return cert.N ** p / -math.expm1(-cert.nu * p)


@dataclasses.dataclass(frozen=True)
class SufficiencyConstants:
    """Growth profile constants recovered from a bounded Datko ratio."""
    L: float
    K: float
    p: float
    M: float
    omega: float

    def f(self, tau: np.ndarray | float) -> np.ndarray:
        tau = np.asarray(tau, dtype=np.float64)
        inv_p = 1.0 / self.p
        return (self.L ** inv_p) * (1.0 + tau ** inv_p) / (1.0 + self.K ** inv_p)

    @property
    def divergence_bound(self) -> float:
        """Offset past which f exceeds 1."""
        inv_p = 1.0 / self.p
        edge = (1.0 + self.K ** inv_p) / self.L ** inv_p - 1.0
        return edge ** self.p

    def growth(self, knots: np.ndarray) -> GrowthFunction:
        knots = np.asarray(knots, dtype=np.float64)
        return GrowthFunction(knots, self.f(knots), self.divergence_bound)


def sufficiency_constants(K: float, p: float, M: float,
                          omega: float) -> SufficiencyConstants:
    """Constants of the growth profile implied by ratio ceiling K and a
    decay floor (M, omega):

        L = min{ (1 - e^{-omega p}) / (M^p K omega p),  e^{-omega p} / M^p }
        f(tau) = L^{1/p} (1 + tau^{1/p}) / (1 + K^{1/p})
    """
    if not (K > 0.0):
        raise InputError(f"ratio ceiling K must be positive, got {K}")
    if not (p > 0.0):
        raise InputError(f"exponent p must be positive, got {p}")
    if not (M >= 1.0):
        raise InputError(f"decay constant M must be >= 1, got {M}")
    if not (omega > 0.0):
        raise InputError(f"decay rate omega must be > 0, got {omega}")
    wp = omega * p
    mp = M ** p
    L = min(-math.expm1(-wp) / (mp * K * wp), math.exp(-wp) / mp)
    return SufficiencyConstants(L, K, p, M, omega)


# ---------------------------------------------------------------------------
# discrete sums
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class DiscreteSumSeries:
    """Unit-step backward sums S(t) = sum_n ||U(t-n,t0)x0||^p, n = 0..floor(t-t0)."""
    p: float
    t0: float
    times: np.ndarray
    log_sum: np.ndarray
    log_ratio: np.ndarray

    @property
    def log_sup(self) -> float:
        return float(np.max(self.log_ratio))

    @property
    def K_measured(self) -> LogMagnitude:
        return LogMagnitude(self.log_sup)


def discrete_sum_scan(op: EvolutionOperator, x0: np.ndarray, t0: float,
                      p: float, t_grid: np.ndarray) -> DiscreteSumSeries:
    """Scan the unit-step sum and its ratio to ||U(t,t0)x0||^p."""
    x0 = np.asarray(x0, dtype=np.float64)
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise InputError("t_grid must be a nonempty 1-d array")
    if np.any(t_grid < t0):
        raise InputError("t_grid entries must not precede t0")
    if not (p > 0.0):
        raise InputError(f"exponent p must be positive, got {p}")
    log_sum = np.empty_like(t_grid)
    log_ratio = np.empty_like(t_grid)
    for i, t in enumerate(t_grid):
        steps = int(math.floor(t - t0))
        sample_ts = t - np.arange(steps + 1, dtype=np.float64)
        logs = p * op.orbit_log_norms(sample_ts, t0, x0)
        log_sum[i] = float(np.logaddexp.reduce(logs))
        log_ratio[i] = log_sum[i] - logs[0]
    return DiscreteSumSeries(p, t0, t_grid, log_sum, log_ratio)


def discrete_to_integral_bound(K: float, M: float, omega: float,
                               p: float) -> float:
    """Integral ratio ceiling K M^p e^{omega p} implied by a unit-step sum
    ceiling K together with a decay floor (M, omega)."""
    if not (K > 0.0):
        raise InputError(f"sum ceiling K must be positive, got {K}")
    if not (M >= 1.0):
        raise InputError(f"decay constant M must be >= 1, got {M}")
    if not (omega > 0.0):
        raise InputError(f"decay rate omega must be > 0, got {omega}")
    if not (p > 0.0):
        raise InputError(f"exponent p must be positive, got {p}")
    return K * (M ** p) * math.exp(omega * p)
