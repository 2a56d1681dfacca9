"""Scan-bounded certificates and checks for exponential instability notions.

Five definition classes are covered, all validated purely in log space over
declared finite grids (verdicts never extrapolate beyond the scan):

* decay floor        M ||U(t,t0)x0|| >= e^{-omega (t-t0)} ||x0||
* uniform            N ||U(t,t0)x0|| >= e^{nu (t-s)} ||U(s,t0)x0||
* nonuniform         N(t) ||U(t,t0)x0|| >= e^{nu (t-t0)} ||x0||
* anchored (BV)      N e^{alpha t} ||U(t,t0)x0|| >= e^{nu (t-t0)} ||x0||
* weak               the uniform inequality with a per-probe start time

plus the growth-function bridge: a nondecreasing unbounded f with
||U(t,t0)x0|| >= f(t-s) ||U(s,t0)x0|| is equivalent to a weak-form
exponential pair (N, nu), with explicit constants in both directions.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import _kernels
from .errors import DivergenceNotObservedError, InputError
from .numerics import LineFit, fit_log_slope
from .operators import EvolutionOperator, LogProfile

_NEG_INF = float("-inf")


# ---------------------------------------------------------------------------
# certificate types
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class DecayCertificate:
    """Orbits cannot collapse faster than e^{-omega dt}, up to the factor M."""
    M: float
    omega: float

    def __post_init__(self):
        if not (self.M >= 1.0):
            raise InputError(f"decay constant M must be >= 1, got {self.M}")
        if not (self.omega > 0.0):
            raise InputError(f"decay rate omega must be > 0, got {self.omega}")


@dataclasses.dataclass(frozen=True)
class UniformCertificate:
    N: float
    nu: float

    def __post_init__(self):
        if not (self.N >= 1.0):
            raise InputError(f"instability constant N must be >= 1, got {self.N}")
        if not (self.nu > 0.0):
            raise InputError(f"instability rate nu must be > 0, got {self.nu}")


@dataclasses.dataclass(frozen=True)
class NonuniformCertificate:
    """Time-dependent prefactor N(t) supplied as a log-profile."""
    log_N: LogProfile
    nu: float

    def __post_init__(self):
        if not (self.nu > 0.0):
            raise InputError(f"instability rate nu must be > 0, got {self.nu}")


@dataclasses.dataclass(frozen=True)
class BVCertificate:
    """Anchored growth: prefactor N e^{alpha t} referenced to absolute time."""
    N: float
    alpha: float
    nu: float

    def __post_init__(self):
        if not (self.N >= 1.0):
            raise InputError(f"constant N must be >= 1, got {self.N}")
        if not (self.alpha >= 0.0):
            raise InputError(f"anchor rate alpha must be >= 0, got {self.alpha}")
        if not (self.nu > 0.0):
            raise InputError(f"instability rate nu must be > 0, got {self.nu}")


@dataclasses.dataclass(frozen=True)
class WeakCertificate:
    """One (N, nu) pair with a start time chosen per probe."""
    N: float
    nu: float
    t0_of: tuple[float, ...]

    def __post_init__(self):
        if not (self.N >= 1.0):
            raise InputError(f"instability constant N must be >= 1, got {self.N}")
        if not (self.nu > 0.0):
            raise InputError(f"instability rate nu must be > 0, got {self.nu}")


# ---------------------------------------------------------------------------
# scan grids and cached orbit tables
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class ScanGrids:
    """Triple grid: start times, s = t0 + s_offset, t = s + t_offset."""
    t0_grid: np.ndarray
    s_offsets: np.ndarray
    t_offsets: np.ndarray

    def describe(self) -> dict:
        return {
            "t0_grid": [float(v) for v in self.t0_grid],
            "s_offsets": [float(v) for v in self.s_offsets],
            "t_offsets": [float(v) for v in self.t_offsets],
        }


def default_scan_grids() -> ScanGrids:
    t0 = np.append(np.arange(26) * 0.25, 2.0 * np.pi)
    return ScanGrids(
        t0_grid=t0,
        s_offsets=np.arange(21) * 0.5,
        t_offsets=np.arange(41) * 0.5,
    )


def _validate_offsets(name: str, arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InputError(f"{name} must be a nonempty 1-d array")
    if np.any(arr < 0.0) or np.any(np.diff(arr) <= 0.0):
        raise InputError(f"{name} must be nonnegative and strictly increasing")
    return arr


class PairScan:
    """Orbit log-norms of every probe over a full (t0, s, t) triple grid.

    Arrays are indexed [t0, s_offset, t_offset, probe]; building the scan
    once lets many candidate certificates be checked without re-evaluating
    orbits. ``dlog`` is log||U(t,t0)x0|| - log||U(s,t0)x0||.
    """

    def __init__(self, op: EvolutionOperator, probes: np.ndarray, grids: ScanGrids):
        probes = np.asarray(probes, dtype=np.float64)
        if probes.ndim != 2 or probes.shape[0] == 0 or probes.shape[1] != op.dimension:
            raise InputError(f"probes must have shape (k, {op.dimension})")
        if np.any(np.linalg.norm(probes, axis=1) == 0.0):
            raise InputError("zero probes are excluded from scans")
        t0_grid = _validate_offsets("t0_grid", grids.t0_grid)
        s_off = _validate_offsets("s_offsets", grids.s_offsets)
        t_off = _validate_offsets("t_offsets", grids.t_offsets)

        n0, ns, nt, npr = t0_grid.size, s_off.size, t_off.size, probes.shape[0]
        self.op = op
        self.probes = probes
        self.grids = ScanGrids(t0_grid, s_off, t_off)
        self.s_times = t0_grid[:, None] + s_off[None, :]
        self.t_times = self.s_times[:, :, None] + t_off[None, None, :]
        self.log_s = np.empty((n0, ns, npr))
        self.log_t = np.empty((n0, ns, nt, npr))
        for ip in range(npr):
            for i0, t0 in enumerate(t0_grid):
                stacked = np.concatenate(
                    [self.s_times[i0], self.t_times[i0].ravel()]
                )
                logs = op.orbit_log_norms(stacked, float(t0), probes[ip])
                self.log_s[i0, :, ip] = logs[:ns]
                self.log_t[i0, :, :, ip] = logs[ns:].reshape(ns, nt)
        self.dlog = self.log_t - self.log_s[:, :, None, :]

    @property
    def probe_count(self) -> int:
        return self.probes.shape[0]

    def pair_arrays(self, i0: int, ip: int) -> tuple[np.ndarray, np.ndarray]:
        """Flattened (dlog, dtau) for one start time and probe."""
        dlog = np.ascontiguousarray(self.dlog[i0, :, :, ip]).ravel()
        dtau = np.ascontiguousarray(
            np.broadcast_to(
                self.grids.t_offsets[None, :],
                (self.grids.s_offsets.size, self.grids.t_offsets.size),
            )
        ).ravel()
        return dlog, dtau


# ---------------------------------------------------------------------------
# witnesses and reports
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class ScanWitness:
    t0: float
    s: float
    t: float
    probe_index: int
    margin: float


@dataclasses.dataclass(frozen=True)
class InstabilityCheck:
    kind: str
    verdict: str  # "certified" | "refuted"
    min_margin: float
    tol: float
    witness: ScanWitness | None
    grids: dict

    @property
    def passed(self) -> bool:
        return self.verdict == "certified"


def _worst_witness(scan: PairScan, margins: np.ndarray) -> ScanWitness:
    flat = int(np.argmin(margins))
    i0, i1, i2, ip = np.unravel_index(flat, margins.shape)
    t0 = float(scan.grids.t0_grid[i0])
    s = float(scan.s_times[i0, i1])
    t = float(scan.t_times[i0, i1, i2])
    return ScanWitness(t0, s, t, int(ip), float(margins[i0, i1, i2, ip]))


# ---------------------------------------------------------------------------
# decay floor
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class DecayWitness:
    t0: float
    t: float
    probe_index: int
    drop_rate: float
    fit: LineFit


@dataclasses.dataclass(frozen=True)
class DecayFit:
    verdict: str  # "certified" | "refuted"
    certificate: DecayCertificate | None
    omega_needed: float
    min_margin: float
    witness: DecayWitness | None
    grids: dict


def fit_decay(op: EvolutionOperator, probes: np.ndarray, t0_grid: np.ndarray,
              t_offsets: np.ndarray, omega_cap: float = 64.0) -> DecayFit:
    """Fit the smallest decay floor (M, omega) observable on a (t, t0) grid.

    M always lands at 1 once omega equals the steepest observed drop rate;
    orbits that never drop get the unit rate. A probe whose required rate
    exceeds ``omega_cap`` refutes the floor at desk scale and is reported
    with its fitted orbit line, never extrapolated into a proof.
    """
    grids = ScanGrids(
        np.asarray(t0_grid, dtype=np.float64),
        np.zeros(1),
        np.asarray(t_offsets, dtype=np.float64),
    )
    scan = PairScan(op, probes, grids)
    dlog = scan.dlog[:, 0, :, :]          # [t0, t, probe]
    dtau = scan.grids.t_offsets

    pos = dtau > 0.0
    rates = np.zeros_like(dlog)
    rates[:, pos, :] = -dlog[:, pos, :] / dtau[None, pos, None]
    omega_needed = float(np.max(rates)) if rates.size else 0.0
    grid_echo = grids.describe()

    if omega_needed > omega_cap:
        flat = int(np.argmax(rates))
        i0, i2, ip = np.unravel_index(flat, rates.shape)
        t0 = float(scan.grids.t0_grid[i0])
        fit = fit_log_slope(scan.t_times[i0, 0, :], scan.log_t[i0, 0, :, ip])
        witness = DecayWitness(
            t0, float(scan.t_times[i0, 0, i2]), int(ip),
            float(rates[i0, i2, ip]), fit,
        )
        return DecayFit("refuted", None, omega_needed, _NEG_INF, witness, grid_echo)

    omega = omega_needed if omega_needed > 0.0 else 1.0
    margins = dlog + omega * dtau[None, :, None]   # log M = 0
    min_margin = float(np.min(margins))
    return DecayFit(
        "certified", DecayCertificate(1.0, omega), omega_needed,
        min_margin, None, grid_echo,
    )


# ---------------------------------------------------------------------------
# uniform and nonuniform checks
# ---------------------------------------------------------------------------

def check_uniform(op: EvolutionOperator, cert: UniformCertificate,
                  probes: np.ndarray, grids: ScanGrids | None = None,
                  tol: float = 1e-9, scan: PairScan | None = None) -> InstabilityCheck:
    """Validate N ||U(t,t0)x0|| >= e^{nu (t-s)} ||U(s,t0)x0|| over the triple grid.

    Pass ``scan`` to reuse orbit tables across many candidate certificates.
    """
    if scan is None:
        scan = PairScan(op, probes, grids or default_scan_grids())
    margins = (
        math.log(cert.N)
        + scan.dlog
        - cert.nu * scan.grids.t_offsets[None, None, :, None]
    )
    min_margin = float(np.min(margins))
    verdict = "certified" if min_margin >= -tol else "refuted"
    witness = _worst_witness(scan, margins) if verdict == "refuted" else None
    return InstabilityCheck("uniform", verdict, min_margin, tol, witness,
                            scan.grids.describe())


def check_nonuniform(op: EvolutionOperator, cert: NonuniformCertificate,
                     probes: np.ndarray, t0_grid: np.ndarray,
                     t_offsets: np.ndarray, tol: float = 1e-9) -> InstabilityCheck:
    """Validate N(t) ||U(t,t0)x0|| >= e^{nu (t-t0)} ||x0|| over a (t0, t) grid."""
    grids = ScanGrids(
        np.asarray(t0_grid, dtype=np.float64),
        np.zeros(1),
        np.asarray(t_offsets, dtype=np.float64),
    )
    scan = PairScan(op, probes, grids)
    log_n = cert.log_N.log_u(scan.t_times[:, 0, :])
    if not np.all(np.isfinite(log_n)):
        raise InputError("nonuniform prefactor must be finite on the grid")
    if np.any(log_n < -1e-12):
        raise InputError("nonuniform prefactor must stay >= 1")
    margins = (
        log_n[:, None, :, None]
        + scan.dlog
        - cert.nu * scan.grids.t_offsets[None, None, :, None]
    )
    if not np.all(np.isfinite(margins)):
        raise InputError("nonuniform margins left the finite range")
    min_margin = float(np.min(margins))
    verdict = "certified" if min_margin >= -tol else "refuted"
    witness = _worst_witness(scan, margins) if verdict == "refuted" else None
    return InstabilityCheck("nonuniform", verdict, min_margin, tol, witness,
                            scan.grids.describe())


# ---------------------------------------------------------------------------
# anchored-growth refutation
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class BVWitness:
    n: int | None          # spike index when found in the witness family
    t0: float
    t: float
    probe_index: int
    log_deficit: float


@dataclasses.dataclass(frozen=True)
class BVReport:
    verdict: str  # "refuted" | "not-refuted"
    witness: BVWitness | None
    searched_family: int
    grids: dict


def refute_bv(op: EvolutionOperator, cert: BVCertificate,
              witness_bound: int = 50, probes: np.ndarray | None = None,
              grids: ScanGrids | None = None, tol: float = 1e-12) -> BVReport:
    """Search for a violation of the anchored inequality
    N e^{alpha t} ||U(t,t0)x0|| >= e^{nu (t-t0)} ||x0||.

    The spike family (t, t0) = (n + 1/n, n), n = 2..witness_bound, is
    scanned first in ascending n, then a general (t0, t) grid in
    lexicographic order; the first violation is returned. Norm ratios are
    probe-independent for scalar kernels; for higher dimensions a seeded
    default probe set is used when none is given.
    """
    if witness_bound < 2:
        raise InputError("witness_bound must be >= 2")
    if probes is None:
        if op.dimension == 1:
            probes = np.ones((1, 1))
        else:
            from .operators import sample_unit_probes

            probes = sample_unit_probes(op.dimension, 8, seed=0)
    probes = np.asarray(probes, dtype=np.float64)
    log_n_cert = math.log(cert.N)

    def margin(t: float, t0: float, x0: np.ndarray) -> float:
        norm0 = np.linalg.norm(x0)
        log_orbit = float(op.orbit_log_norms(np.array([t]), t0, x0)[0])
        return (
            log_n_cert + cert.alpha * t + log_orbit
            - cert.nu * (t - t0) - math.log(norm0)
        )

    family_checked = 0
    for n in range(2, witness_bound + 1):
        t0, t = float(n), n + 1.0 / n
        family_checked += 1
        for ip in range(probes.shape[0]):
            m = margin(t, t0, probes[ip])
            if m < -tol:
                witness = BVWitness(n, t0, t, ip, -m)
                return BVReport("refuted", witness, family_checked,
                                (grids or default_scan_grids()).describe())

    scan_grids = grids or default_scan_grids()
    for t0 in np.asarray(scan_grids.t0_grid, dtype=np.float64):
        for dt in np.asarray(scan_grids.t_offsets, dtype=np.float64):
            for ip in range(probes.shape[0]):
                m = margin(float(t0 + dt), float(t0), probes[ip])
                if m < -tol:
                    witness = BVWitness(None, float(t0), float(t0 + dt), ip, -m)
                    return BVReport("refuted", witness, family_checked,
                                    scan_grids.describe())
    return BVReport("not-refuted", None, family_checked, scan_grids.describe())


# ---------------------------------------------------------------------------
# weak certification
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class ProbeWeakScan:
    probe_index: int
    t0: float
    log_n_floor: float
    nu_candidate: float
    nu_cap: float
    feasible: bool


@dataclasses.dataclass(frozen=True)
class WeakResult:
    verdict: str  # "certified" | "refuted"
    certificate: WeakCertificate | None
    probe_scans: tuple[ProbeWeakScan, ...]
    n_max: float
    nu_min: float
    grids: dict

    @property
    def passed(self) -> bool:
        return self.verdict == "certified"


def certify_weak(op: EvolutionOperator, probes: np.ndarray,
                 grids: ScanGrids | None = None, n_max: float = math.exp(10.0),
                 nu_min: float = 0.01) -> WeakResult:
    """Search one (N, nu) pair, with a per-probe start time, satisfying
    N ||U(t,t0)x0|| >= e^{nu (t-s)} ||U(s,t0)x0|| over the scan.

    For every probe and candidate t0 the scan computes the log-N floor at
    nu_min and the largest rate that keeps N on that floor; the start time
    minimizing the floor wins, ties broken toward the larger rate, then the
    smaller t0. The certificate takes the smallest rate across probes and
    the matching N. Infeasible probes produce a refutation carrying each
    probe's best achievable rate under the N cap (scan-bounded, no proof).
    """
    if not (n_max >= 1.0):
        raise InputError(f"n_max must be >= 1, got {n_max}")
    if not (nu_min > 0.0):
        raise InputError(f"nu_min must be > 0, got {nu_min}")
    scan = PairScan(op, probes, grids or default_scan_grids())
    log_cap = math.log(n_max)
    t0_grid = scan.grids.t0_grid

    chosen: list[ProbeWeakScan] = []
    all_feasible = True
    for ip in range(scan.probe_count):
        best: ProbeWeakScan | None = None
        best_cap = -math.inf
        best_cap_t0 = float(t0_grid[0])
        for i0 in range(t0_grid.size):
            dlog, dtau = scan.pair_arrays(i0, ip)
            nu_cap = float(_kernels.min_feasible_rate(dlog, dtau, log_cap))
            if nu_cap > best_cap:
                best_cap = nu_cap
                best_cap_t0 = float(t0_grid[i0])
            floor = float(_kernels.max_shortfall(dlog, dtau, nu_min))
            if floor > log_cap:
                continue
            nu_cand = float(_kernels.min_feasible_rate(dlog, dtau, floor))
            if not math.isfinite(nu_cand):
                nu_cand = nu_min
            candidate = ProbeWeakScan(ip, float(t0_grid[i0]), floor,
                                      nu_cand, nu_cap, True)
            if (
                best is None
                or candidate.log_n_floor < best.log_n_floor
                or (candidate.log_n_floor == best.log_n_floor
                    and candidate.nu_candidate > best.nu_candidate)
            ):
                best = candidate
        if best is None:
            all_feasible = False
            chosen.append(ProbeWeakScan(ip, best_cap_t0, math.inf,
                                        best_cap, best_cap, False))
        else:
            chosen.append(best)

    grid_echo = scan.grids.describe()
    if not all_feasible:
        return WeakResult("refuted", None, tuple(chosen),
                          n_max, nu_min, grid_echo)

    nu_star = min(p.nu_candidate for p in chosen)
    log_n_star = 0.0
    for p in chosen:
        i0 = int(np.searchsorted(t0_grid, p.t0))
        dlog, dtau = scan.pair_arrays(i0, p.probe_index)
        log_n_star = max(
            log_n_star, float(_kernels.max_shortfall(dlog, dtau, nu_star))
        )
    cert = WeakCertificate(math.exp(log_n_star), nu_star,
                           tuple(p.t0 for p in chosen))
    return WeakResult("certified", cert, tuple(chosen), n_max, nu_min, grid_echo)


@dataclasses.dataclass(frozen=True)
class WeakValidation:
    min_margin: float
    max_abs_margin: float
    witness: ScanWitness | None
    passed: bool


def validate_weak(op: EvolutionOperator, N: float, nu: float,
                  probes: np.ndarray, t0_of: tuple[float, ...],
                  s_offsets: np.ndarray, t_offsets: np.ndarray,
                  tol: float = 1e-9) -> WeakValidation:
    """Check the weak inequality for given constants and per-probe start times."""
    probes = np.asarray(probes, dtype=np.float64)
    if len(t0_of) != probes.shape[0]:
        raise InputError("need one start time per probe")
    log_n = math.log(N)
    worst: ScanWitness | None = None
    min_margin = math.inf
    max_abs = 0.0
    for ip, t0 in enumerate(t0_of):
        grids = ScanGrids(np.array([float(t0)]),
                          np.asarray(s_offsets, dtype=np.float64),
                          np.asarray(t_offsets, dtype=np.float64))
        scan = PairScan(op, probes[ip:ip + 1], grids)
        margins = (
            log_n + scan.dlog
            - nu * scan.grids.t_offsets[None, None, :, None]
        )
        local_min = float(np.min(margins))
        max_abs = max(max_abs, float(np.max(np.abs(margins))))
        if local_min < min_margin:
            min_margin = local_min
            w = _worst_witness(scan, margins)
            worst = ScanWitness(w.t0, w.s, w.t, ip, w.margin)
    return WeakValidation(min_margin, max_abs, worst, min_margin >= -tol)


# ---------------------------------------------------------------------------
# growth-function bridge
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class GrowthFunction:
    """Nondecreasing positive growth profile sampled on a knot grid.

    ``divergence_bound`` declares the offset by which f is expected to pass
    1; conversions searching beyond the samples raise instead of
    extrapolating.
    """

    knots: np.ndarray
    values: np.ndarray
    divergence_bound: float

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if knots.ndim != 1 or knots.size < 2 or knots.shape != values.shape:
            raise InputError("growth function needs >= 2 matching knots/values")
        if np.any(np.diff(knots) <= 0.0):
            raise InputError("growth knots must be strictly increasing")
        if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
            raise InputError("growth values must be finite and positive")
        if np.any(np.diff(values) < -1e-12):
            raise InputError("growth values must be nondecreasing")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

    def value(self, tau: np.ndarray | float) -> np.ndarray:
        tau = np.asarray(tau, dtype=np.float64)
        if np.any(tau < self.knots[0]) or np.any(tau > self.knots[-1]):
            raise InputError("growth function queried outside its knot range")
        return np.interp(tau, self.knots, self.values)


@dataclasses.dataclass(frozen=True)
class GrowthConversion:
    N: float
    nu: float
    c: float


def exponential_to_growth(N: float, nu: float, knots: np.ndarray) -> GrowthFunction:
    """The canonical growth profile f(tau) = e^{nu tau} / N of a weak pair."""
    if not (N >= 1.0) or not (nu > 0.0):
        raise InputError("need N >= 1 and nu > 0")
    knots = np.asarray(knots, dtype=np.float64)
    values = np.exp(nu * knots) / N
    return GrowthFunction(knots, values, divergence_bound=math.log(N) / nu)


def growth_to_exponential(f: GrowthFunction,
                          c_search: np.ndarray) -> GrowthConversion:
    """Extract (N, nu) from a growth profile: the first step length c with
    f(c) > 1 gives nu = ln f(c) / c and N = f(c)/f(0)."""
    c_search = np.asarray(c_search, dtype=np.float64)
    if c_search.ndim != 1 or c_search.size == 0:
        raise InputError("c_search must be a nonempty 1-d array")
    if np.any(c_search <= 0.0):
        raise InputError("step lengths must be positive")
    f0 = float(f.value(f.knots[0]))
    for c in c_search:
        fc = float(f.value(float(c)))
        if fc > 1.0:
            nu = math.log(fc) / float(c)
            return GrowthConversion(fc / f0, nu, float(c))
    raise DivergenceNotObservedError(
        f"no step in c_search pushed f above 1 "
        f"(declared divergence bound {f.divergence_bound})"
    )


def check_growth(op: EvolutionOperator, f: GrowthFunction, probes: np.ndarray,
                 t0_of: tuple[float, ...], s_offsets: np.ndarray,
                 t_offsets: np.ndarray, tol: float = 1e-9) -> WeakValidation:
    """Check ||U(t,t0)x0|| >= f(t-s) ||U(s,t0)x0|| with per-probe start times."""
    probes = np.asarray(probes, dtype=np.float64)
    if len(t0_of) != probes.shape[0]:
        raise InputError("need one start time per probe")
    log_f = np.log(f.value(np.asarray(t_offsets, dtype=np.float64)))
    worst: ScanWitness | None = None
    min_margin = math.inf
    max_abs = 0.0
    for ip, t0 in enumerate(t0_of):
        grids = ScanGrids(np.array([float(t0)]),
                          np.asarray(s_offsets, dtype=np.float64),
                          np.asarray(t_offsets, dtype=np.float64))
        scan = PairScan(op, probes[ip:ip + 1], grids)
        margins = scan.dlog - log_f[None, None, :, None]
        local_min = float(np.min(margins))
        max_abs = max(max_abs, float(np.max(np.abs(margins))))
        if local_min < min_margin:
            min_margin = local_min
            w = _worst_witness(scan, margins)
            worst = ScanWitness(w.t0, w.s, w.t, ip, w.margin)
    return WeakValidation(min_margin, max_abs, worst, min_margin >= -tol)
