"""Evolution operator families on finite-dimensional normed spaces.

An evolution operator is a two-parameter family U(t, s), t >= s >= 0, that
is the identity at t = s and composes along the cocycle law
U(t, s) U(s, r) = U(t, r). Three realizations live here:

* ``ScalarKernel``      closed-form scalar multiples u(s)/u(t) * e^{c(t-s)},
* ``PlanarRotation``    a rotating plane map with one expanding and one
                        contracting direction at every start time,
* ``OdeFlow``           numerical propagation of x' = A(t) x.

Norms are Euclidean throughout. Orbit magnitudes are handled as natural
logarithms (``LogMagnitude``) so that extreme growth or collapse never
leaves the representable range.
"""

from __future__ import annotations

import dataclasses
import math
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from . import _kernels
from .errors import ConfigError, InputError, IntegrationError, OrderingError
from .serialize import write_series_csv

_NEG_INF = float("-inf")


# ---------------------------------------------------------------------------
# logarithmic magnitudes
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class LogMagnitude:
    """A nonnegative magnitude stored as its natural logarithm.

    ``log = -inf`` is the distinguished zero element. Multiplication adds
    logs, comparison compares logs; the linear ``value`` is materialized
    only on request and may overflow to inf for logs beyond ~709.
    """

    log: float

    @classmethod
    def from_value(cls, value: float) -> "LogMagnitude":
        if value < 0.0 or math.isnan(value):
            raise InputError(f"magnitude must be nonnegative, got {value}")
        return cls(_NEG_INF if value == 0.0 else math.log(value))

    @classmethod
    def zero(cls) -> "LogMagnitude":
        return cls(_NEG_INF)

    @property
    def value(self) -> float:
        return math.exp(self.log)

    @property
    def is_zero(self) -> bool:
        return self.log == _NEG_INF

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        return LogMagnitude(self.log + other.log)

    def __truediv__(self, other: "LogMagnitude") -> "LogMagnitude":
        if other.is_zero:
            raise InputError("division by the zero magnitude")
        return LogMagnitude(self.log - other.log)

    def __pow__(self, p: float) -> "LogMagnitude":
        return LogMagnitude(self.log * p)

    def __lt__(self, other: "LogMagnitude") -> bool:
        return self.log < other.log

    def __le__(self, other: "LogMagnitude") -> bool:
        return self.log <= other.log

    def __gt__(self, other: "LogMagnitude") -> bool:
        return self.log > other.log

    def __ge__(self, other: "LogMagnitude") -> bool:
        return self.log >= other.log


# ---------------------------------------------------------------------------
# log-profiles for scalar kernels
# ---------------------------------------------------------------------------

class LogProfile:
    """ln u(t) for a scalar kernel; subclasses must be >= 0 with u(0) = 1."""

    def log_u(self, ts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def kink_times(self, lo: float, hi: float) -> np.ndarray:
        """Interior slope breaks in (lo, hi), for knot-aware quadrature grids."""
        return np.empty(0)


class SpikeLogProfile(LogProfile):
    """Piecewise-linear profile: 0 on [0, 2], then on each [n, n+1] (n >= 2)
    a spike rising to n^2 at n + 1/n and returning to 0 at n + 1."""

    def log_u(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=np.float64)
        # the compiled kernel is 1-d; preserve the caller's shape
        return _kernels.spike_log_u(np.ascontiguousarray(ts).ravel()).reshape(ts.shape)

    def kink_times(self, lo: float, hi: float) -> np.ndarray:
        first = max(2, int(math.floor(lo)))
        last = int(math.floor(hi))
        times = []
        for n in range(first, last + 1):
            for knot in (float(n), n + 1.0 / n):
                if lo < knot < hi:
                    times.append(knot)
        return np.array(sorted(times))


class ConstantLogProfile(LogProfile):
    """ln u identically equal to one value; the degenerate uniform prefactor."""

    def __init__(self, log_value: float):
        if not math.isfinite(log_value):
            raise InputError("constant profile value must be finite")
        self.log_value = float(log_value)

    def log_u(self, ts: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(ts, dtype=np.float64), self.log_value)


class PiecewiseLogProfile(LogProfile):
    """Linear interpolation through caller-supplied (t, ln u) knots,
    held constant outside the knot range."""

    def __init__(self, knots: np.ndarray, values: np.ndarray):
        knots = np.asarray(knots, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        if knots.ndim != 1 or knots.size < 2 or knots.shape != values.shape:
            raise InputError("profile needs matching 1-d knots and values, >= 2 points")
        if np.any(np.diff(knots) <= 0.0):
            raise InputError("profile knots must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise InputError("profile values must be finite")
        self.knots = knots
        self.values = values

    def log_u(self, ts: np.ndarray) -> np.ndarray:
        return np.interp(np.asarray(ts, dtype=np.float64), self.knots, self.values)

    def kink_times(self, lo: float, hi: float) -> np.ndarray:
        inner = self.knots[(self.knots > lo) & (self.knots < hi)]
        return inner.copy()


# ---------------------------------------------------------------------------
# operator kinds
# ---------------------------------------------------------------------------

class EvolutionOperator:
    """Common validation and generic fallbacks for all operator kinds."""

    kind: str = "abstract"
    dimension: int = 0
    # residual slack an operator is entitled to in the cocycle check
    cocycle_tolerance: float = 0.0

    def evaluate(self, t: float, s: float, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def orbit_states(self, ts: np.ndarray, t0: float, x0: np.ndarray) -> np.ndarray:
        """State vectors U(ts_i, t0) x0, one row per requested time."""
        ts = self._check_times(ts, t0)
        x0 = self._check_state(x0)
        return np.array([self.evaluate(float(t), t0, x0) for t in ts])

    def orbit_log_norms(self, ts: np.ndarray, t0: float, x0: np.ndarray) -> np.ndarray:
        states = self.orbit_states(ts, t0, x0)
        norms = np.linalg.norm(states, axis=1)
        with np.errstate(divide="ignore"):
            return np.log(norms)

    def orbit_log_norm(self, t: float, t0: float, x0: np.ndarray) -> LogMagnitude:
        return LogMagnitude(float(self.orbit_log_norms(np.array([t]), t0, x0)[0]))

    def cocycle_residual(self, t: float, s: float, r: float, x: np.ndarray) -> float:
        """Relative norm of U(t,s)U(s,r)x - U(t,r)x."""
        mid = self.evaluate(s, r, x)
        chained = self.evaluate(t, s, mid)
        direct = self.evaluate(t, r, x)
        ref = max(np.linalg.norm(direct), np.linalg.norm(chained), 1e-300)
        return float(np.linalg.norm(chained - direct) / ref)

    def orbit_jumps(self, ts: np.ndarray, t0: float, x0: np.ndarray) -> np.ndarray:
        """Relative change between consecutive orbit states (continuity proxy)."""
        states = self.orbit_states(ts, t0, x0)
        diffs = np.linalg.norm(np.diff(states, axis=0), axis=1)
        norms = np.linalg.norm(states, axis=1)
        ref = np.maximum(np.maximum(norms[:-1], norms[1:]), 1e-300)
        return diffs / ref

    def quad_kinks(self, lo: float, hi: float) -> np.ndarray:
        return np.empty(0)

    # -- validation helpers ------------------------------------------------

    def _check_pair(self, t: float, s: float) -> None:
        if s < 0.0 or not (t >= s):
            raise OrderingError(f"need t >= s >= 0, got t={t}, s={s}")

    def _check_state(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dimension,):
            raise InputError(
                f"state must have shape ({self.dimension},), got {x.shape}"
            )
        if not np.all(np.isfinite(x)):
            raise InputError("state vector must be finite")
        return x

    def _check_times(self, ts: np.ndarray, t0: float) -> np.ndarray:
        ts = np.asarray(ts, dtype=np.float64)
        if ts.ndim != 1 or ts.size == 0:
            raise InputError("time grid must be a nonempty 1-d array")
        if t0 < 0.0 or np.any(ts < t0):
            raise OrderingError(f"orbit times must satisfy t >= t0 >= 0, t0={t0}")
        return ts


class ScalarKernel(EvolutionOperator):
    """U(t, s) x = (u(s)/u(t)) e^{rate (t-s)} x with ln u given by a profile.

    The log-amplitude ln u(s) - ln u(t) + rate (t-s) is the exact closed
    form; ``evaluate`` exponentiates it and can therefore under/overflow,
    while the log-space orbit interface never does.
    """

    kind = "scalar"

    def __init__(self, rate: float, log_profile: LogProfile | None = None,
                 dimension: int = 1):
        if not math.isfinite(rate):
            raise InputError("rate must be finite")
        if dimension < 1:
            raise InputError("dimension must be >= 1")
        self.rate = float(rate)
        self.log_profile = log_profile
        self.dimension = int(dimension)

    def _profile_at(self, ts: np.ndarray) -> np.ndarray:
        if self.log_profile is None:
            return np.zeros_like(ts)
        return self.log_profile.log_u(ts)

    def log_amplitude(self, t: np.ndarray | float, s: np.ndarray | float) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        s = np.asarray(s, dtype=np.float64)
        return self.rate * (t - s) + self._profile_at(s) - self._profile_at(t)

    def evaluate(self, t: float, s: float, x: np.ndarray) -> np.ndarray:
        self._check_pair(t, s)
        x = self._check_state(x)
        return x * math.exp(float(self.log_amplitude(t, s)))

    def orbit_log_norms(self, ts: np.ndarray, t0: float, x0: np.ndarray) -> np.ndarray:
        ts = self._check_times(ts, t0)
        x0 = self._check_state(x0)
        norm0 = np.linalg.norm(x0)
        base = _NEG_INF if norm0 == 0.0 else math.log(norm0)
        return self.log_amplitude(ts, t0) + base

    def orbit_states(self, ts: np.ndarray, t0: float, x0: np.ndarray) -> np.ndarray:
        ts = self._check_times(ts, t0)
        x0 = self._check_state(x0)
        return np.exp(self.log_amplitude(ts, t0))[:, None] * x0[None, :]

    def cocycle_residual(self, t: float, s: float, r: float, x: np.ndarray) -> float:
        # exact in log space: the defect never leaves representable range
        defect = float(
            self.log_amplitude(t, s) + self.log_amplitude(s, r)
            - self.log_amplitude(t, r)
        )
        return abs(math.expm1(defect))

    def orbit_jumps(self, ts: np.ndarray, t0: float, x0: np.ndarray) -> np.ndarray:
        logs = self.orbit_log_norms(ts, t0, x0)
        dl = np.abs(np.diff(logs))
        return -np.expm1(-dl)

    def quad_kinks(self, lo: float, hi: float) -> np.ndarray:
        if self.log_profile is None:
            return np.empty(0)
        return self.log_profile.kink_times(lo, hi)


class PlanarRotation(EvolutionOperator):
    """Rotating planar operator with orthogonal growing and decaying modes.

    Writing v(a) = (cos a, sin a) and w(a) = (sin a, -cos a),
    U(t, t0) x = e^{t-t0} (x . v(t0)) v(t) + e^{-(t-t0)} (x . w(t0)) w(t),
    so radially aligned starts grow at unit rate exactly and the w(t0)
    direction collapses at unit rate exactly.
    """

    kind = "planar"
    dimension = 2

    @staticmethod
    def _components(t0: float, x: np.ndarray) -> tuple[float, float]:
        c1 = x[0] * math.cos(t0) + x[1] * math.sin(t0)
        c2 = x[0] * math.sin(t0) - x[1] * math.cos(t0)
        return c1, c2

    def evaluate(self, t: float, s: float, x: np.ndarray) -> np.ndarray:
        self._check_pair(t, s)
        x = self._check_state(x)
        c1, c2 = self._components(s, x)
        grow = math.exp(t - s) * c1
        decay = math.exp(-(t - s)) * c2
        return np.array([
            grow * math.cos(t) + decay * math.sin(t),
            grow * math.sin(t) - decay * math.cos(t),
        ])

    def orbit_states(self, ts: np.ndarray, t0: float, x0: np.ndarray) -> np.ndarray:
        ts = self._check_times(ts, t0)
        x0 = self._check_state(x0)
        c1, c2 = self._components(t0, x0)
        grow = np.exp(ts - t0) * c1
        decay = np.exp(-(ts - t0)) * c2
        return np.stack([
            grow * np.cos(ts) + decay * np.sin(ts),
            grow * np.sin(ts) - decay * np.cos(ts),
        ], axis=1)

    def orbit_log_norms(self, ts: np.ndarray, t0: float, x0: np.ndarray) -> np.ndarray:
        ts = self._check_times(ts, t0)
        x0 = self._check_state(x0)
        c1, c2 = self._components(t0, x0)
        with np.errstate(divide="ignore"):
            lg = 2.0 * (ts - t0) + 2.0 * np.log(abs(c1))
            ld = -2.0 * (ts - t0) + 2.0 * np.log(abs(c2))
        return 0.5 * np.logaddexp(lg, ld)


def planar_rotation_coefficient(t: float) -> np.ndarray:
    """A(t) whose flow reproduces ``PlanarRotation`` (d/dt U applied at s=t)."""
    c2t = math.cos(2.0 * t)
    s2t = math.sin(2.0 * t)
    return np.array([[c2t, s2t - 1.0], [s2t + 1.0, -c2t]])


class OdeFlow(EvolutionOperator):
    """Evolution operator realized by integrating x' = A(t) x.

    Uses an adaptive embedded 4(5) Runge-Kutta pair with deterministic step
    acceptance. ``tol_budget`` is the residual slack this realization claims
    in cocycle and cross-validation checks.
    """

    kind = "ode"

    def __init__(self, coefficient: Callable[[float], np.ndarray], dimension: int,
                 rtol: float = 1e-9, atol: float = 1e-12,
                 tol_budget: float = 1e-6):
        if dimension < 1:
            raise InputError("dimension must be >= 1")
        if not (rtol > 0.0 and atol > 0.0):
            raise InputError("tolerances must be positive")
        self.coefficient = coefficient
        self.dimension = int(dimension)
        self.rtol = float(rtol)
        self.atol = float(atol)
        self.tol_budget = float(tol_budget)

    @property
    def cocycle_tolerance(self) -> float:  # type: ignore[override]
        return self.tol_budget

    def _rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        return self.coefficient(t) @ y

    def _propagate(self, t0: float, x0: np.ndarray, ts: np.ndarray) -> np.ndarray:
        from scipy.integrate import solve_ivp

        t_end = float(ts[-1])
        if t_end == t0:
            return np.tile(x0, (ts.size, 1))
        sol = solve_ivp(
            self._rhs, (t0, t_end), x0, method="RK45",
            t_eval=ts, rtol=self.rtol, atol=self.atol,
        )
        if not sol.success:
            reached = float(sol.t[-1]) if sol.t.size else t0
            raise IntegrationError(
                f"step control failed between t={t0} and t={t_end}", reached
            )
        return sol.y.T

    def evaluate(self, t: float, s: float, x: np.ndarray) -> np.ndarray:
        self._check_pair(t, s)
        x = self._check_state(x)
        if t == s:
            return x.copy()
        return self._propagate(s, x, np.array([t]))[0]

    def orbit_states(self, ts: np.ndarray, t0: float, x0: np.ndarray) -> np.ndarray:
        ts = self._check_times(ts, t0)
        x0 = self._check_state(x0)
        if np.linalg.norm(x0) == 0.0:
            return np.zeros((ts.size, self.dimension))
        order = np.argsort(ts, kind="stable")
        unique, inverse = np.unique(ts[order], return_inverse=True)
        states = self._propagate(t0, x0, unique)
        out = np.empty((ts.size, self.dimension))
        out[order] = states[inverse]
        return out


# ---------------------------------------------------------------------------
# axiom verification
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class AxiomWitness:
    r: float
    s: float
    t: float
    probe_index: int
    residual: float


@dataclasses.dataclass(frozen=True)
class AxiomReport:
    passed: bool
    e1_max: float
    e2_max: float
    e3_max_jump: float
    tol: float
    e1_witness: AxiomWitness | None
    e2_witness: AxiomWitness | None

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return d


def verify_axioms(op: EvolutionOperator, grid: np.ndarray, probes: np.ndarray,
                  tol: float = 1e-10) -> AxiomReport:
    """Sampled check of the identity and cocycle axioms over all grid triples.

    Residuals are relative. Continuity enters only as the reported maximum
    jump between adjacent grid points; it carries no pass/fail weight.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise InputError("grid must be a nonempty 1-d array")
    if np.any(np.diff(grid) <= 0.0):
        raise InputError("grid must be strictly increasing")
    if grid[0] < 0.0:
        raise OrderingError("grid times must be nonnegative")
    probes = np.asarray(probes, dtype=np.float64)
    if probes.ndim != 2 or probes.shape[0] == 0 or probes.shape[1] != op.dimension:
        raise InputError(f"probes must have shape (k, {op.dimension})")
    norms = np.linalg.norm(probes, axis=1)
    if np.any(norms == 0.0):
        raise InputError("zero probes are excluded from axiom checks")

    effective = max(tol, op.cocycle_tolerance)

    e1_max, e1_wit = 0.0, None
    for ti in grid:
        for p_idx in range(probes.shape[0]):
            x = probes[p_idx]
            res = float(
                np.linalg.norm(op.evaluate(float(ti), float(ti), x) - x)
                / np.linalg.norm(x)
            )
            if res > e1_max:
                e1_max = res
                e1_wit = AxiomWitness(float(ti), float(ti), float(ti), p_idx, res)

    e2_max, e2_wit = 0.0, None
    n = grid.size
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                r, s, t = float(grid[i]), float(grid[j]), float(grid[k])
                for p_idx in range(probes.shape[0]):
                    res = op.cocycle_residual(t, s, r, probes[p_idx])
                    if res > e2_max:
                        e2_max = res
                        e2_wit = AxiomWitness(r, s, t, p_idx, res)

    e3_max = 0.0
    for i in range(n):
        tail = grid[i:]
        if tail.size < 2:
            continue
        for p_idx in range(probes.shape[0]):
            jumps = op.orbit_jumps(tail, float(grid[i]), probes[p_idx])
            if jumps.size:
                e3_max = max(e3_max, float(np.max(jumps)))

    passed = e1_max <= effective and e2_max <= effective
    return AxiomReport(passed, e1_max, e2_max, e3_max, effective, e1_wit, e2_wit)


def default_axiom_tol(op: EvolutionOperator) -> float:
    """Cocycle tolerance matched to the operator's dimension.

    Composing a saddle flow pushes 1-ulp rounding onto the growing
    direction, amplified by e^{2(t-s)}; 1e-8 absorbs that over spans
    around 10. Scalar kernels compose exactly and keep the tight value.
    """
    return 1e-8 if op.dimension >= 2 else 1e-10


# ---------------------------------------------------------------------------
# corpus, probes, config, export
# ---------------------------------------------------------------------------

def corpus() -> dict[str, EvolutionOperator]:
    """The built-in operator family, freshly constructed on every call."""
    return {
        "uniform_growth": ScalarKernel(rate=1.0),
        "stable": ScalarKernel(rate=-1.0),
        "nonuniform_spikes": ScalarKernel(rate=1.0, log_profile=SpikeLogProfile()),
        "planar_rotation": PlanarRotation(),
        "planar_rotation_ode": OdeFlow(planar_rotation_coefficient, dimension=2),
    }


def sample_unit_probes(dimension: int, count: int, seed: int) -> np.ndarray:
    """Unit vectors drawn uniformly from the sphere by a seeded generator."""
    if dimension < 1 or count < 1:
        raise InputError("dimension and count must be >= 1")
    rng = np.random.default_rng(seed)
    out = np.empty((count, dimension))
    for i in range(count):
        while True:
            v = rng.standard_normal(dimension)
            norm = np.linalg.norm(v)
            if norm > 1e-12:
                out[i] = v / norm
                break
    return out


def parse_key_values(text: str) -> dict[str, str]:
    """Parse the plain-text ``key = value`` config format."""
    result: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in result:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        result[key] = value
    return result


def _parse_profile_knots(text: str) -> PiecewiseLogProfile:
    knots, values = [], []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            t_str, _, v_str = item.partition(":")
            knots.append(float(t_str))
            values.append(float(v_str))
        except ValueError as exc:
            raise ConfigError(f"bad profile knot {item!r}") from exc
    try:
        return PiecewiseLogProfile(np.array(knots), np.array(values))
    except InputError as exc:
        raise ConfigError(str(exc)) from exc


def operator_from_config(cfg: Mapping[str, str]) -> EvolutionOperator:
    """Build an operator from parsed config keys.

    Either ``operator = <corpus name>`` or ``kind = scalar`` with ``rate``
    and an optional ``profile = spikes`` / ``profile_knots = t:v, t:v, ...``.
    ``kind = planar`` names the rotation operator directly.
    """
    if "operator" in cfg:
        name = cfg["operator"]
        members = corpus()
        if name not in members:
            raise ConfigError(
                f"unknown corpus member {name!r}; have {sorted(members)}"
            )
        return members[name]
    kind = cfg.get("kind")
    if kind == "planar":
        return PlanarRotation()
    if kind == "scalar":
        try:
            rate = float(cfg.get("rate", "1.0"))
        except ValueError as exc:
            raise ConfigError(f"bad rate {cfg.get('rate')!r}") from exc
        profile: LogProfile | None = None
        if "profile_knots" in cfg:
            profile = _parse_profile_knots(cfg["profile_knots"])
        elif cfg.get("profile", "none") == "spikes":
            profile = SpikeLogProfile()
        elif cfg.get("profile", "none") != "none":
            raise ConfigError(f"unknown profile {cfg.get('profile')!r}")
        return ScalarKernel(rate=rate, log_profile=profile)
    raise ConfigError("config must set 'operator' or 'kind' in {scalar, planar}")


def load_operator(path: str | Path) -> EvolutionOperator:
    return operator_from_config(parse_key_values(Path(path).read_text()))


def export_trajectory_csv(path: str | Path, op: EvolutionOperator, t0: float,
                          x0: np.ndarray, ts: np.ndarray) -> None:
    logs = op.orbit_log_norms(np.asarray(ts, dtype=np.float64), t0, x0)
    write_series_csv(path, ("t", "log_norm"), ts, logs)
