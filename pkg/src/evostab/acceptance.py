"""Acceptance gate: the numbered claims the library must reproduce.

Each criterion is a self-contained function returning a CriterionResult;
``run_all`` drives them in order. The corpus expectation table doubles as
the implementation of the ``evostab corpus`` subcommand, so the CLI and
the test suite exercise one code path.
"""

from __future__ import annotations

import dataclasses
import math
import time
from collections.abc import Callable

import numpy as np

from . import _kernels, certify, datko, lyapunov
from .certify import (BVCertificate, NonuniformCertificate, ScanGrids,
                      UniformCertificate, default_scan_grids)
from .numerics import fit_log_slope, log_integral_power, orbit_quad_grid
from .operators import (ConstantLogProfile, EvolutionOperator, corpus,
                        default_axiom_tol, sample_unit_probes, verify_axioms)

TWO_PI = 2.0 * np.pi

# Frozen oracle values, each derived independently of the code under test.
SUM_RATIO_T3 = 1.553001792775919        # 1 + e^-1 + e^-2 + e^-3, via math.fsum
DISCRETE_K_BOUND = 1.5819767068693265   # 1 / (1 - e^-1)
BRIDGE_CONSTANT = 4.300258535328371     # e / (1 - e^-1)
HALF_E2_MINUS_1 = 3.1945280494653248    # (e^2 - 1) / 2
GROWTH_SUP_20 = 0.9999999979388464      # 1 - e^-20
GENEROUS_N_MAX = math.exp(10.0)
GENEROUS_NU_MIN = 0.01
GENEROUS_M = math.exp(20.0) / 0.02      # bound constant of the budget pair


@dataclasses.dataclass
class CriterionResult:
    cid: str
    title: str
    passed: bool
    details: str


class _Collector:
    def __init__(self):
        self.failures: list[str] = []
        self.notes: list[str] = []

    def check(self, cond: bool, label: str) -> None:
        if not cond:
            self.failures.append(label)

    def note(self, text: str) -> None:
        self.notes.append(text)

    def result(self, cid: str, title: str) -> CriterionResult:
        passed = not self.failures
        details = "; ".join(self.failures) if self.failures \
            else "; ".join(self.notes) or "ok"
        return CriterionResult(cid, title, passed, details)


def _w_probe(a: float) -> np.ndarray:
    """Unit direction decaying at exact rate 1 from start time a."""
    return np.array([math.sin(a), -math.cos(a)])


def _polar_angles(probes: np.ndarray) -> np.ndarray:
    return np.mod(np.arctan2(probes[:, 1], probes[:, 0]), TWO_PI)


def _grids_with_angles(angles: np.ndarray,
                       base: ScanGrids | None = None) -> ScanGrids:
    base = base or default_scan_grids()
    t0 = np.unique(np.concatenate([base.t0_grid, angles]))
    return ScanGrids(t0, base.s_offsets, base.t_offsets)


# ---------------------------------------------------------------------------
# criterion 1: weak certification of the rotating saddle
# ---------------------------------------------------------------------------

def criterion_01() -> CriterionResult:
    c = _Collector()
    op = corpus()["planar_rotation"]
    rng = np.random.default_rng(101)
    angles = rng.uniform(0.0, TWO_PI, 16)
    probes = np.column_stack([np.cos(angles), np.sin(angles)])
    grids = _grids_with_angles(angles)

    _kernels.warmup()
    t_start = time.perf_counter()
    res = certify.certify_weak(op, probes, grids,
                               n_max=GENEROUS_N_MAX, nu_min=GENEROUS_NU_MIN)
    elapsed = time.perf_counter() - t_start

    c.check(res.verdict == "certified", f"verdict {res.verdict}")
    if res.certificate is not None:
        cert = res.certificate
        c.check(abs(cert.N - 1.0) <= 1e-9, f"N={cert.N!r}")
        c.check(abs(cert.nu - 1.0) <= 1e-9, f"nu={cert.nu!r}")
        t0_err = float(np.max(np.abs(np.asarray(cert.t0_of) - angles)))
        c.check(t0_err <= 1e-12, f"t0 mismatch {t0_err:.2e}")
        base = default_scan_grids()
        val = certify.validate_weak(op, cert.N, cert.nu, probes, cert.t0_of,
                                    base.s_offsets, base.t_offsets)
        c.check(val.max_abs_margin <= 1e-9,
                f"equality margin {val.max_abs_margin:.2e}")
        c.note(f"N={cert.N!r} nu={cert.nu!r} "
               f"max|margin|={val.max_abs_margin:.1e}")
    # elapsed only appears in the failure label; details must stay
    # timing-free so acceptance.json is byte-identical across runs
    c.check(elapsed < 5.0, f"scan took {elapsed:.2f}s")
    return c.result("C1", "weak certificate (1,1) at per-probe polar start times")


# ---------------------------------------------------------------------------
# criterion 2: no uniform certificate survives the decaying directions
# ---------------------------------------------------------------------------

def criterion_02() -> CriterionResult:
    c = _Collector()
    op = corpus()["planar_rotation"]
    struct = np.stack([_w_probe(a) for a in (0.0, 1.75, 3.0, 4.5)])
    rng = np.random.default_rng(202)
    extra_angles = rng.uniform(0.0, TWO_PI, 4)
    probes = np.vstack([struct,
                        np.column_stack([np.cos(extra_angles),
                                         np.sin(extra_angles)])])
    grids = default_scan_grids()
    scan = certify.PairScan(op, probes, grids)
    dt_max = float(grids.t_offsets[-1])

    for log_n in range(0, 11):
        for nu in (0.05, 0.1, 0.5, 1.0, 2.0, 3.0):
            cert = UniformCertificate(math.exp(float(log_n)), nu)
            chk = certify.check_uniform(op, cert, probes, scan=scan)
            tag = f"(lnN={log_n}, nu={nu})"
            c.check(chk.verdict == "refuted", f"{tag} not refuted")
            expected_min = log_n - (1.0 + nu) * dt_max
            c.check(abs(chk.min_margin - expected_min) <= 1e-9,
                    f"{tag} min margin {chk.min_margin!r}")
            w = chk.witness
            if w is None:
                c.check(False, f"{tag} missing witness")
                continue
            fit = fit_log_slope(w.t0 + grids.t_offsets,
                                op.orbit_log_norms(w.t0 + grids.t_offsets,
                                                   w.t0, probes[w.probe_index]))
            c.check(abs(fit.slope + 1.0) <= 1e-9,
                    f"{tag} witness slope {fit.slope!r}")
            c.check(fit.max_abs_residual <= 1e-9,
                    f"{tag} witness residual {fit.max_abs_residual:.2e}")
    c.note("66 candidates refuted, witness slope -1")
    return c.result("C2", "every uniform candidate up to N=e^10 refuted")


# ---------------------------------------------------------------------------
# criterion 3: spike profile certifies its own nonuniform inequality
# ---------------------------------------------------------------------------

def criterion_03() -> CriterionResult:
    c = _Collector()
    op = corpus()["nonuniform_spikes"]
    cert = NonuniformCertificate(op.log_profile, 1.0)
    probe = np.ones((1, 1))
    base = default_scan_grids()

    wide = certify.check_nonuniform(op, cert, probe, base.t0_grid,
                                    np.arange(88) * 0.5, tol=1e-12)
    c.check(wide.verdict == "certified",
            f"lattice scan min margin {wide.min_margin!r}")
    c.check(math.isfinite(wide.min_margin), "non-finite margin")

    tops = np.array([n + 1.0 / n for n in range(2, 50)])
    offsets = np.unique(np.concatenate([np.arange(99) * 0.5, tops]))
    sharp = certify.check_nonuniform(op, cert, probe, np.zeros(1),
                                     offsets, tol=1e-12)
    c.check(sharp.verdict == "certified",
            f"spike-top scan min margin {sharp.min_margin!r}")
    c.check(sharp.min_margin <= 1e-12,
            f"equality not attained: {sharp.min_margin!r}")
    c.note(f"min margins {wide.min_margin:.1e} / {sharp.min_margin:.1e}, "
           f"t up to {offsets[-1]:.2f}")
    return c.result("C3", "nonuniform certificate (u(t), 1) exact on spikes")


# ---------------------------------------------------------------------------
# criterion 4: anchored-growth candidates all refuted by the spike family
# ---------------------------------------------------------------------------

def criterion_04() -> CriterionResult:
    c = _Collector()
    op = corpus()["nonuniform_spikes"]
    for log_n in range(0, 6):
        for alpha in np.arange(0.0, 5.5, 0.5):
            for nu in np.arange(0.1, 3.05, 0.1):
                cert = BVCertificate(math.exp(float(log_n)), float(alpha),
                                     float(nu))
                rep = certify.refute_bv(op, cert, witness_bound=50)
                tag = f"(lnN={log_n}, a={alpha}, nu={nu:.1f})"
                c.check(rep.verdict == "refuted", f"{tag} not refuted")
                c.check(rep.witness is not None and rep.witness.n is not None,
                        f"{tag} witness not in the spike family")
    rep = certify.refute_bv(op, BVCertificate(math.e, 1.0, 1.0),
                            witness_bound=50)
    ok = rep.witness is not None and rep.witness.n == 2
    c.check(ok, "witness for (e,1,1) not at n=2")
    if ok:
        c.check(abs(rep.witness.log_deficit - 0.5) <= 1e-12,
                f"deficit {rep.witness.log_deficit!r}")
        c.note(f"(e,1,1) witness n=2, deficit {rep.witness.log_deficit!r}")
    return c.result("C4", "1980 anchored candidates refuted inside n <= 50")


# ---------------------------------------------------------------------------
# criterion 5: Datko necessity on the clean growth kernel
# ---------------------------------------------------------------------------

def criterion_05() -> CriterionResult:
    c = _Collector()
    op = corpus()["uniform_growth"]
    one = np.array([1.0])
    knots = orbit_quad_grid(op, 0.0, 20.0)
    table = log_integral_power(op, one, 1.0, knots)
    exact = np.log(np.expm1(table.knots[1:]))
    quad_gap = float(np.max(np.abs(table.values[1:] - exact)))
    c.check(quad_gap <= 1e-8, f"quadrature vs closed form {quad_gap:.2e}")

    series = datko.datko_ratio_scan(op, one, 0.0, p=1.0, horizon=20.0)
    k = series.K_measured.value
    c.check(GROWTH_SUP_20 - 1e-6 <= k <= 1.0, f"K measured {k!r}")
    k_nec = datko.necessity_constant(UniformCertificate(1.0, 1.0), 1.0)
    c.check(k <= k_nec + 1e-9, f"K {k!r} above necessity {k_nec!r}")
    c.note(f"K={k!r}, ceiling {k_nec!r}, quad gap {quad_gap:.1e}")
    return c.result("C5", "measured Datko ratio under the N^p/(nu p) ceiling")


# ---------------------------------------------------------------------------
# criterion 6: sufficiency constants and the growth bridge
# ---------------------------------------------------------------------------

def criterion_06() -> CriterionResult:
    c = _Collector()
    sc = datko.sufficiency_constants(1.0, 1.0, 1.0, 1.0)
    c.check(abs(sc.L - math.exp(-1.0)) <= 1e-12, f"L={sc.L!r}")

    knots = np.arange(0.0, 20.5, 0.5)
    growth = sc.growth(knots)
    conv = certify.growth_to_exponential(growth, np.arange(0.5, 20.5, 0.5))
    c.check(abs(conv.N - 5.5) <= 1e-12, f"N={conv.N!r}")
    c.check(abs(conv.c - 4.5) <= 1e-12, f"c={conv.c!r}")
    nu_expect = math.log(growth.value(4.5)) / 4.5
    c.check(abs(conv.nu - nu_expect) <= 1e-15, f"nu={conv.nu!r}")

    op = corpus()["uniform_growth"]
    base = default_scan_grids()
    val = certify.validate_weak(op, conv.N, conv.nu, np.ones((1, 1)), (0.0,),
                                base.s_offsets, base.t_offsets)
    c.check(val.passed, f"converted pair fails, margin {val.min_margin!r}")
    gchk = certify.check_growth(op, growth, np.ones((1, 1)), (0.0,),
                                base.s_offsets, base.t_offsets)
    c.check(gchk.passed, f"growth profile fails, margin {gchk.min_margin!r}")

    rt = certify.growth_to_exponential(
        certify.exponential_to_growth(1.0, 1.0, knots),
        np.arange(1.0, 11.0),
    )
    c.check(abs(rt.N - math.e) <= 1e-12 and abs(rt.nu - 1.0) <= 1e-12,
            f"round trip gave ({rt.N!r}, {rt.nu!r})")
    c.note(f"L={sc.L!r}, conversion (N={conv.N!r}, nu={conv.nu:.6f}, c=4.5)")
    return c.result("C6", "L = e^-1 and the growth<->exponential bridge")


# ---------------------------------------------------------------------------
# criterion 7: discrete sums and the unit-step chain bound
# ---------------------------------------------------------------------------

def criterion_07() -> CriterionResult:
    c = _Collector()
    op = corpus()["uniform_growth"]
    one = np.array([1.0])
    grid = np.arange(0.0, 20.5, 0.5)
    ds = datko.discrete_sum_scan(op, one, 0.0, 1.0, grid)
    c.check(ds.K_measured.value <= DISCRETE_K_BOUND + 1e-9,
            f"sum ratio sup {ds.K_measured.value!r}")
    at3 = math.exp(float(ds.log_ratio[np.searchsorted(grid, 3.0)]))
    c.check(abs(at3 - SUM_RATIO_T3) <= 1e-12, f"ratio(3) = {at3!r}")

    bridge = datko.discrete_to_integral_bound(DISCRETE_K_BOUND, 1.0, 1.0, 1.0)
    c.check(abs(bridge - BRIDGE_CONSTANT) <= 1e-12, f"bridge {bridge!r}")

    for name, op_m in corpus().items():
        ode = op_m.kind == "ode"
        horizon = 5.0 if ode else 10.0
        width = 1.0 / 32 if ode else 1.0 / 64
        p = 2.0 if op_m.dimension == 2 else 1.0
        probe = np.array([1.0, 0.0]) if op_m.dimension == 2 else one
        t_checks = np.array([1.0, 2.5, 5.0] if ode
                            else [1.0, 2.5, 5.0, 7.5, 10.0])
        knots = np.unique(np.concatenate(
            [orbit_quad_grid(op_m, 0.0, horizon, width), t_checks]))
        table = log_integral_power(op_m, probe, p, knots, error_ceiling=None)
        orbit = op_m.orbit_log_norms(table.knots, 0.0, probe)
        rates = -np.diff(orbit) / np.diff(table.knots)
        omega = max(float(np.max(rates)), 0.0)
        sums = datko.discrete_sum_scan(op_m, probe, 0.0, p, t_checks)
        for i, t in enumerate(t_checks):
            lhs = _table_value(table, float(t))
            rhs = omega * p + float(sums.log_sum[i])
            c.check(lhs <= rhs + table.quad_error + 1e-9,
                    f"{name}: chain fails at t={t} ({lhs!r} > {rhs!r})")
    c.note(f"ratio(3)={at3!r}, bridge={bridge!r}, chain on 5 members")
    return c.result("C7", "unit-step sums: frozen ratio, ceiling, chain bound")


def _table_value(table, t: float) -> float:
    idx = int(np.searchsorted(table.knots, t))
    return float(table.values[idx])


# ---------------------------------------------------------------------------
# criterion 8: weak <-> Lyapunov <-> Datko round trip per member
# ---------------------------------------------------------------------------

def criterion_08() -> CriterionResult:
    c = _Collector()
    members = corpus()

    for name in ("uniform_growth", "stable", "nonuniform_spikes",
                 "planar_rotation"):
        op = members[name]
        if op.dimension == 1:
            probes = np.ones((1, 1))
            grids = default_scan_grids()
            t0_search = np.arange(0.0, 2.0, 1.0)
        else:
            rng = np.random.default_rng(303)
            angles = rng.uniform(0.0, TWO_PI, 4)
            probes = np.column_stack([np.cos(angles), np.sin(angles)])
            grids = _grids_with_angles(angles)
            t0_search = np.sort(angles)
        res = certify.certify_weak(op, probes, grids,
                                   n_max=GENEROUS_N_MAX,
                                   nu_min=GENEROUS_NU_MIN)

        if res.verdict == "certified":
            cert = res.certificate
            m = lyapunov.bound_constant(cert)
            for ip in range(probes.shape[0]):
                table = lyapunov.build_lyapunov(op, probes[ip],
                                                cert.t0_of[ip], horizon=20.0)
                eq = lyapunov.verify_lyapunov_equation(op, table)
                c.check(eq.passed,
                        f"{name}[{ip}]: equation residual {eq.max_residual:.2e}"
                        f" > {eq.allowance:.2e}")
                bound = lyapunov.verify_lyapunov_bound(table, m)
                c.check(bound.passed,
                        f"{name}[{ip}]: bound excess {bound.max_excess:.2e}")
                bridge = lyapunov.lyapunov_to_datko(table, m, eq)
                c.check(bridge.within_bound,
                        f"{name}[{ip}]: ratio sup above m")
                if name == "uniform_growth" and ip == 0:
                    l1 = table.value_at(1.0)
                    c.check(abs(l1 + HALF_E2_MINUS_1) <= 1e-8,
                            f"L(1) = {l1!r}")
            dk = datko.datko_verdict(op, probes, t0_search=t0_search,
                                     horizon=20.0, p=2.0,
                                     K_ceiling=m * (1.0 + 1e-6))
            c.check(dk.verdict == "bounded", f"{name}: datko {dk.verdict}")
        else:
            table = lyapunov.build_lyapunov(op, probes[0], 0.0, horizon=20.0)
            eq = lyapunov.verify_lyapunov_equation(op, table)
            c.check(eq.passed,
                    f"{name}: equation residual {eq.max_residual:.2e}")
            bound = lyapunov.verify_lyapunov_bound(table, GENEROUS_M)
            c.check(not bound.passed, f"{name}: generous bound held")
            dk = datko.datko_verdict(op, probes, horizon=20.0, p=2.0,
                                     K_ceiling=GENEROUS_M)
            c.check(dk.verdict == "unbounded-trend",
                    f"{name}: datko {dk.verdict}")
            c.check(all(r.trend_confirmed for r in dk.probe_reports),
                    f"{name}: trend not confirmed")
    c.note("certified members bounded by N^2/(2 nu); refuted exceed e^20/0.02")
    return c.result("C8", "weak verdicts agree with Lyapunov and Datko routes")


# ---------------------------------------------------------------------------
# criterion 9: the ODE realization reproduces the closed form
# ---------------------------------------------------------------------------

def criterion_09() -> CriterionResult:
    c = _Collector()
    members = corpus()
    ode, closed = members["planar_rotation_ode"], members["planar_rotation"]

    probes = sample_unit_probes(2, 4, seed=44)
    worst = 0.0
    for t0 in (0.0, 1.0):
        ts = np.linspace(t0, t0 + 10.0, 41)
        for ip in range(probes.shape[0]):
            a = ode.orbit_states(ts, t0, probes[ip])
            b = closed.orbit_states(ts, t0, probes[ip])
            ref = np.maximum(np.linalg.norm(b, axis=1), 1e-300)
            worst = max(worst, float(np.max(
                np.linalg.norm(a - b, axis=1) / ref)))
    c.check(worst <= 1e-6, f"state mismatch {worst:.2e}")

    scan_probes = sample_unit_probes(2, 6, seed=44)
    angles = _polar_angles(scan_probes)
    grids = ScanGrids(
        np.unique(np.concatenate([np.arange(0.0, 6.5, 0.5), angles])),
        np.arange(0.0, 3.5, 1.5),
        np.arange(0.0, 10.5, 0.5),
    )
    res_o = certify.certify_weak(ode, scan_probes, grids,
                                 n_max=GENEROUS_N_MAX, nu_min=GENEROUS_NU_MIN)
    res_c = certify.certify_weak(closed, scan_probes, grids,
                                 n_max=GENEROUS_N_MAX, nu_min=GENEROUS_NU_MIN)
    c.check(res_o.verdict == res_c.verdict == "certified",
            f"weak verdicts {res_o.verdict} vs {res_c.verdict}")
    if res_o.certificate is not None and res_c.certificate is not None:
        c.check(abs(res_o.certificate.N - res_c.certificate.N) <= 1e-6,
                f"N {res_o.certificate.N!r} vs {res_c.certificate.N!r}")
        c.check(abs(res_o.certificate.nu - res_c.certificate.nu) <= 1e-6,
                f"nu {res_o.certificate.nu!r} vs {res_c.certificate.nu!r}")
        c.check(res_o.certificate.t0_of == res_c.certificate.t0_of,
                "start times differ")

    t0_search = np.sort(angles)
    verdicts = []
    for op, res in ((ode, res_o), (closed, res_c)):
        m = lyapunov.bound_constant(res.certificate)
        dk = datko.datko_verdict(op, scan_probes, t0_search=t0_search,
                                 horizon=10.0, p=2.0,
                                 K_ceiling=m * (1.0 + 1e-4),
                                 panel_width=1.0 / 32)
        verdicts.append(dk.verdict)
    c.check(verdicts[0] == verdicts[1] == "bounded",
            f"datko verdicts {verdicts}")

    ax = verify_axioms(ode, np.arange(0.0, 7.5, 1.5), probes)
    c.check(ax.passed, f"axioms: e2 max {ax.e2_max:.2e}")
    c.note(f"state mismatch {worst:.1e}, e2 residual {ax.e2_max:.1e}")
    return c.result("C9", "ODE route matches closed form in states and verdicts")


# ---------------------------------------------------------------------------
# criterion 10 and the corpus expectation table
# ---------------------------------------------------------------------------

@dataclasses.dataclass
class CorpusRow:
    member: str
    check: str
    expected: str
    got: str
    passed: bool


EXPECTED_VERDICTS: dict[str, dict[str, str]] = {
    "uniform_growth": {
        "axioms": "pass", "decay": "certified", "uniform": "certified",
        "nonuniform": "certified", "bv": "not-refuted", "weak": "certified",
        "datko": "bounded", "lyapunov-bound": "pass",
    },
    "stable": {
        "axioms": "pass", "decay": "certified", "uniform": "refuted",
        "nonuniform": "refuted", "bv": "not-refuted", "weak": "refuted",
        "datko": "unbounded-trend", "lyapunov-bound": "fail",
    },
    "nonuniform_spikes": {
        "axioms": "pass", "decay": "refuted", "uniform": "refuted",
        "nonuniform": "certified", "bv": "refuted", "weak": "refuted",
        "datko": "unbounded-trend", "lyapunov-bound": "fail",
    },
    "planar_rotation": {
        "axioms": "pass", "decay": "certified", "uniform": "refuted",
        "nonuniform": "refuted", "bv": "refuted", "weak": "certified",
        "datko": "bounded", "lyapunov-bound": "pass",
    },
    "planar_rotation_ode": {
        "axioms": "pass", "decay": "certified", "uniform": "refuted",
        "nonuniform": "refuted", "bv": "refuted", "weak": "certified",
        "datko": "bounded", "lyapunov-bound": "pass",
    },
}


def _member_rows(name: str, op: EvolutionOperator,
                 expected: dict[str, str]) -> list[CorpusRow]:
    rows: list[CorpusRow] = []
    ode = op.kind == "ode"

    def add(check: str, got: str) -> None:
        rows.append(CorpusRow(name, check, expected[check], got,
                              got == expected[check]))

    if op.dimension == 1:
        probes = np.ones((1, 1))
        angles = np.zeros(1)
    else:
        w_set = np.stack([_w_probe(a) for a in (0.0, 1.75, 3.0, 4.5)])
        probes = np.vstack([w_set, sample_unit_probes(2, 4, seed=7)])
        angles = _polar_angles(probes)

    # reduced grids keep the ODE member inside the corpus time budget
    if ode:
        ax_grid = np.arange(0.0, 7.5, 1.5)
        grids = ScanGrids(
            np.unique(np.concatenate([np.arange(0.0, 6.5, 0.5), angles])),
            np.arange(0.0, 3.5, 1.5), np.arange(0.0, 10.5, 0.5))
        decay_grids = (np.arange(0.0, 6.5, 1.0), np.arange(0.0, 10.5, 0.5))
        bv_grids = ScanGrids(np.arange(0.0, 2.5, 1.0), np.zeros(1),
                             np.arange(0.0, 10.5, 1.0))
        horizon, width = 10.0, 1.0 / 32
    else:
        base = default_scan_grids()
        grids = _grids_with_angles(angles, base)
        # start times past the early spikes so the steep drops are visible
        decay_grids = (np.arange(0.0, 10.25, 0.25), base.t_offsets)
        bv_grids = None
        horizon, width = 20.0, 1.0 / 64

    ax = verify_axioms(op, ax_grid if ode else np.arange(0.0, 10.5, 0.5),
                       probes[: 4], tol=default_axiom_tol(op))
    add("axioms", "pass" if ax.passed else "fail")

    fit = certify.fit_decay(op, probes, decay_grids[0], decay_grids[1])
    add("decay", fit.verdict)

    harsh_uniform = UniformCertificate(GENEROUS_N_MAX, GENEROUS_NU_MIN)
    add("uniform", certify.check_uniform(op, harsh_uniform, probes,
                                         grids).verdict)

    if name == "nonuniform_spikes":
        nonuni = NonuniformCertificate(op.log_profile, 1.0)
        tol = 1e-9
    else:
        nonuni = NonuniformCertificate(ConstantLogProfile(10.0),
                                       GENEROUS_NU_MIN)
        tol = 1e-9
    add("nonuniform", certify.check_nonuniform(
        op, nonuni, probes, grids.t0_grid, grids.t_offsets, tol=tol).verdict)

    # anchored candidates are member-specific: alpha = 2 absorbs the stable
    # kernel's decay, alpha = 0 suffices for clean growth, and (e, 1, 1) is
    # the pair the spike family defeats
    bv_cert = {
        "uniform_growth": BVCertificate(1.0, 0.0, 1.0),
        "stable": BVCertificate(1.0, 2.0, 1.0),
    }.get(name, BVCertificate(math.e, 1.0, 1.0))
    add("bv", certify.refute_bv(op, bv_cert, witness_bound=50, probes=probes,
                                grids=bv_grids).verdict)

    weak = certify.certify_weak(op, probes, grids, n_max=GENEROUS_N_MAX,
                                nu_min=GENEROUS_NU_MIN)
    add("weak", weak.verdict)

    if weak.verdict == "certified":
        m = lyapunov.bound_constant(weak.certificate)
        ceiling = m * (1.0 + (1e-4 if ode else 1e-6))
        t0_search = np.sort(angles) if op.dimension == 2 \
            else np.arange(0.0, 2.0)
        lyap_t0 = weak.certificate.t0_of[0]
    else:
        ceiling = GENEROUS_M
        t0_search = np.arange(0.0, 3.0)
        lyap_t0 = 0.0
    dk = datko.datko_verdict(op, probes, t0_search=t0_search, horizon=horizon,
                             p=2.0, K_ceiling=ceiling, panel_width=width)
    add("datko", dk.verdict)

    table = lyapunov.build_lyapunov(op, probes[0], lyap_t0, horizon=horizon,
                                    panel_width=width)
    eq = lyapunov.verify_lyapunov_equation(op, table)
    m_check = ceiling if weak.verdict == "certified" else GENEROUS_M
    bound = lyapunov.verify_lyapunov_bound(table, m_check,
                                           tol=1e-5 if ode else 1e-9)
    got = "pass" if (eq.passed and bound.passed) else "fail"
    if not eq.passed:
        got = "equation-fail"
    add("lyapunov-bound", got)
    return rows


def corpus_expectation_rows(
    members: dict[str, EvolutionOperator] | None = None,
) -> list[CorpusRow]:
    """Run the expectation table; injectable members support fault tests."""
    members = corpus() if members is None else members
    rows: list[CorpusRow] = []
    for name, expected in EXPECTED_VERDICTS.items():
        op = members.get(name)
        if op is None:
            rows.append(CorpusRow(name, "present", "yes", "missing", False))
            continue
        rows.extend(_member_rows(name, op, expected))
    return rows


def criterion_10() -> CriterionResult:
    c = _Collector()
    rows = corpus_expectation_rows()
    for r in rows:
        c.check(r.passed, f"{r.member}/{r.check}: {r.got} != {r.expected}")
    c.note(f"{len(rows)} expectation rows")
    return c.result("C10", "full corpus matches the expectation table")


CRITERIA: dict[str, Callable[[], CriterionResult]] = {
    "C1": criterion_01, "C2": criterion_02, "C3": criterion_03,
    "C4": criterion_04, "C5": criterion_05, "C6": criterion_06,
    "C7": criterion_07, "C8": criterion_08, "C9": criterion_09,
    "C10": criterion_10,
}


def run_one(cid: str) -> CriterionResult:
    return CRITERIA[cid]()


def run_all() -> list[CriterionResult]:
    return [fn() for fn in CRITERIA.values()]
