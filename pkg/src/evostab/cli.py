"""Command-line front end.

Two subcommands: ``analyze`` runs the certification pipeline on one
operator and writes ``report.json`` plus CSV series for external plotting;
``corpus`` runs the full acceptance suite and prints a summary table.

Exit codes: 0 completed (whatever the verdicts), 1 corpus criterion
failure, 2 config error (nothing written), 3 quadrature accuracy ceiling
exceeded (partial report written and flagged).
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
from pathlib import Path

import numpy as np

from ._kernels import BACKEND
from .acceptance import CriterionResult, corpus_expectation_rows, run_all
from .certify import (BVCertificate, ScanGrids, UniformCertificate,
                      certify_weak, check_uniform, default_scan_grids,
                      fit_decay, refute_bv)
from .datko import datko_ratio_scan, datko_verdict
from .errors import AccuracyError, ConfigError
from .lyapunov import (bound_constant, build_lyapunov, lyapunov_to_datko,
                       verify_lyapunov_bound, verify_lyapunov_equation)
from .numerics import DEFAULT_PANEL_WIDTH, log_integral_power, orbit_quad_grid
from .operators import (default_axiom_tol, export_trajectory_csv,
                        operator_from_config, parse_key_values,
                        sample_unit_probes, verify_axioms)
from .serialize import dump_report, json_ready

EXIT_OK = 0
EXIT_CRITERIA = 1
EXIT_CONFIG = 2
EXIT_ACCURACY = 3

ALL_CHECKS = ("axioms", "decay", "uniform", "weak", "bv", "datko", "lyapunov")

# keys a config file may set; the first group feeds operator_from_config
OPERATOR_KEYS = frozenset({"operator", "kind", "rate", "profile", "profile_knots"})
RUN_KEYS = frozenset({"probes", "seed", "p", "horizon", "t0_grid",
                      "panel_width", "checks", "error_ceiling", "out"})


@dataclasses.dataclass
class RunConfig:
    """Fully validated inputs for one analyze run.

    A fixed seed fixes the probe set, and with it every scan, so reruns
    with the same config produce byte-identical reports.
    """
    operator_cfg: dict[str, str]
    label: str
    probe_count: int
    seed: int
    p: float
    horizon: float
    grids: ScanGrids
    panel_width: float
    checks: tuple[str, ...]
    error_ceiling: float | None
    out_dir: Path


def parse_t0_grid(spec: str) -> np.ndarray:
    """Parse ``start:stop:step`` into an inclusive arithmetic grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"t0 grid must be start:stop:step, got {spec!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"bad t0 grid {spec!r}") from exc
    if start < 0.0 or stop < start or step <= 0.0:
        raise ConfigError(
            f"t0 grid needs 0 <= start <= stop and step > 0, got {spec!r}"
        )
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def _parse_checks(text: str) -> tuple[str, ...]:
    names = [item.strip() for item in text.split(",") if item.strip()]
    unknown = [n for n in names if n not in ALL_CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks {unknown}; have {list(ALL_CHECKS)}")
    if not names:
        raise ConfigError("checks list is empty")
    return tuple(c for c in ALL_CHECKS if c in names)


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Merge flags over config-file values over defaults, then validate.

    Raises ConfigError on any problem; nothing is written before this
    returns.
    """
    file_cfg: dict[str, str] = {}
    if args.config is not None:
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError(f"config file {path} not found")
        file_cfg = parse_key_values(path.read_text())

    operator_cfg = {k: v for k, v in file_cfg.items() if k in OPERATOR_KEYS}
    run_cfg = {k: v for k, v in file_cfg.items() if k not in OPERATOR_KEYS}
    unknown = sorted(set(run_cfg) - RUN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys {unknown}")
    if args.op is not None:
        operator_cfg = {"operator": args.op}
    if not operator_cfg:
        raise ConfigError("no operator given; use --op or a config file")

    def pick(flag, key, default, cast):
        if flag is not None:
            return flag
        if key in run_cfg:
            try:
                return cast(run_cfg[key])
            except ValueError as exc:
                raise ConfigError(f"bad {key} value {run_cfg[key]!r}") from exc
        return default

    probe_count = pick(None, "probes", 8, int)
    seed = pick(args.seed, "seed", 0, int)
    p = pick(args.p, "p", 2.0, float)
    horizon = pick(args.horizon, "horizon", 20.0, float)
    panel_width = pick(None, "panel_width", DEFAULT_PANEL_WIDTH, float)
    checks = pick(None, "checks", ALL_CHECKS, _parse_checks)
    ceiling = pick(args.error_ceiling, "error_ceiling", None, float)
    out_dir = Path(pick(args.out, "out", "evostab-report", str))

    if probe_count < 1:
        raise ConfigError(f"probes must be >= 1, got {probe_count}")
    if seed < 0:
        raise ConfigError(f"seed must be >= 0, got {seed}")
    if not (p > 0.0):
        raise ConfigError(f"p must be > 0, got {p}")
    if not (panel_width > 0.0):
        raise ConfigError(f"panel_width must be > 0, got {panel_width}")
    if ceiling is not None and not (ceiling > 0.0):
        raise ConfigError(f"error_ceiling must be > 0, got {ceiling}")

    base = default_scan_grids()
    t0_spec = args.t0_grid if args.t0_grid is not None else run_cfg.get("t0_grid")
    t0_grid = parse_t0_grid(t0_spec) if t0_spec is not None else base.t0_grid
    grids = ScanGrids(t0_grid, base.s_offsets, base.t_offsets)
    if not (horizon > float(t0_grid[0]) + 2.0 * panel_width):
        raise ConfigError(
            f"horizon {horizon} leaves no room after t0 {float(t0_grid[0])}"
        )

    label = " ".join(f"{k}={operator_cfg[k]}" for k in sorted(operator_cfg))
    return RunConfig(operator_cfg, label, probe_count, seed, p, horizon,
                     grids, panel_width, checks, ceiling, out_dir)


def _apply_thread_cap() -> None:
    # single-threaded kernels make the cap trivially honored; still wired
    # through so a parallel numba layer would obey it
    raw = os.environ.get("EVOSTAB_THREADS")
    if raw is None or raw == "":
        return
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"EVOSTAB_THREADS must be an integer, got {raw!r}") from exc
    n = max(1, min(n, os.cpu_count() or 1))
    if BACKEND == "numba":
        import numba

        numba.set_num_threads(n)


def cmd_analyze(config: RunConfig) -> int:
    """Run the selected checks and write report.json plus CSV series.

    The uniform candidate is auto-fitted: the weak certificate when one
    was found, otherwise the most permissive corner of the weak search
    box. The anchored candidate reuses the weak certificate with no
    anchor (alpha = 0); with no weak certificate the decay floor absorbed
    twice (N = M, alpha = 2 omega, nu = omega), and (1, 2, 1) as the last
    resort. Series exports start where the weak certificate starts the
    first probe, so the Lyapunov bound is checked on the orbit the
    certificate actually covers.
    """
    op = operator_from_config(config.operator_cfg)
    probes = sample_unit_probes(op.dimension, config.probe_count, config.seed)
    checks = config.checks

    report: dict = {
        "schema_version": 1,
        "backend": BACKEND,
        "config": {
            "operator": config.label,
            "probe_count": config.probe_count,
            "seed": config.seed,
            "p": config.p,
            "horizon": config.horizon,
            "panel_width": config.panel_width,
            "checks": list(checks),
            "error_ceiling": config.error_ceiling,
            "grids": config.grids.describe(),
        },
        "operator": {"kind": op.kind, "dimension": op.dimension},
        "probes": probes.tolist(),
        "axioms": None, "decay": None, "uniform": None, "weak": None,
        "bv": None, "datko": None, "lyapunov": None,
        "accuracy_error": None,
        "exports": [],
    }
    lines: list[str] = []
    exports: list[str] = []
    config.out_dir.mkdir(parents=True, exist_ok=True)

    code = EXIT_OK
    try:
        if "axioms" in checks:
            # the triple scan is cubic in grid size, and ODE members pay
            # three propagations per triple; thin the grid accordingly
            g = config.grids.t0_grid
            stride = max(1, math.ceil(g.size / (6 if op.kind == "ode" else 12)))
            ax = verify_axioms(op, g[::stride], probes[:4],
                               tol=default_axiom_tol(op))
            report["axioms"] = ax.to_dict()
            lines.append(f"axioms: {'pass' if ax.passed else 'fail'} "
                         f"(e2 max {ax.e2_max:.2e})")

        decay = None
        if "decay" in checks:
            decay = fit_decay(op, probes, config.grids.t0_grid,
                              config.grids.t_offsets)
            report["decay"] = dataclasses.asdict(decay)
            got = (f"M={decay.certificate.M}, omega={decay.certificate.omega}"
                   if decay.certificate else
                   f"needs omega {decay.omega_needed:.3g}")
            lines.append(f"decay: {decay.verdict} ({got})")

        weak = None
        if "weak" in checks:
            weak = certify_weak(op, probes, grids=config.grids)
            report["weak"] = dataclasses.asdict(weak)
            got = (f"N={weak.certificate.N:.6g}, nu={weak.certificate.nu:.6g}"
                   if weak.certificate else "no feasible pair")
            lines.append(f"weak: {weak.verdict} ({got})")
        weak_cert = weak.certificate if weak is not None else None

        if "uniform" in checks:
            if weak_cert is not None:
                cand = UniformCertificate(weak_cert.N, weak_cert.nu)
                source = "weak-certificate"
            else:
                cand = UniformCertificate(math.exp(10.0), 0.01)
                source = "search-corner"
            uni = check_uniform(op, cand, probes, grids=config.grids)
            report["uniform"] = {
                "candidate": {"N": cand.N, "nu": cand.nu},
                "candidate_source": source,
                **dataclasses.asdict(uni),
            }
            lines.append(f"uniform: {uni.verdict} "
                         f"(candidate N={cand.N:.6g}, nu={cand.nu:.6g})")

        if "bv" in checks:
            if weak_cert is not None:
                bv_cand = BVCertificate(weak_cert.N, 0.0, weak_cert.nu)
                source = "weak-certificate"
            elif decay is not None and decay.certificate is not None:
                c = decay.certificate
                bv_cand = BVCertificate(c.M, 2.0 * c.omega, c.omega)
                source = "decay-floor"
            else:
                bv_cand = BVCertificate(1.0, 2.0, 1.0)
                source = "unit-fallback"
            bv = refute_bv(op, bv_cand, probes=probes, grids=config.grids)
            report["bv"] = {
                "candidate": {"N": bv_cand.N, "alpha": bv_cand.alpha,
                              "nu": bv_cand.nu},
                "candidate_source": source,
                **dataclasses.asdict(bv),
            }
            lines.append(f"bv: {bv.verdict} (candidate N={bv_cand.N:.6g}, "
                         f"alpha={bv_cand.alpha:.6g}, nu={bv_cand.nu:.6g})")

        series_t0 = float(config.grids.t0_grid[0])
        if weak_cert is not None:
            series_t0 = float(weak_cert.t0_of[0])

        if "datko" in checks:
            knots = orbit_quad_grid(op, series_t0, config.horizon,
                                    config.panel_width)
            cum = log_integral_power(op, probes[0], config.p, knots,
                                     start=series_t0,
                                     error_ceiling=config.error_ceiling)
            ratio = datko_ratio_scan(op, probes[0], series_t0, p=config.p,
                                     horizon=config.horizon, knots=knots,
                                     error_ceiling=config.error_ceiling)
            cum.export_csv(config.out_dir / "cumulative.csv")
            exports.append("cumulative.csv")
            ratio.export_csv(config.out_dir / "ratio.csv")
            exports.append("ratio.csv")
            dv = datko_verdict(op, probes, t0_search=config.grids.t0_grid,
                               horizon=config.horizon, p=config.p,
                               panel_width=config.panel_width)
            report["datko"] = {
                **dataclasses.asdict(dv),
                "series": {"t0": series_t0, "probe_index": 0,
                           "quad_error": ratio.quad_error},
            }
            lines.append(f"datko: {dv.verdict} (p={config.p:g})")

        if "lyapunov" in checks:
            table = build_lyapunov(op, probes[0], series_t0,
                                   horizon=config.horizon,
                                   panel_width=config.panel_width,
                                   error_ceiling=config.error_ceiling)
            table.export_csv(config.out_dir / "lyapunov.csv")
            exports.append("lyapunov.csv")
            eq = verify_lyapunov_equation(op, table)
            block = {
                "t0": series_t0, "probe_index": 0,
                "quad_error": table.quad_error,
                "panel_width": table.panel_width,
                "knot_count": int(table.knots.size),
                "equation": dataclasses.asdict(eq),
                "bound": None, "bridge": None,
            }
            summary = f"equation {'pass' if eq.passed else 'fail'}"
            if weak_cert is not None:
                m = bound_constant(weak_cert)
                bnd = verify_lyapunov_bound(table, m)
                block["bound"] = dataclasses.asdict(bnd)
                summary += f", bound {'pass' if bnd.passed else 'fail'}"
                if eq.passed:
                    bridge = lyapunov_to_datko(table, m, eq)
                    block["bridge"] = {
                        "m": bridge.m,
                        "within_bound": bridge.within_bound,
                        "log_sup_ratio": bridge.series.log_sup,
                        "quad_error": bridge.series.quad_error,
                    }
            report["lyapunov"] = block
            lines.append(f"lyapunov: {summary}")

        traj_ts = orbit_quad_grid(op, series_t0, config.horizon,
                                  config.panel_width)
        export_trajectory_csv(config.out_dir / "trajectory.csv", op,
                              series_t0, probes[0], traj_ts)
        exports.append("trajectory.csv")
    except AccuracyError as exc:
        report["accuracy_error"] = {
            "message": str(exc),
            "quad_error": exc.quad_error,
            "ceiling": exc.ceiling,
        }
        lines.append(f"accuracy: ceiling exceeded ({exc.quad_error:.3g} > "
                     f"{exc.ceiling:.3g}), report is partial")
        code = EXIT_ACCURACY

    report["exports"] = sorted(exports)
    dump_report(json_ready(report), config.out_dir / "report.json")
    # weak runs before uniform/bv to supply candidates; print in check order
    order = {name: i for i, name in enumerate(ALL_CHECKS)}
    lines.sort(key=lambda ln: order.get(ln.split(":", 1)[0], len(order)))
    for line in lines:
        print(line)
    print(f"report: {config.out_dir / 'report.json'}")
    return code


def cmd_corpus(out_dir: str | Path, members=None) -> int:
    """Run the acceptance suite, print the summary table, and write it.

    ``members`` substitutes the operator family behind the expectation
    table (fault-injection hook); the numbered criteria always run on the
    built-in corpus, so they are skipped in that mode.
    """
    if out_dir is None or not str(out_dir).strip():
        print("config error: output directory must be nonempty", file=sys.stderr)
        return EXIT_CONFIG
    path = Path(out_dir)
    try:
        path.mkdir(parents=True, exist_ok=True)
        probe = path / ".write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        print(f"config error: cannot write to {path}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if members is None:
        results = run_all()
    else:
        rows = corpus_expectation_rows(members)
        bad = [f"{r.member}/{r.check}: {r.got} != {r.expected}"
               for r in rows if not r.passed]
        results = [CriterionResult(
            "corpus", "expectation table over supplied members",
            not bad, "; ".join(bad) if bad else f"{len(rows)} rows",
        )]

    width = max(len(r.cid) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.cid:<{width}}  {status}  {r.title}")
    dump_report([dataclasses.asdict(r) for r in results],
                path / "acceptance.json")

    failures = [r for r in results if not r.passed]
    if failures:
        print("failures:")
        for r in failures:
            print(f"  {r.cid}: {r.details}")
        return EXIT_CRITERIA
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evostab",
        description="Certify or refute exponential instability on scan grids",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="run the pipeline on one operator")
    pa.add_argument("--op", help="corpus member name")
    pa.add_argument("--config", help="key = value config file")
    pa.add_argument("--seed", type=int, help="probe sampling seed (default 0)")
    pa.add_argument("--p", type=float, help="integral exponent (default 2)")
    pa.add_argument("--horizon", type=float,
                    help="absolute end time for integral scans (default 20)")
    pa.add_argument("--t0-grid", dest="t0_grid", metavar="START:STOP:STEP",
                    help="start-time grid, endpoints inclusive")
    pa.add_argument("--out", help="output directory (default evostab-report)")
    pa.add_argument("--error-ceiling", dest="error_ceiling", type=float,
                    help="abort with exit 3 if estimated quadrature error "
                         "exceeds this")

    pc = sub.add_parser("corpus", help="run the acceptance suite")
    pc.add_argument("out_dir", help="directory for acceptance.json")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_thread_cap()
        if args.command == "analyze":
            return cmd_analyze(build_run_config(args))
        return cmd_corpus(args.out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
