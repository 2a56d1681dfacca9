"""CLI behavior: config merging, exit codes, determinism, schema."""

import filecmp
import json

import jsonschema
import numpy as np
import pytest

from evostab import ScalarKernel, load_report_schema
from evostab.cli import (EXIT_ACCURACY, EXIT_CONFIG, EXIT_CRITERIA, EXIT_OK,
                         build_parser, build_run_config, cmd_corpus, main,
                         parse_t0_grid)


def analyze_args(*extra):
    # small grids and a short horizon keep the scans cheap
    return ["analyze", "--t0-grid", "0:2:0.5", "--horizon", "8", *extra]


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def test_parse_t0_grid_inclusive_endpoints():
    grid = parse_t0_grid("0:10:0.5")
    assert grid.size == 21
    assert grid[0] == 0.0 and grid[-1] == 10.0


def test_parse_t0_grid_rejects_malformed():
    from evostab import ConfigError
    for spec in ("0:10", "a:b:c", "-1:4:1", "4:3:1", "0:4:0"):
        with pytest.raises(ConfigError):
            parse_t0_grid(spec)


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("operator = stable\nseed = 3\nhorizon = 9\nprobes = 4\n")
    args = build_parser().parse_args(
        ["analyze", "--config", str(cfg), "--seed", "5"])
    config = build_run_config(args)
    assert config.seed == 5          # flag wins
    assert config.horizon == 9.0     # file fills the gap
    assert config.probe_count == 4
    assert config.operator_cfg == {"operator": "stable"}


def test_op_flag_replaces_file_operator(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("kind = scalar\nrate = -1\n")
    args = build_parser().parse_args(
        ["analyze", "--config", str(cfg), "--op", "uniform_growth"])
    config = build_run_config(args)
    assert config.operator_cfg == {"operator": "uniform_growth"}


def test_unknown_config_key_rejected(tmp_path):
    from evostab import ConfigError
    cfg = tmp_path / "run.cfg"
    cfg.write_text("operator = stable\nhorizn = 9\n")
    args = build_parser().parse_args(["analyze", "--config", str(cfg)])
    with pytest.raises(ConfigError):
        build_run_config(args)


def test_checks_subset_keeps_canonical_order(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("operator = stable\nchecks = weak, axioms\n")
    args = build_parser().parse_args(["analyze", "--config", str(cfg)])
    config = build_run_config(args)
    assert config.checks == ("axioms", "weak")


# ---------------------------------------------------------------------------
# exit code 2: nothing written
# ---------------------------------------------------------------------------

def test_unknown_member_exits_2_without_writing(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(analyze_args("--op", "not_a_member", "--out", str(out)))
    assert code == EXIT_CONFIG
    assert not out.exists()
    assert "config error" in capsys.readouterr().err


def test_malformed_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("operator stable\n")
    out = tmp_path / "out"
    code = main(["analyze", "--config", str(cfg), "--out", str(out)])
    assert code == EXIT_CONFIG
    assert not out.exists()
    assert "config error" in capsys.readouterr().err


def test_missing_config_file_exits_2(tmp_path, capsys):
    code = main(["analyze", "--config", str(tmp_path / "absent.cfg")])
    assert code == EXIT_CONFIG
    capsys.readouterr()


def test_bad_thread_cap_exits_2(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("EVOSTAB_THREADS", "many")
    out = tmp_path / "out"
    code = main(analyze_args("--op", "stable", "--out", str(out)))
    assert code == EXIT_CONFIG
    assert not out.exists()
    capsys.readouterr()


# ---------------------------------------------------------------------------
# analyze happy path
# ---------------------------------------------------------------------------

def test_reports_are_byte_identical_across_reruns(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        code = main(analyze_args("--op", "stable", "--seed", "7",
                                 "--out", str(out)))
        assert code == EXIT_OK
        outs.append(out)
    capsys.readouterr()
    for fname in ("report.json", "cumulative.csv", "ratio.csv",
                  "lyapunov.csv", "trajectory.csv"):
        assert filecmp.cmp(outs[0] / fname, outs[1] / fname, shallow=False), \
            fname


def test_report_validates_against_schema(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(analyze_args("--op", "uniform_growth",
                             "--out", str(out))) == EXIT_OK
    capsys.readouterr()
    report = json.loads((out / "report.json").read_text())
    jsonschema.validate(report, load_report_schema())
    assert report["exports"] == ["cumulative.csv", "lyapunov.csv",
                                 "ratio.csv", "trajectory.csv"]
    assert report["weak"]["verdict"] == "certified"
    assert report["uniform"]["candidate_source"] == "weak-certificate"


def test_stable_report_records_unit_anchor_candidate(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(analyze_args("--op", "stable", "--out", str(out))) == EXIT_OK
    printed = capsys.readouterr().out
    report = json.loads((out / "report.json").read_text())
    assert report["weak"]["verdict"] == "refuted"
    assert report["bv"]["candidate"] == {"N": 1.0, "alpha": 2.0, "nu": 1.0}
    assert report["bv"]["candidate_source"] == "decay-floor" or \
        report["bv"]["candidate_source"] == "unit-fallback"
    assert report["bv"]["verdict"] == "not-refuted"
    assert "bv: not-refuted" in printed


def test_checks_subset_skips_other_blocks(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("operator = stable\nchecks = axioms, decay\n"
                   "t0_grid = 0:2:0.5\nhorizon = 8\n")
    out = tmp_path / "out"
    code = main(["analyze", "--config", str(cfg), "--out", str(out)])
    assert code == EXIT_OK
    printed = capsys.readouterr().out
    report = json.loads((out / "report.json").read_text())
    assert report["axioms"] is not None
    assert report["decay"] is not None
    for name in ("uniform", "weak", "bv", "datko", "lyapunov"):
        assert report[name] is None
    assert "weak:" not in printed
    jsonschema.validate(report, load_report_schema())


def test_accuracy_ceiling_exits_3_with_partial_report(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(analyze_args("--op", "stable", "--out", str(out),
                             "--error-ceiling", "1e-18"))
    assert code == EXIT_ACCURACY
    printed = capsys.readouterr().out
    report = json.loads((out / "report.json").read_text())
    err = report["accuracy_error"]
    assert err is not None
    assert err["ceiling"] == 1e-18
    assert err["quad_error"] > 1e-18
    # the ceiling trips inside the datko series, so later blocks stay null
    assert report["datko"] is None
    assert report["lyapunov"] is None
    assert report["weak"] is not None
    assert "report is partial" in printed
    jsonschema.validate(report, load_report_schema())


# ---------------------------------------------------------------------------
# corpus subcommand
# ---------------------------------------------------------------------------

def test_corpus_rejects_blank_out_dir(capsys):
    assert cmd_corpus("") == EXIT_CONFIG
    assert cmd_corpus("   ") == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_corpus_missing_members_exit_1(tmp_path, capsys):
    code = cmd_corpus(tmp_path / "acc", members={})
    assert code == EXIT_CRITERIA
    printed = capsys.readouterr().out
    assert "uniform_growth/present: missing != yes" in printed
    assert (tmp_path / "acc" / "acceptance.json").is_file()


def test_corpus_broken_member_reports_axiom_failure(tmp_path, capsys):
    class Broken(ScalarKernel):
        def log_amplitude(self, t, s):
            t = np.asarray(t, dtype=np.float64)
            s = np.asarray(s, dtype=np.float64)
            return (t - s) ** 2

    from evostab import corpus
    members = dict(corpus())
    members["uniform_growth"] = Broken(rate=1.0)
    code = cmd_corpus(tmp_path / "acc", members=members)
    assert code == EXIT_CRITERIA
    printed = capsys.readouterr().out
    assert "uniform_growth/axioms: fail != pass" in printed


def test_corpus_main_path_writes_table(tmp_path, monkeypatch, capsys):
    from evostab.acceptance import CriterionResult

    def fake_run_all():
        return [CriterionResult("C1", "stub", True, "ok")]

    monkeypatch.setattr("evostab.cli.run_all", fake_run_all)
    code = main(["corpus", str(tmp_path / "acc")])
    assert code == EXIT_OK
    assert "C1  PASS  stub" in capsys.readouterr().out
    rows = json.loads((tmp_path / "acc" / "acceptance.json").read_text())
    assert rows[0]["cid"] == "C1" and rows[0]["passed"] is True
