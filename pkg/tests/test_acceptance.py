"""Acceptance gate: every corpus criterion must pass at its tolerance.

Each criterion prints one PASS/FAIL line straight to the terminal so a
plain pytest run shows the table without -s.
"""

import time

import pytest

from evostab.acceptance import CRITERIA, run_all
from evostab.cli import EXIT_OK, cmd_corpus


@pytest.fixture(scope="module")
def results():
    return {r.cid: r for r in run_all()}


@pytest.mark.parametrize("cid", list(CRITERIA))
def test_criterion(cid, results, capsys):
    r = results[cid]
    with capsys.disabled():
        print(f"{'PASS' if r.passed else 'FAIL'} {cid}: {r.title}")
    assert r.passed, f"{cid} {r.title}: {r.details}"


def test_every_criterion_has_a_result(results):
    assert set(results) == set(CRITERIA)


def test_corpus_command_budget_and_determinism(tmp_path, capsys):
    # the full suite must finish under 60 s with exit 0 and write the
    # same acceptance table on a rerun
    outs = []
    for name in ("a", "b"):
        start = time.perf_counter()
        code = cmd_corpus(tmp_path / name)
        elapsed = time.perf_counter() - start
        assert code == EXIT_OK
        assert elapsed <= 60.0, f"corpus run took {elapsed:.1f}s"
        outs.append((tmp_path / name / "acceptance.json").read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1]
