"""Integral and discrete instability criteria against proof constants."""

import math

import numpy as np
import pytest

from evostab.certify import UniformCertificate
from evostab.datko import (datko_ratio_scan, datko_verdict,
                           discrete_necessity_constant, discrete_sum_scan,
                           discrete_to_integral_bound, necessity_constant,
                           sufficiency_constants)
from evostab.errors import InputError
from evostab.operators import PlanarRotation, ScalarKernel

ONE = np.array([1.0])


# ---------------------------------------------------------------------------
# ratio scans and verdicts
# ---------------------------------------------------------------------------

def test_ratio_stays_under_proof_ceiling_on_growth():
    # sup_t int_s^t e^{-p(t-tau)} d tau -> 1/(nu p) = 1 for p = 1, nu = 1
    series = datko_ratio_scan(ScalarKernel(rate=1.0), ONE, 0.0, p=1.0,
                              horizon=20.0)
    ceiling = necessity_constant(UniformCertificate(1.0, 1.0), 1.0)
    assert ceiling == 1.0
    sup = math.exp(series.log_sup)
    # measured sup is 1 - e^{-20} = 0.9999999979388464 up to quadrature
    assert sup == pytest.approx(0.9999999979388464, abs=1e-8)
    assert sup <= ceiling + 1e-9


def test_ratio_series_starts_empty():
    series = datko_ratio_scan(ScalarKernel(rate=1.0), ONE, 0.0, horizon=2.0)
    assert series.log_ratio[0] == -math.inf
    assert series.times[0] == 0.0


def test_verdict_bounded_on_growth_unbounded_on_stable():
    growth = datko_verdict(ScalarKernel(rate=1.0), np.ones((2, 1)),
                           horizon=12.0)
    assert growth.verdict == "bounded"
    assert all(r.verdict == "bounded" for r in growth.probe_reports)

    stable = datko_verdict(ScalarKernel(rate=-1.0), np.ones((1, 1)),
                           horizon=12.0, K_ceiling=100.0)
    assert stable.verdict == "unbounded-trend"
    report = stable.probe_reports[0]
    assert report.log_sup_ratio > math.log(100.0)
    assert report.trend_confirmed


def test_verdict_flags_degenerate_horizon():
    # 11.9 leaves 0.1 of span, under two 0.25 panels, so it is skipped and
    # flagged; it must come first because a bounded start settles the probe
    result = datko_verdict(ScalarKernel(rate=1.0), ONE.reshape(1, 1),
                           t0_search=np.array([11.9, 0.0]), horizon=12.0,
                           panel_width=0.25)
    assert result.verdict == "bounded"
    assert result.degenerate_horizon


def test_verdict_rejects_bad_inputs():
    with pytest.raises(InputError):
        datko_verdict(ScalarKernel(rate=1.0), np.ones((0, 1)))
    with pytest.raises(InputError):
        datko_verdict(ScalarKernel(rate=1.0), ONE.reshape(1, 1),
                      K_ceiling=0.0)
    with pytest.raises(InputError):
        datko_ratio_scan(ScalarKernel(rate=1.0), ONE, 5.0, horizon=5.0)


# ---------------------------------------------------------------------------
# constants from the constructive proofs
# ---------------------------------------------------------------------------

def test_necessity_constants():
    cert = UniformCertificate(1.0, 1.0)
    assert necessity_constant(cert, 1.0) == 1.0
    assert necessity_constant(cert, 2.0) == 0.5
    # discrete ceiling N^p/(1 - e^{-nu p}) = 1.5819767068693265
    assert discrete_necessity_constant(cert, 1.0) == pytest.approx(
        1.5819767068693265, rel=1e-15)


def test_sufficiency_constants_all_ones():
    suff = sufficiency_constants(1.0, 1.0, 1.0, 1.0)
    # L = min((1 - e^{-1})/(1 - e^{-1}) e^{-1}-form, e^{-1}) = e^{-1}
    assert suff.L == pytest.approx(0.36787944117144233, abs=1e-12)
    f = suff.f(np.array([0.0, 1.0, 4.0]))
    assert f.shape == (3,)
    assert np.all(np.diff(f) > 0.0)
    g = suff.growth(np.array([0.0, 1.0, 4.0]))
    assert g.divergence_bound == pytest.approx(suff.divergence_bound)
    assert np.allclose(g.values, f)


def test_sufficiency_rejects_bad_constants():
    with pytest.raises(InputError):
        sufficiency_constants(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(InputError):
        sufficiency_constants(1.0, -2.0, 1.0, 1.0)


def test_discrete_sum_frozen_ratio():
    # unit steps on e^{t-s}: 1 + e^{-1} + e^{-2} + e^{-3} = 1.553001792775919
    series = discrete_sum_scan(ScalarKernel(rate=1.0), ONE, 0.0, 1.0,
                               np.arange(0.0, 3.5, 1.0))
    assert math.exp(series.log_ratio[-1]) == pytest.approx(
        1.553001792775919, rel=1e-12)
    # and the proof ceiling 1/(1 - e^{-1}) bounds it
    assert math.exp(series.log_ratio[-1]) <= 1.5819767068693265


def test_discrete_to_integral_bridge_constant():
    # K M^p e^{omega p} with K = 1/(1-e^{-1}), M = omega = p = 1:
    # e/(1 - e^{-1}) = 4.300258535328371
    k_int = discrete_to_integral_bound(1.5819767068693265, 1.0, 1.0, 1.0)
    assert k_int == pytest.approx(4.300258535328371, rel=1e-15)


def test_planar_verdict_needs_aligned_start():
    # from its polar angle every probe grows cleanly and the ratio is bounded
    op = PlanarRotation()
    probe = np.array([[math.cos(1.0), math.sin(1.0)]])
    result = datko_verdict(op, probe, t0_search=np.array([1.0]), horizon=12.0)
    assert result.verdict == "bounded"
    assert result.probe_reports[0].t0 == 1.0
