"""Operator families: closed-form oracles, axiom checks, config parsing."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evostab.errors import ConfigError, InputError, OrderingError
from evostab.operators import (ConstantLogProfile, LogMagnitude, OdeFlow,
                               PiecewiseLogProfile, PlanarRotation,
                               ScalarKernel, SpikeLogProfile, corpus,
                               default_axiom_tol, load_operator,
                               operator_from_config, parse_key_values,
                               planar_rotation_coefficient,
                               sample_unit_probes, verify_axioms)

times = st.floats(min_value=0.0, max_value=20.0, allow_nan=False)


# ---------------------------------------------------------------------------
# closed-form oracles
# ---------------------------------------------------------------------------

def test_planar_rotation_rotates_and_grows():
    # U(t,s) maps v(s) = (cos s, sin s) to e^{t-s} v(t); frozen at (2, 1):
    # e cos 2 = -1.1312043837568135, e sin 2 = 2.4717266720048188
    op = PlanarRotation()
    out = op.evaluate(2.0, 1.0, np.array([math.cos(1.0), math.sin(1.0)]))
    np.testing.assert_allclose(
        out, [-1.1312043837568135, 2.4717266720048188], rtol=0, atol=1e-14)


def test_planar_rotation_decaying_direction():
    # w(s) = (sin s, -cos s) decays at exact rate one
    op = PlanarRotation()
    x = np.array([math.sin(0.5), -math.cos(0.5)])
    log = float(op.orbit_log_norms(np.array([3.5]), 0.5, x)[0])
    assert log == pytest.approx(-3.0, abs=1e-12)


def test_scalar_stable_oracle():
    op = ScalarKernel(rate=-1.0)
    out = op.evaluate(1.0, 0.0, np.array([1.0]))
    assert out[0] == pytest.approx(0.36787944117144233, rel=1e-15)


def test_spike_kernel_oracle():
    # between t=2 and t=2.5 the profile climbs by 4 while the rate adds 0.5
    op = ScalarKernel(rate=1.0, log_profile=SpikeLogProfile())
    assert float(op.log_amplitude(2.5, 2.0)) == -3.5


def test_spike_kernel_peak_recovery():
    # crossing a whole spike [n, n+1] leaves only the rate contribution
    op = ScalarKernel(rate=1.0, log_profile=SpikeLogProfile())
    assert float(op.log_amplitude(4.0, 3.0)) == pytest.approx(1.0, abs=1e-12)


def test_ode_flow_matches_closed_form():
    ode = OdeFlow(planar_rotation_coefficient, dimension=2)
    closed = PlanarRotation()
    x = np.array([math.cos(0.3), math.sin(0.3)])
    got = ode.evaluate(4.0, 0.0, x)
    want = closed.evaluate(4.0, 0.0, x)
    np.testing.assert_allclose(got, want, rtol=0, atol=1e-6)


# ---------------------------------------------------------------------------
# algebraic laws
# ---------------------------------------------------------------------------

@settings(deadline=None)
@given(st.floats(min_value=-3.0, max_value=3.0, allow_nan=False),
       times, times, times)
def test_scalar_cocycle_residual_small(rate, a, b, c):
    r, s, t = sorted((a, b, c))
    op = ScalarKernel(rate=rate)
    assert op.cocycle_residual(t, s, r, np.array([1.0])) <= 1e-12


@settings(deadline=None)
@given(times, times, st.floats(min_value=0.0, max_value=2 * math.pi,
                               allow_nan=False))
def test_planar_cocycle_residual_small(a, b, angle):
    s, t = sorted((a, b))
    r = max(0.0, s - 1.0)
    op = PlanarRotation()
    x = np.array([math.cos(angle), math.sin(angle)])
    # saddle composition amplifies rounding by e^{2(t-s)}
    assert op.cocycle_residual(t, s, r, x) <= 1e-8


@settings(deadline=None)
@given(times, times, st.floats(min_value=0.0, max_value=2 * math.pi,
                               allow_nan=False))
def test_orbit_log_norms_match_evaluate(a, b, angle):
    s, t = sorted((a, b))
    op = PlanarRotation()
    x = np.array([math.cos(angle), math.sin(angle)])
    log = float(op.orbit_log_norms(np.array([t]), s, x)[0])
    direct = float(np.linalg.norm(op.evaluate(t, s, x)))
    assert math.exp(log) == pytest.approx(direct, rel=1e-12)


def test_log_magnitude_algebra():
    a = LogMagnitude.from_value(2.0)
    b = LogMagnitude.from_value(3.0)
    assert (a * b).value == pytest.approx(6.0, rel=1e-15)
    assert (b / a).value == pytest.approx(1.5, rel=1e-15)
    assert (a ** 2).value == pytest.approx(4.0, rel=1e-15)
    assert a < b and b > a and a <= a and b >= b
    zero = LogMagnitude.zero()
    assert zero.is_zero and (zero * b).is_zero
    assert LogMagnitude.from_value(0.0).is_zero


def test_ordering_errors():
    op = ScalarKernel(rate=1.0)
    with pytest.raises(OrderingError):
        op.evaluate(1.0, 2.0, np.array([1.0]))
    with pytest.raises(OrderingError):
        op.evaluate(1.0, -0.5, np.array([1.0]))


def test_state_shape_is_checked():
    with pytest.raises(InputError):
        PlanarRotation().evaluate(1.0, 0.0, np.array([1.0]))


# ---------------------------------------------------------------------------
# axiom verification
# ---------------------------------------------------------------------------

def test_axioms_pass_on_corpus_closed_members():
    grid = np.arange(0.0, 6.5, 0.5)
    for name, op in corpus().items():
        if op.kind == "ode":
            continue
        probes = sample_unit_probes(op.dimension, 4, seed=3)
        report = verify_axioms(op, grid, probes, tol=default_axiom_tol(op))
        assert report.passed, f"{name}: e2 max {report.e2_max}"
        assert report.e1_max <= 1e-14


def test_axioms_fail_on_broken_cocycle():
    class Broken(ScalarKernel):
        def log_amplitude(self, t, s):
            t = np.asarray(t, dtype=np.float64)
            s = np.asarray(s, dtype=np.float64)
            return (t - s) ** 2

    report = verify_axioms(Broken(rate=1.0), np.arange(0.0, 4.0),
                           np.ones((1, 1)))
    assert not report.passed
    assert report.e2_witness is not None
    # (t-r)^2 != (t-s)^2 + (s-r)^2 as soon as r < s < t; the relative
    # residual saturates toward one for badly mismatched magnitudes
    assert report.e2_max > 0.5


def test_axioms_reject_bad_grids_and_probes():
    op = ScalarKernel(rate=1.0)
    with pytest.raises(InputError):
        verify_axioms(op, np.array([1.0, 1.0]), np.ones((1, 1)))
    with pytest.raises(InputError):
        verify_axioms(op, np.array([0.0, 1.0]), np.zeros((1, 1)))
    with pytest.raises(InputError):
        verify_axioms(op, np.array([0.0, 1.0]), np.ones((1, 2)))


def test_continuity_jump_reported_not_gating():
    op = ScalarKernel(rate=1.0, log_profile=SpikeLogProfile())
    report = verify_axioms(op, np.arange(0.0, 4.5, 0.5), np.ones((1, 1)))
    assert report.passed
    assert report.e3_max_jump > 0.9  # the spike ramp is visible


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def test_piecewise_profile_interpolates():
    prof = PiecewiseLogProfile(np.array([0.0, 1.0, 2.0]),
                               np.array([0.0, 2.0, 2.0]))
    np.testing.assert_allclose(prof.log_u(np.array([0.5, 1.5])), [1.0, 2.0])
    assert list(prof.kink_times(0.2, 1.8)) == [1.0]


def test_constant_profile_is_flat():
    prof = ConstantLogProfile(1.5)
    np.testing.assert_array_equal(prof.log_u(np.array([0.0, 7.3])),
                                  [1.5, 1.5])
    assert prof.kink_times(0.0, 10.0).size == 0


def test_spike_profile_kinks_inside_range():
    ks = SpikeLogProfile().kink_times(2.2, 4.1)
    assert 2.5 in ks and 3.0 in ks and 4.0 in ks
    assert all(2.2 < k < 4.1 for k in ks)


def test_spike_profile_preserves_shape():
    prof = SpikeLogProfile()
    out = prof.log_u(np.array([[2.5, 3.0], [0.0, 9.0 + 1.0 / 9.0]]))
    assert out.shape == (2, 2)
    assert out[0, 0] == 4.0 and out[1, 0] == 0.0


# ---------------------------------------------------------------------------
# probes and config
# ---------------------------------------------------------------------------

def test_probe_sampling_is_seeded_and_unit():
    a = sample_unit_probes(2, 6, seed=11)
    b = sample_unit_probes(2, 6, seed=11)
    c = sample_unit_probes(2, 6, seed=12)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    np.testing.assert_allclose(np.linalg.norm(a, axis=1), 1.0, rtol=1e-12)


def test_parse_key_values():
    cfg = parse_key_values("# comment\noperator = stable\n\nseed = 3\n")
    assert cfg == {"operator": "stable", "seed": "3"}
    with pytest.raises(ConfigError):
        parse_key_values("no equals sign")
    with pytest.raises(ConfigError):
        parse_key_values("a = 1\na = 2")
    with pytest.raises(ConfigError):
        parse_key_values("= 1")


def test_operator_from_config_variants():
    assert operator_from_config({"operator": "stable"}).kind == "scalar"
    assert operator_from_config({"kind": "planar"}).kind == "planar"
    op = operator_from_config({"kind": "scalar", "rate": "-2.0"})
    assert op.evaluate(1.0, 0.0, np.array([1.0]))[0] == \
        pytest.approx(math.exp(-2.0), rel=1e-15)
    spiky = operator_from_config({"kind": "scalar", "rate": "1.0",
                                  "profile": "spikes"})
    assert float(spiky.log_amplitude(2.5, 2.0)) == -3.5
    knotty = operator_from_config({
        "kind": "scalar", "rate": "0.0",
        "profile_knots": "0:0, 1:1, 2:1",
    })
    assert float(knotty.log_amplitude(1.0, 0.0)) == pytest.approx(-1.0)


def test_operator_from_config_errors():
    with pytest.raises(ConfigError):
        operator_from_config({"operator": "nope"})
    with pytest.raises(ConfigError):
        operator_from_config({"kind": "scalar", "rate": "fast"})
    with pytest.raises(ConfigError):
        operator_from_config({"kind": "scalar", "profile": "wiggles"})
    with pytest.raises(ConfigError):
        operator_from_config({})


def test_load_operator_roundtrip(tmp_path):
    path = tmp_path / "op.cfg"
    path.write_text("kind = scalar\nrate = 1.0\nprofile = spikes\n")
    op = load_operator(path)
    assert float(op.log_amplitude(2.5, 2.0)) == -3.5
