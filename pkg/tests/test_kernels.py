"""Backend parity: the numba and numpy kernel twins must agree bit for bit.

Minus infinity encodes an exact zero magnitude and has to survive every
kernel, so the strategies sprinkle it in deliberately.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evostab import _kernels as K

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba unavailable")

log_values = st.one_of(
    st.just(-math.inf),
    st.floats(min_value=-50.0, max_value=50.0, allow_nan=False),
)


def log_array(min_size=1, max_size=64):
    return st.lists(log_values, min_size=min_size, max_size=max_size).map(
        lambda v: np.array(v, dtype=np.float64)
    )


@needs_numba
@settings(deadline=None)
@given(log_array())
def test_cum_logaddexp_parity(x):
    np.testing.assert_array_equal(K.cum_logaddexp_nb(x.copy()),
                                  K.cum_logaddexp_np(x))


@needs_numba
@settings(deadline=None)
@given(st.integers(min_value=1, max_value=12), st.data())
def test_simpson_panel_parity(m, data):
    node_logs = data.draw(log_array(2 * m + 1, 2 * m + 1))
    steps = data.draw(st.lists(
        st.floats(min_value=1e-3, max_value=2.0, allow_nan=False),
        min_size=m, max_size=m,
    ))
    knots = np.concatenate(([0.0], np.cumsum(steps)))
    np.testing.assert_array_equal(
        K.simpson_panel_logs_nb(node_logs.copy(), knots.copy()),
        K.simpson_panel_logs_np(node_logs, knots),
    )


@needs_numba
@settings(deadline=None)
@given(st.data())
def test_rate_and_shortfall_parity(data):
    n = data.draw(st.integers(min_value=1, max_value=40))
    dlog = data.draw(st.lists(
        st.floats(min_value=-100.0, max_value=100.0, allow_nan=False),
        min_size=n, max_size=n,
    ).map(np.array))
    dt = data.draw(st.lists(
        st.floats(min_value=0.0, max_value=30.0, allow_nan=False),
        min_size=n, max_size=n,
    ).map(np.array))
    cap = data.draw(st.floats(min_value=0.0, max_value=10.0, allow_nan=False))
    rate = data.draw(st.floats(min_value=0.0, max_value=5.0, allow_nan=False))
    assert K.min_feasible_rate_nb(dlog, dt, cap) == \
        K.min_feasible_rate_np(dlog, dt, cap)
    assert K.max_shortfall_nb(dlog, dt, rate) == \
        K.max_shortfall_np(dlog, dt, rate)


@needs_numba
@settings(deadline=None)
@given(st.lists(
    st.floats(min_value=0.0, max_value=60.0, allow_nan=False),
    min_size=1, max_size=50,
).map(np.array))
def test_spike_log_u_parity(ts):
    np.testing.assert_array_equal(K.spike_log_u_nb(ts.copy()),
                                  K.spike_log_u_np(ts))


# ---------------------------------------------------------------------------
# single-backend behavior (runs on whichever backend is selected)
# ---------------------------------------------------------------------------

def test_cum_logaddexp_keeps_neg_inf():
    out = K.cum_logaddexp(np.array([-math.inf, -math.inf, 0.0, -math.inf]))
    assert out[0] == -math.inf and out[1] == -math.inf
    assert out[2] == 0.0 and out[3] == 0.0


def test_cum_logaddexp_matches_direct_sum():
    x = np.log(np.array([1.0, 2.0, 3.0, 4.0]))
    expected = np.log(np.cumsum([1.0, 2.0, 3.0, 4.0]))
    np.testing.assert_allclose(K.cum_logaddexp(x), expected, rtol=1e-14)


def test_simpson_exact_on_quadratics():
    # Simpson integrates t^2 exactly: int_0^2 t^2 = 8/3
    knots = np.array([0.0, 1.0, 2.0])
    nodes = np.array([0.0, 0.5, 1.0, 1.5, 2.0])
    with np.errstate(divide="ignore"):
        node_logs = np.log(nodes ** 2)
    total = float(np.logaddexp.reduce(K.simpson_panel_logs(node_logs, knots)))
    assert math.exp(total) == pytest.approx(8.0 / 3.0, rel=1e-14)


def test_simpson_all_zero_panel_is_neg_inf():
    out = K.simpson_panel_logs(np.full(3, -math.inf), np.array([0.0, 1.0]))
    assert out[0] == -math.inf


def test_spike_profile_oracle_values():
    # peak n^2 at n + 1/n, zero at integers and everywhere on [0, 2]
    assert K.spike_log_u(np.array([2.5]))[0] == 4.0
    assert K.spike_log_u(np.array([1.3]))[0] == 0.0
    for n in range(2, 11):
        peak = K.spike_log_u(np.array([n + 1.0 / n]))[0]
        assert peak == pytest.approx(n * n, abs=1e-10)
        assert K.spike_log_u(np.array([float(n)]))[0] == 0.0


def test_min_feasible_rate_empty_is_inf():
    assert K.min_feasible_rate(np.array([1.0]), np.array([0.0]), 0.0) == math.inf


def test_max_shortfall_is_nonnegative():
    assert K.max_shortfall(np.array([5.0]), np.array([1.0]), 0.1) == 0.0


def test_backend_flag_is_reported():
    assert K.BACKEND in ("numba", "numpy")
    K.warmup()
