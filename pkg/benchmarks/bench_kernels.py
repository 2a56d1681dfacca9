"""Time the numba kernels against their numpy twins.

Run with ``python benchmarks/bench_kernels.py``. Sizes mirror the scan
workloads: quadrature grids run to a few thousand panels, shortfall scans
to a few hundred thousand pairs. The numba column is skipped when the
package fell back to numpy (no numba installed or EVOSTAB_BACKEND=numpy).
"""

import timeit

import numpy as np

from evostab import _kernels as k

SIZES = (1_000, 10_000, 100_000)
REPEAT = 5


def make_inputs(n, rng):
    node_logs = rng.normal(size=2 * n + 1)
    node_logs[rng.random(node_logs.size) < 0.01] = -np.inf
    knots = np.linspace(0.0, 10.0, n + 1)
    dlog = rng.normal(size=n)
    dt = rng.random(n) * 4.0
    ts = rng.random(n) * 40.0
    return {
        "cum_logaddexp": (node_logs,),
        "simpson_panel_logs": (node_logs, knots),
        "min_feasible_rate": (dlog, dt, 10.0),
        "max_shortfall": (dlog, dt, 1.0),
        "spike_log_u": (ts,),
    }


def best_time(fn, args):
    timer = timeit.Timer(lambda: fn(*args))
    loops, _ = timer.autorange()
    return min(timer.repeat(REPEAT, loops)) / loops


def main():
    rng = np.random.default_rng(0)
    have_nb = k.HAVE_NUMBA and k.BACKEND == "numba"
    if have_nb:
        k.warmup()
    else:
        print("numba backend unavailable; timing numpy only\n")

    header = f"{'kernel':<22}{'n':>9}{'numpy':>12}"
    if have_nb:
        header += f"{'numba':>12}{'speedup':>9}"
    print(header)
    print("-" * len(header))

    for n in SIZES:
        inputs = make_inputs(n, rng)
        for name, args in inputs.items():
            t_np = best_time(getattr(k, f"{name}_np"), args)
            row = f"{name:<22}{n:>9}{t_np * 1e6:>10.1f}us"
            if have_nb:
                t_nb = best_time(getattr(k, f"{name}_nb"), args)
                row += f"{t_nb * 1e6:>10.1f}us{t_np / t_nb:>9.2f}x"
            print(row)
        print()


if __name__ == "__main__":
    main()
