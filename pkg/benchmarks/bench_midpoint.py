#!/usr/bin/env python3
"""Benchmark the implicit-midpoint stepping kernels: compiled vs pure Python.

Usage: python benchmarks/bench_midpoint.py [steps]

The stepping loop is the one genuinely hot path in the package (everything
quantum-side is dense LAPACK work); this script measures how much the
compiled extension buys over the fallback on identical workloads and checks
that the two backends agree.
"""

import sys
import time

import numpy as np

from chronolab import _midpoint_py

try:
    from chronolab import _midpoint
except ImportError:
    _midpoint = None

CASES = (
    ("harmonic, original", _midpoint_py.HARMONIC, 1.0, False, np.array([1.0, 0.0])),
    ("harmonic, extended", _midpoint_py.HARMONIC, 1.0, True, np.array([1.0, 0.0, 0.0, -0.5])),
    ("quartic, original", _midpoint_py.QUARTIC, 0.0, False, np.array([1.0, 0.0])),
    ("quartic, extended", _midpoint_py.QUARTIC, 0.0, True, np.array([1.0, 0.0, 0.0, -0.25])),
)


def run(kernels, kind, omega, z0, nsteps, extended):
    start = time.perf_counter()
    traj, fail_step, fail_kind = kernels.run_midpoint(
        kind, omega, z0, nsteps, 1e-3, extended, 1e-13, 50)
    elapsed = time.perf_counter() - start
    assert fail_kind == 0, f"kernel failed at step {fail_step}"
    return traj, elapsed


def main():
    nsteps = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    print(f"implicit-midpoint stepping, {nsteps} steps, dt=1e-3, tol=1e-13")
    print(f"{'case':<22}{'python':>12}{'compiled':>12}{'speedup':>10}{'agree':>12}")
    for label, kind, omega, extended, z0 in CASES:
        _, t_py = run(_midpoint_py, kind, omega, z0, nsteps, extended)
        if _midpoint is None:
            print(f"{label:<22}{t_py:>10.3f}s{'n/a':>12}{'n/a':>10}{'n/a':>12}")
            continue
        traj_c, t_c = run(_midpoint, kind, omega, z0, nsteps, extended)
        traj_p, _ = run(_midpoint_py, kind, omega, z0, min(nsteps, 20_000), extended)
        ref_c, _, _ = _midpoint.run_midpoint(kind, omega, z0, min(nsteps, 20_000),
                                             1e-3, extended, 1e-13, 50)
        agreement = float(np.max(np.abs(traj_p - ref_c)))
        print(f"{label:<22}{t_py:>10.3f}s{t_c:>10.3f}s{t_py / t_c:>9.1f}x"
              f"{agreement:>12.1e}")
    if _midpoint is None:
        print("\ncompiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
