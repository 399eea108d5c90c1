"""Benchmark: compiled kernel backend against the pure-numpy reference.

Times the three table kernels on workloads shaped like the hot paths
(mode scans batch ~10^2 arguments; the boundary-value oracle batches
~10^3 surface points per assembly), plus one end-to-end oracle matrix
assembly.  Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time

import numpy as np

from plasmonchain._kernels import _ref

try:
    from plasmonchain._kernels import _core
except ImportError:
    _core = None


def best_of(fn, *args, repeats: int = 7, min_time: float = 0.02) -> float:
    """Best per-call time, calls batched until each sample is meaningful."""
    calls = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(calls):
            fn(*args)
        dt = time.perf_counter() - t0
        if dt >= min_time:
            break
        calls *= 4
    best = dt / calls
    for _ in range(repeats - 1):
        t0 = time.perf_counter()
        for _ in range(calls):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / calls)
    return best


def workloads():
    rng = np.random.default_rng(0)

    def z_batch(n):
        return rng.uniform(0.05, 25.0, n) + 1j * rng.uniform(-6.0, 6.0, n)

    t = np.linspace(0.0, np.pi, 1024)
    ct, st = np.cos(t), np.sin(t)
    return [
        ("sph_jn_table  lmax=8  n=128", "sph_jn_table", (8, z_batch(128))),
        ("sph_jn_table  lmax=8  n=4096", "sph_jn_table", (8, z_batch(4096))),
        ("sph_yn_table  lmax=8  n=256", "sph_yn_table", (8, z_batch(256))),
        ("sph_yn_table  lmax=8  n=4096", "sph_yn_table", (8, z_batch(4096))),
        ("legendre      lmax=8  m=0  n=1024", "legendre_pmt_table",
         (8, 0, ct, st)),
        ("legendre      lmax=8  m=4  n=1024", "legendre_pmt_table",
         (8, 4, ct, st)),
    ]


def bench_kernels() -> None:
    print(f"{'workload':<36} {'pure (ms)':>10} {'cython (ms)':>12} {'speedup':>8}")
    for label, name, args in workloads():
        t_ref = best_of(getattr(_ref, name), *args)
        if _core is None:
            print(f"{label:<36} {t_ref * 1e3:>10.3f} {'n/a':>12} {'n/a':>8}")
            continue
        t_core = best_of(getattr(_core, name), *args)
        print(f"{label:<36} {t_ref * 1e3:>10.3f} {t_core * 1e3:>12.3f}"
              f" {t_ref / t_core:>7.1f}x")


def bench_assembly() -> None:
    """End-to-end: one boundary-matrix assembly per backend selection."""
    import importlib
    import os
    import subprocess
    import sys

    code = (
        "import time\n"
        "from plasmonchain.material import DrudeMaterial, Background\n"
        "from plasmonchain.oracle_exact import OracleProblem\n"
        "from plasmonchain.sphere_qnm import SphereGeometry\n"
        "prob = OracleProblem(\n"
        "    spheres=(SphereGeometry(10.0, (0.0, 0.0, 0.0)),\n"
        "             SphereGeometry(10.0, (0.0, 0.0, 40.0))),\n"
        "    material=DrudeMaterial(5.0, 8.9, 0.1),\n"
        "    background=Background(1.0), ell_max=4)\n"
        "prob.assemble(3.35 + 0.05j)  # warm up\n"
        "t0 = time.perf_counter(); prob.assemble(3.35 + 0.05j)\n"
        "print(f'{time.perf_counter() - t0:.4f}')\n"
    )
    for label, env in (("cython", {}), ("pure", {"PLASMONCHAIN_PURE": "1"})):
        out = subprocess.run(
            [sys.executable, "-c", code],
            env={**os.environ, **env},
            capture_output=True, text=True, check=True,
        )
        print(f"dimer matrix assembly ell_max=4 [{label:>6}]: "
              f"{float(out.stdout) * 1e3:8.1f} ms")


if __name__ == "__main__":
    if _core is None:
        print("compiled backend not built; timing reference only\n")
    bench_kernels()
    print()
    bench_assembly()
