"""Timing comparison for the two kernel lanes (compiled vs pure numpy).

Runs the Legendre table builder and the scattered-point synthesizer in
both lanes and prints a small table. The compiled lane warms up once
before timing so jit compilation is excluded.

Usage: python benchmarks/bench_kernels.py [--lmax 128] [--npts 4096] [--repeat 5]
"""

import argparse
import time

import numpy as np

from qdiff import _accel


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lmax", type=int, default=128)
    ap.add_argument("--npts", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(7)
    x = np.cos(rng.uniform(0.0, np.pi, args.npts))
    colat = np.arccos(x)
    lon = rng.uniform(0.0, 2 * np.pi, args.npts)
    coeffs = rng.standard_normal((args.lmax + 1) ** 2) + 1j * rng.standard_normal(
        (args.lmax + 1) ** 2
    )

    lanes = [("numpy", _accel._legendre_table_py, _accel._synth_points_py)]
    if _accel.HAVE_NUMBA:
        _accel._legendre_table_nb(x[:4], args.lmax)  # warm up the jit
        _accel._synth_points_nb(colat[:4], lon[:4], coeffs, args.lmax)
        lanes.append(("numba", _accel._legendre_table_nb, _accel._synth_points_nb))
    else:
        print("numba unavailable; timing the numpy lane only")

    print(f"lmax={args.lmax} npts={args.npts} repeat={args.repeat} (best of)")
    print(f"{'lane':8s} {'legendre_table':>16s} {'synth_points':>16s}")
    results = {}
    for name, table_fn, synth_fn in lanes:
        t_tab = _time(lambda: table_fn(x, args.lmax), args.repeat)
        t_syn = _time(lambda: synth_fn(colat, lon, coeffs, args.lmax), args.repeat)
        results[name] = (t_tab, t_syn)
        print(f"{name:8s} {t_tab * 1e3:13.2f} ms {t_syn * 1e3:13.2f} ms")
    if "numba" in results:
        st = results["numpy"][0] / results["numba"][0]
        ss = results["numpy"][1] / results["numba"][1]
        print(f"speedup  {st:13.2f} x  {ss:13.2f} x")

    a = _accel._legendre_table_py(x[:64], min(args.lmax, 32))
    if _accel.HAVE_NUMBA:
        b = _accel._legendre_table_nb(x[:64], min(args.lmax, 32))
        print(f"lane agreement (max abs diff): {np.max(np.abs(a - b)):.3e}")


if __name__ == "__main__":
    main()
