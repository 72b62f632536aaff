"""Compare the compiled and pure-Python kernels on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat N] [--points N]
"""
import argparse
import math
import timeit

import numpy as np

from cqedgate._kernels import _pykernels

try:
    from cqedgate._kernels import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def equilibrium_case(n):
    x = np.linspace(-2 * math.pi, 2 * math.pi, n, endpoint=False)
    y = np.resize(np.linspace(-1.0, 1.0, 7), n)
    return (x, y, 0.17, 5.0, 15.0, 0.9), {}


def propagator_case():
    y0 = [2 * math.pi * -0.536, 1.0, 0.0, 0.99, 0.0, 0.141, 0.0, 0.0, 0.0]
    params = [2 * math.pi * 2.24, 2 * math.pi * -0.0675, 2 * math.pi * -0.00464,
              2 * math.pi * 1e-6, 2 * math.pi * 1e-4, 2 * math.pi * 0.0066, 0.016]
    return (y0, [90.0, 420.0, 90.0], [1, 0, -1], params), {}


def bench(name, fn, args, kw, repeat):
    t = min(timeit.repeat(lambda: fn(*args, **kw), number=1, repeat=repeat))
    return name, t


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=20000)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the Python timings are shown")
    cases = [("solve_equilibrium", *equilibrium_case(args.points)),
             ("evolve_he", *propagator_case())]
    print(f"{'kernel':<20}{'python [s]':>14}{'cython [s]':>14}{'speedup':>10}  max |diff|")
    for name, a, kw in cases:
        py = getattr(_pykernels, name)
        _, t_py = bench(name, py, a, kw, max(1, args.repeat // 2))
        if _ckernels is None:
            print(f"{name:<20}{t_py:>14.4f}")
            continue
        cy = getattr(_ckernels, name)
        _, t_cy = bench(name, cy, a, kw, args.repeat)
        r_py, r_cy = py(*a, **kw), cy(*a, **kw)
        diff = max(float(np.max(np.abs(np.asarray(u, float) - np.asarray(v, float))))
                   for u, v in zip(r_py, r_cy))
        print(f"{name:<20}{t_py:>14.4f}{t_cy:>14.5f}{t_py / t_cy:>10.1f}  {diff:.1e}")


if __name__ == "__main__":
    main()
