"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--sizes 32x200 128x200 400x1000]

Each size is ``(N + 1) x Nx``.  Reported numbers are the best of ``repeat``
runs, in milliseconds per call, plus the speedup of the compiled path.
"""
import argparse
import sys
import timeit

import numpy as np

from weylherm import _fallback

try:
    from weylherm import _kernels
except ImportError:
    _kernels = None


def _inputs(n, nx, seed=0):
    rng = np.random.default_rng(seed)
    R = rng.normal(size=(n, nx)) + 1j * rng.normal(size=(n, nx))
    E = rng.normal(size=nx)
    blocks = rng.normal(size=(nx, (n + 1) // 2, n // 2))
    weight = rng.normal(size=nx)
    return np.ascontiguousarray(R), E, blocks, weight


def _cases(mod, n, nx):
    R, E, blocks, weight = _inputs(n, nx)
    out = np.empty_like(R)
    return {
        "advect": lambda: mod.advect(R, E, 0.05, False, out),
        "full_coupling": lambda: mod.add_full_coupling(blocks, R, out, -1j),
        "band_coupling": lambda: mod.add_band_coupling(weight, R, out, -1j),
    }


def best_ms(fn, repeat):
    number = max(1, int(0.05 / max(timeit.timeit(fn, number=1), 1e-7)))
    return 1e3 * min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", nargs="*", default=["21x100", "129x200", "129x1000", "401x1000"])
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the fallback is available", file=sys.stderr)
    print(f"{'size':>10s} {'kernel':>14s} {'numpy ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for size in args.sizes:
        n, nx = (int(v) for v in size.lower().split("x"))
        py = _cases(_fallback, n, nx)
        cy = _cases(_kernels, n, nx) if _kernels else {}
        for name, fn in py.items():
            t_py = best_ms(fn, args.repeat)
            if name in cy:
                t_cy = best_ms(cy[name], args.repeat)
                print(f"{size:>10s} {name:>14s} {t_py:10.3f} {t_cy:10.3f} {t_py / t_cy:7.1f}x")
            else:
                print(f"{size:>10s} {name:>14s} {t_py:10.3f} {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
