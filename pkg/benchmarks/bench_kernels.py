"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--sizes 1000,100000] [--repeat 20]

The rank route calls ``indexed_max_quotient_pair`` once per replicate, so
it dominates study runtime; the other kernels are timed for completeness.
"""

import argparse
import timeit

import numpy as np

from qcorr import kernels


def _cases(n, rng):
    x = 1.0 / rng.standard_exponential(n)
    y = 1.0 / rng.standard_exponential(n)
    z = np.sort(1.0 / rng.standard_exponential(n))
    ix = rng.permutation(n).astype(np.intp)
    iy = rng.permutation(n).astype(np.intp)
    u = 19.5
    return {
        "max_quotient_pair": lambda m: m.max_quotient_pair(x, y),
        "censored_max_quotient_pair": lambda m: m.censored_max_quotient_pair(x, y, u),
        "indexed_max_quotient_pair": lambda m: m.indexed_max_quotient_pair(z, ix, iy, u),
        "co_exceedance_counts": lambda m: m.co_exceedance_counts(x, y, u),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,10000,1000000")
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)

    backends = {"numpy": kernels.get_backend("numpy")}
    try:
        backends["cython"] = kernels.get_backend("cython")
    except ImportError:
        print("compiled backend not built; timing numpy only")

    rng = np.random.default_rng(0)
    print(f"{'kernel':28s} {'n':>8s} " + " ".join(f"{b + ' (us)':>14s}" for b in backends) + "   speedup")
    for n in (int(s) for s in args.sizes.split(",")):
        for name, call in _cases(n, rng).items():
            times = {}
            for b, mod in backends.items():
                call(mod)
                best = min(timeit.repeat(lambda: call(mod), number=1, repeat=args.repeat))
                times[b] = best * 1e6
            speed = f"{times['numpy'] / times['cython']:8.1f}x" if "cython" in times else ""
            print(f"{name:28s} {n:8d} " + " ".join(f"{t:14.1f}" for t in times.values()) + "  " + speed)


if __name__ == "__main__":
    main()
