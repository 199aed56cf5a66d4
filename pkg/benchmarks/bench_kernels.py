"""Compare the compiled kernels with the numpy fallback.

Run from the repository root::

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is timed on identical inputs for both backends, and the
outputs are checked for bitwise equality before any timing is reported.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from zicdgr import events as ev
from zicdgr._backend import compiled_available, load_backend
from zicdgr.model import OperatingPoint, SplitParams
from zicdgr.regions import HK, MixedCmoHk, MixedParams, finite_constants, kernel_params


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cases():
    op = OperatingPoint(0.2, 0.3, 0.6)
    hk = HK(SplitParams(op, 0.2, 0.4))
    mixed = MixedCmoHk(MixedParams(0.4, 0.5, 0.3, 0.1))
    rng = np.random.Generator(np.random.Philox(key=1))
    n = 200_000
    g = rng.random((3, n)) * 2.0
    x = rng.standard_exponential((1 << 18, 3))
    for name, scheme, code in (("hk", hk, ev.HK), ("mixed", mixed, ev.MIXED)):
        p = kernel_params(op, scheme)
        k = finite_constants(op, scheme, 30.0)
        yield f"highsnr_mask/{name}", lambda be, p=p, c=code: be.highsnr_mask(c, p, 1, g[0], g[1], g[2])
        yield f"g11_threshold/{name}", lambda be, p=p, c=code: be.g11_threshold(c, p, 1, g[1], g[2], 2.5, 52)
        yield f"finite_count/{name}", lambda be, k=k, c=code: be.finite_count(c, k, 1, x)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not compiled_available():
        print("compiled backend not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    fast, slow = load_backend("compiled"), load_backend("python")
    print(f"{'kernel':<24}{'python [ms]':>14}{'compiled [ms]':>16}{'speedup':>10}")
    for name, call in _cases():
        a, b = np.asarray(call(slow)), np.asarray(call(fast))
        if a.shape != b.shape or not np.array_equal(a, b):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        ts = _best(lambda: call(slow), args.repeat)
        tc = _best(lambda: call(fast), args.repeat)
        print(f"{name:<24}{ts * 1e3:>14.2f}{tc * 1e3:>16.2f}{ts / tc:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
