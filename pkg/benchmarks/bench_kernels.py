"""Compare the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the Jacobi eigensolver on a 61x61 covariance built from a random
56x61 binary matrix (the size used when a target is appended to the
bundled corpus), and the squared-distance scan, and checks that both
backends return bit-identical results.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

import numpy as np

from procrec import _pykernels

try:
    from procrec import _ckernels
except ImportError:
    _ckernels = None


def timed(fn, *args, repeat):
    samples = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        samples.append(time.perf_counter() - t0)
    return result, min(samples), statistics.median(samples)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    data = (rng.random((56, 61)) < 0.35).astype(float)
    cov = np.cov(data, rowvar=False)
    cov = (cov + cov.T) / 2
    points = rng.normal(size=(56, 2))
    origin = rng.normal(size=2)

    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled extension not built; timing the fallback only", file=sys.stderr)

    results = {}
    print(f"{'kernel':<20}{'backend':<10}{'min ms':>10}{'median ms':>12}")
    for label, call in (
        ("jacobi 61x61", lambda m: m.jacobi_eigh(cov, 1e-12, 100)),
        ("distances 56x2", lambda m: m.squared_distances(points, origin)),
    ):
        for name, module in backends:
            res, best, med = timed(call, module, repeat=args.repeat)
            results[(label, name)] = (res, best)
            print(f"{label:<20}{name:<10}{best * 1e3:>10.3f}{med * 1e3:>12.3f}")
        if _ckernels is not None:
            slow, fast = results[(label, "python")], results[(label, "cython")]
            same = all(
                np.array_equal(x, y) if isinstance(x, np.ndarray) else x == y
                for x, y in zip(*(r if isinstance(r, tuple) else (r,) for r in (slow[0], fast[0])))
            )
            print(f"{'':<20}speedup {slow[1] / fast[1]:.0f}x, bit-identical: {same}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
