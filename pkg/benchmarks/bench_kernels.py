"""Compare the compiled kernels against the pure-Python reference.

    python benchmarks/bench_kernels.py [--repeat 5] [--seed 0]
"""

import argparse
import random
import timeit

import numpy as np

from queuetion import _pykernels as py

try:
    from queuetion import _ckernels as ck
except ImportError:
    ck = None


def _instance(n, rng):
    t = [rng.uniform(0.5, 5) for _ in range(n)]
    w = [rng.uniform(0.5, 10) for _ in range(n)]
    b = [rng.uniform(0, 8) for _ in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    return t, w, b, order


def cases(rng):
    for n in (6, 7, 8):
        t, w, _, _ = _instance(n, rng)
        ta, wa = np.asarray(t), np.asarray(w)
        yield (f"exhaustive_min_waiting N={n}",
               lambda t=t, w=w: py.exhaustive_min_waiting(t, w, 1e-9),
               lambda ta=ta, wa=wa: ck.exhaustive_min_waiting(ta, wa, 1e-9))
    for n in (5, 20, 80):
        t, w, b, order = _instance(n, rng)
        ta, wa, ba, oa = np.asarray(t), np.asarray(w), np.asarray(b), np.asarray(order, dtype=np.int_)
        for kind in (0, 1):
            name = "vcg" if kind == 0 else "gsp"
            yield (f"deviation_gains {name} N={n}",
                   lambda a=(t, w, b, order, kind): py.deviation_gains(*a),
                   lambda a=(ta, wa, ba, oa, kind): ck.deviation_gains(*a))
            yield (f"max_deviation_gain {name} N={n}",
                   lambda a=(t, w, b, order, kind): py.max_deviation_gain(*a),
                   lambda a=(ta, wa, ba, oa, kind): ck.max_deviation_gain(*a))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if ck is None:
        print("compiled kernels not built; nothing to compare")
        return 1
    rng = random.Random(args.seed)
    print(f"{'kernel':<34}{'python (ms)':>12}{'cython (ms)':>13}{'speedup':>9}")
    for name, slow, fast in cases(rng):
        number = max(1, int(0.2 / max(timeit.timeit(slow, number=1), 1e-6)))
        tp = min(timeit.repeat(slow, number=number, repeat=args.repeat)) / number
        tc = min(timeit.repeat(fast, number=number, repeat=args.repeat)) / number
        print(f"{name:<34}{tp * 1e3:>12.3f}{tc * 1e3:>13.4f}{tp / tc:>8.0f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
