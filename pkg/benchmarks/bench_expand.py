"""Benchmark the continued-fraction quotient kernels.

Compares the compiled (Cython) Lehmer kernel, the pure-Python Lehmer twin
and the schoolbook Euclidean loop on random rationals at several digit
scales, and verifies all kernels agree on every input.

Usage: python benchmarks/bench_expand.py [--scales 1000,10000,100000]
"""

import argparse
import random
import time
from fractions import Fraction

from cflab import _euclid_py
from cflab.contfrac import _KERNELS, available_kernels


def random_pair(rng: random.Random, digits: int) -> tuple[int, int]:
    return (
        rng.randrange(10 ** (digits - 1), 10**digits),
        rng.randrange(10 ** (digits - 1), 10**digits),
    )


def bench(scales: list[int], repeats: int = 3) -> None:
    kernels = dict(_KERNELS)
    kernels["schoolbook"] = _euclid_py.schoolbook_cf
    print(f"available kernels: {', '.join(available_kernels())}")
    header = f"{'digits':>8} | " + " | ".join(f"{k:>12}" for k in kernels)
    print(header)
    print("-" * len(header))
    for digits in scales:
        rng = random.Random(digits)
        pairs = [random_pair(rng, digits) for _ in range(repeats)]
        times = {}
        results = {}
        for name, kernel in kernels.items():
            if name == "schoolbook" and digits > 20_000:
                times[name] = None  # quadratic loop; too slow to be useful
                continue
            start = time.perf_counter()
            results[name] = [kernel(p, q) for p, q in pairs]
            times[name] = (time.perf_counter() - start) / repeats
        reference = next(iter(results.values()))
        for name, got in results.items():
            assert got == reference, f"kernel {name} disagrees at {digits} digits"
        row = f"{digits:>8} | " + " | ".join(
            f"{times[k] * 1000:>10.1f}ms" if times[k] is not None else f"{'skipped':>12}"
            for k in kernels
        )
        print(row)
    print("all kernels agree on every benchmarked input")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--scales",
        default="1000,10000,100000",
        help="comma-separated digit counts",
    )
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    scales = [int(s) for s in args.scales.split(",")]
    bench(scales, repeats=args.repeats)


if __name__ == "__main__":
    main()
