"""Micro-benchmark comparing the compiled kernel to the pure-Python engine.

Runs the same seeded trials on each backend and reports pulls per
second plus the speedup.  Because both backends consume the identical
random stream, the work done per trial is exactly the same.

Usage::

    python3 benchmarks/bench_backends.py [--case 1a] [--j 10] [--trials 3]
"""
import argparse
import time

from valucb import catalog_entry, run_trials
from valucb._backend import HAVE_EXTENSION


def bench(backend: str, entry, delta: float, trials: int, seed: int):
    start = time.perf_counter()
    _, records = run_trials("valucb", entry, delta, trials, seed, backend=backend)
    elapsed = time.perf_counter() - start
    pulls = sum(r.tau for r in records)
    return pulls, elapsed


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--case", default="1a")
    parser.add_argument("--j", type=int, default=10)
    parser.add_argument("--delta", type=float, default=0.1)
    parser.add_argument("--trials", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    entry = catalog_entry(args.case, args.j)
    print(
        f"case {args.case} j={args.j}, delta={args.delta}, "
        f"{args.trials} trials, seed {args.seed}"
    )
    print(f"{'backend':<8} {'pulls':>12} {'seconds':>9} {'pulls/s':>12}")

    results = {}
    backends = ["python"] + (["cython"] if HAVE_EXTENSION else [])
    for backend in backends:
        pulls, elapsed = bench(backend, entry, args.delta, args.trials, args.seed)
        results[backend] = (pulls, elapsed)
        print(f"{backend:<8} {pulls:>12} {elapsed:>9.3f} {pulls / elapsed:>12.3e}")

    if "cython" in results:
        py_pulls, py_time = results["python"]
        cy_pulls, cy_time = results["cython"]
        if py_pulls != cy_pulls:
            print("WARNING: backends disagree on total pulls; parity is broken")
            return 1
        print(f"speedup: {py_time / cy_time:.1f}x")
    else:
        print("compiled backend not built; only the pure-Python engine was timed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
