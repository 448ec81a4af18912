"""Time the valuation scan with the compiled and the pure-Python kernel.

    python3 benchmarks/bench_scan.py --n1-max 160 --repeat 3
"""

from __future__ import annotations

import argparse
import statistics
import time

from expdioph.search import KERNELS, scan_details


def bench(backend: str, n1_range: range, gap_max: int, z1_max: int, threads: int, repeat: int):
    times = []
    res = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = scan_details(n1_range, gap_max, z1_max, 3, threads=threads, backend=backend)
        times.append(time.perf_counter() - t0)
    return res, min(times), statistics.median(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n1-min", type=int, default=101)
    ap.add_argument("--n1-max", type=int, default=160)
    ap.add_argument("--gap-max", type=int, default=479)
    ap.add_argument("--z1-max", type=int, default=236)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    n1_range = range(args.n1_min, args.n1_max + 1)
    rows = {}
    for backend in sorted(KERNELS):
        res, best, med = bench(backend, n1_range, args.gap_max, args.z1_max, args.threads, args.repeat)
        rows[backend] = (res, best, med)
        print(f"{backend:>7}: {res.cells:>10} cells  best {best:8.3f} s  median {med:8.3f} s  "
              f"{res.cells / best / 1e6:8.2f} Mcells/s  max nu = {res.max_valuation} at {res.witness}")
    if len(rows) == 2:
        (ra, ba, _), (rb, bb, _) = rows["cython"], rows["python"]
        assert (ra.max_valuation, ra.witness) == (rb.max_valuation, rb.witness), "kernels disagree"
        print(f"speedup: {bb / ba:.1f}x")
    else:
        print("compiled kernel not built; only the pure-Python kernel was timed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
