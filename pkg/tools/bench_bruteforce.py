#!/usr/bin/env python3
"""
Simple benchmark for the brute-force stopping-set enumerator.

Usage:
  python tools/bench_bruteforce.py --m 4 --workers 1 2 4 --repeat 5

Runs the enumeration `repeat` times per worker count and prints the median
and tail wall times, plus subsets per second.
"""
import argparse
import statistics
import time

from stopset.enumerators import brute_force_stopping
from stopset.gf2 import hamming_parity_matrix


def run(m, workers, repeat):
    matrix = hamming_parity_matrix(m)
    timings = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = brute_force_stopping(matrix, workers=workers)
        timings.append(time.perf_counter() - t0)
    subsets = 2 ** matrix.cols
    p50 = statistics.median(timings)
    print(f"m={m} workers={workers}: p50 {p50:.3f}s  max {max(timings):.3f}s  "
          f"{subsets / p50:,.0f} subsets/s")
    if len(timings) >= 2:
        p95 = statistics.quantiles(timings, n=100)[94]
        print(f"  p95 {p95:.3f}s over {repeat} runs")
    return result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--m", type=int, default=4)
    parser.add_argument("--workers", type=int, nargs="+", default=[1])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    reference = None
    for workers in args.workers:
        result = run(args.m, workers, args.repeat)
        if reference is None:
            reference = result
        elif result != reference:
            print(f"MISMATCH: workers={workers} differs from workers={args.workers[0]}")

if __name__ == "__main__":
    main()
