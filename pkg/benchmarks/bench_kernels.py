"""Time the compiled and numpy Monte Carlo kernels on the same workloads.

    python benchmarks/bench_kernels.py [--trials N] [--repeat R] [--seed S]

Both backends consume identical random streams, so the counts are also
compared; a mismatch is reported and makes the script exit with status 1.
"""

from __future__ import annotations

import argparse
import sys
import time

from secnet import kernels
from secnet.model import EavesdropperParams, LinkDesign, SystemParams
from secnet.montecarlo import MonteCarloConfig, estimate_end_to_end, estimate_eav_outage, estimate_p_suc

WORKLOADS = {
    "p_suc (d=1, beta=1, lambda=0.1)": lambda cfg, b: estimate_p_suc(
        SystemParams(1, 4, 0.1), LinkDesign(1.0, 1.0), cfg, backend=b
    ),
    "end_to_end (9 hops at the optimum)": lambda cfg, b: estimate_end_to_end(
        SystemParams(3, 4, 0.1), LinkDesign(3.9215536, 1 / 3), cfg, backend=b
    ),
    "eav_outage (lambda_int=1, lambda_eav=0.1)": lambda cfg, b: estimate_eav_outage(
        SystemParams(3, 4, 1.0), EavesdropperParams(0.1, 1.0), cfg, backend=b
    ),
}


def best_time(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args(argv)

    if kernels.BACKEND != "c":
        print("compiled extension not available; build it with `pip install -e . --no-build-isolation`")
        return 1

    cfg = MonteCarloConfig(trials=args.trials, seed=args.seed)
    print(f"{args.trials} trials, best of {args.repeat}")
    print(f"{'workload':44s} {'c [s]':>9s} {'numpy [s]':>10s} {'speedup':>8s}  counts")
    mismatch = False
    for name, fn in WORKLOADS.items():
        tc, rc = best_time(lambda: fn(cfg, "c"), args.repeat)
        tp, rp = best_time(lambda: fn(cfg, "python"), args.repeat)
        same = rc == rp
        mismatch |= not same
        print(f"{name:44s} {tc:9.3f} {tp:10.3f} {tp / tc:7.1f}x  {'identical' if same else 'DIFFER'}")
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
