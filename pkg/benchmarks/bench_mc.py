#!/usr/bin/env python3
"""Benchmark the Monte Carlo engines: compiled trial kernel vs numpy fallback.

Usage: python benchmarks/bench_mc.py [--trials 100000] [--seed 42]
"""

import argparse
import time

from gaussmeter import (
    ArthursKelly,
    EnsembleSpec,
    Heterodyne,
    Homodyne,
    ModifiedAK,
    Sequential,
    TrialConfig,
    compiled_available,
    empirical_distances,
    optimal_widths,
    squeezed_coherent_thermal,
)

SCHEMES = [
    ("homodyne", Homodyne()),
    ("heterodyne", Heterodyne()),
    ("sequential", Sequential(optimal_widths("sequential").meter())),
    ("arthurs_kelly", ArthursKelly(optimal_widths("arthurs_kelly").meter())),
    ("modified_ak", ModifiedAK(optimal_widths("modified_ak", 0.6).meter(), kappa=0.6)),
]


def run(engine, scheme, ens, trials, seed):
    cfg = TrialConfig(scheme, ens, trials, seed)
    start = time.perf_counter()
    report = empirical_distances(cfg, engine=engine)
    return time.perf_counter() - start, report


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--N", type=int, default=20)
    args = parser.parse_args()

    engines = ["python"] + (["compiled"] if compiled_available() else [])
    if len(engines) == 1:
        print("note: compiled kernel not built; benchmarking the numpy engine only")

    ens = EnsembleSpec(args.N, squeezed_coherent_thermal(q0=0.7, p0=-0.3, r=0.5, nbar=0.4))
    header = f"{'scheme':<14}" + "".join(f"{e + ' [s]':>14}" for e in engines)
    if len(engines) == 2:
        header += f"{'speedup':>10}"
    print(f"trials per run: {args.trials}, ensemble size: {args.N}")
    print(header)
    print("-" * len(header))
    totals = dict.fromkeys(engines, 0.0)
    for name, scheme in SCHEMES:
        times = {}
        for engine in engines:
            times[engine], report = run(engine, scheme, ens, args.trials, args.seed)
            totals[engine] += times[engine]
        line = f"{name:<14}" + "".join(f"{times[e]:>14.3f}" for e in engines)
        if len(engines) == 2:
            line += f"{times['python'] / times['compiled']:>9.1f}x"
        print(line)
    line = f"{'total':<14}" + "".join(f"{totals[e]:>14.3f}" for e in engines)
    if len(engines) == 2:
        line += f"{totals['python'] / totals['compiled']:>9.1f}x"
    print(line)


if __name__ == "__main__":
    main()
