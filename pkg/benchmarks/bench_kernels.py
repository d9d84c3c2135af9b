"""Compare the compiled and pure-Python Groebner kernels over Z/p.

Each case is a likelihood system whose basis is computed with both kernels;
the bases must agree.  Run ``python3 benchmarks/bench_kernels.py``.
"""

from __future__ import annotations

import argparse
import random
import time

from mldeg.likelihood import likelihood_system, random_data
from mldeg.models import dilated_cube_model, explicit_model, independence_model, scaling_preset
from mldeg.polysolve.multipoly import DEGREVLEX
from mldeg.polysolve.modgb import available_kernels, groebner_modular, use_kernel
from mldeg.polysolve.solve import large_primes, rabinowitsch_system

BINARY_4CYCLE = [
    [1] * 16,
    [0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 1, 1, 1],
    [0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 1],
    [0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 0, 0, 1, 1],
    [0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1, 1],
    [0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1],
]


def cases(full: bool):
    rng = random.Random(7)
    out = [
        ("independence 3x3, C6", independence_model(3, 3).with_scaling(scaling_preset("c6"))),
        ("cube, unit scaling", dilated_cube_model(3, 2)),
        ("cube, random scaling", dilated_cube_model(3, 2).with_scaling(
            [rng.randint(1, 1000) for _ in range(27)])),
    ]
    if full:
        out.append(("binary 4-cycle", explicit_model(BINARY_4CYCLE)))
    return out


def system(M, seed: int = 0):
    S = likelihood_system(M, random_data(M.n, random.Random(seed)))
    gens, _, _ = rabinowitsch_system(S.equations, S.zero_coordinates())
    return gens


def time_kernel(name: str, gens, p: int, repeat: int):
    best = float("inf")
    gb = None
    with use_kernel(name):
        for _ in range(repeat):
            t0 = time.perf_counter()
            gb = groebner_modular(gens, DEGREVLEX, p)
            best = min(best, time.perf_counter() - t0)
    return best, gb


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--full", action="store_true", help="include the binary 4-cycle (slow in Python)")
    args = ap.parse_args(argv)
    p = large_primes(1)[0]
    kernels = available_kernels()
    print(f"kernels: {', '.join(kernels)}")
    print(f"| case | {' | '.join(k + ' [s]' for k in kernels)} | speedup | quotient dim |")
    print("|---|" + "---|" * (len(kernels) + 2))
    for label, M in cases(args.full):
        gens = system(M)
        times, bases = [], []
        for k in kernels:
            t, gb = time_kernel(k, gens, p, args.repeat)
            times.append(t)
            bases.append(gb)
        if len(bases) > 1 and set(bases[0].generators) != set(bases[1].generators):
            raise SystemExit(f"{label}: kernels disagree")
        speed = f"{times[-1] / times[0]:.1f}x" if len(times) > 1 else "-"
        cells = " | ".join(f"{t:.4f}" for t in times)
        print(f"| {label} | {cells} | {speed} | {bases[0].quotient_dimension()} |")


if __name__ == "__main__":
    main()
