#!/usr/bin/env python3
"""Benchmark the accumulation kernels: compiled extension vs pure Python.

Two views:
  * micro: both kernels on identical synthetic tensor folds, in-process.
  * end-to-end: the full fold (z_poly) in a subprocess per kernel, selected
    via PIZZA_KERNEL, so import-time selection is exercised as shipped.

Usage: python benchmarks/bench_kernel.py [--spec A:6] [--degree 21] [--repeat 3]
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time
from array import array

from coxpizza._kernel import (accumulate_tensor_compiled, accumulate_tensor_pure,
                              pack_exponents)


def synthetic_problem(nslots: int, m: int, arity: int, fanout: int, seed: int):
    rng = random.Random(seed)
    slot_keys, slot_coeffs = [], []
    for _ in range(nslots):
        keys_by_q, coeffs_by_q = [], []
        for q in range(m + 1):
            count = fanout + 2 * q
            keys = [pack_exponents(tuple(rng.randint(0, 6) for _ in range(arity)))
                    for _ in range(count)]
            keys_by_q.append(array("Q", keys))
            coeffs_by_q.append([rng.randint(-10**9, 10**9) for _ in range(count)])
        slot_keys.append(keys_by_q)
        slot_coeffs.append(coeffs_by_q)
    comps, scales = [], []

    def rec(total, parts, prefix):
        if parts == 1:
            comps.append(prefix + (total,))
            scales.append(rng.randint(-10**12, 10**12))
            return
        for first in range(total, -1, -1):
            rec(total - first, parts - 1, prefix + (first,))

    rec(m, nslots, ())
    return slot_keys, slot_coeffs, comps, scales


def bench_micro(repeat: int):
    print("== micro: raw kernel on synthetic folds ==")
    slot_keys, slot_coeffs, comps, scales = synthetic_problem(
        nslots=4, m=10, arity=8, fanout=4, seed=1
    )
    kernels = [("pure", accumulate_tensor_pure)]
    if accumulate_tensor_compiled is not None:
        kernels.append(("cython", accumulate_tensor_compiled))
    timings = {}
    reference = None
    for name, kernel in kernels:
        best = float("inf")
        for _ in range(repeat):
            acc: dict = {}
            start = time.perf_counter()
            kernel(acc, slot_keys, slot_coeffs, comps, scales, 1)
            best = min(best, time.perf_counter() - start)
        timings[name] = best
        if reference is None:
            reference = acc
        elif acc != reference:
            raise AssertionError("kernels disagree on the synthetic fold")
        print(f"  {name:>7}: {best * 1000:9.2f} ms   ({len(acc)} accumulated monomials)")
    if "cython" in timings:
        print(f"  speedup: {timings['pure'] / timings['cython']:.2f}x")
    print()


def bench_end_to_end(spec: str, degree: int, repeat: int):
    print(f"== end-to-end: z_poly({spec}, {degree}) per kernel selection ==")
    code = (
        "import time, sys\n"
        "from coxpizza.rootsys import parse_spec\n"
        "from coxpizza.taylor import z_poly\n"
        "from coxpizza._kernel import KERNEL_IMPLEMENTATION\n"
        f"spec = parse_spec({spec!r})\n"
        "best = float('inf')\n"
        f"for _ in range({repeat}):\n"
        "    t0 = time.perf_counter()\n"
        f"    z = z_poly(spec, {degree})\n"
        "    best = min(best, time.perf_counter() - t0)\n"
        "print(f'{KERNEL_IMPLEMENTATION} {best} {len(z)}')\n"
    )
    results = {}
    for mode in ("cython", "pure"):
        env = dict(os.environ, PIZZA_KERNEL=mode)
        proc = subprocess.run([sys.executable, "-c", code], env=env,
                              capture_output=True, text=True)
        if proc.returncode != 0:
            if mode == "cython":
                print("  cython: unavailable (extension not built)")
                continue
            raise RuntimeError(proc.stderr)
        name, seconds, terms = proc.stdout.split()
        results[name] = float(seconds)
        print(f"  {name:>7}: {float(seconds):8.3f} s   ({terms} fold monomials)")
    if {"cython", "pure"} <= set(results):
        print(f"  speedup: {results['pure'] / results['cython']:.2f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--spec", default="A:6")
    parser.add_argument("--degree", type=int, default=21)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    bench_micro(args.repeat)
    bench_end_to_end(args.spec, args.degree, args.repeat)


if __name__ == "__main__":
    main()
