"""Compiled vs pure-Python kernel timings.

    python benchmarks/bench_kernel.py            # micro kernels + end to end
    python benchmarks/bench_kernel.py --quick    # fewer repeats, no end to end

Micro timings call both backends in this process.  The end-to-end rows run
``odekit verify`` in a subprocess per backend, selected with ODEKIT_KERNEL.
"""

import argparse
import importlib
import os
import random
import subprocess
import sys
import time
import timeit

from odekit import _kernel_py as PY
from odekit import kernel as K
from odekit import poly as PL

PRIME = (1 << 61) - 1
NAMES = ("x", "y", "P", "Q", "R", "S", "P[0,1]", "Q[1,0]")


def random_poly(rng, terms, deg):
    idx = [PL.REG.index(n) for n in NAMES]
    out = {}
    for _ in range(terms):
        m = sum(rng.randint(0, deg) << (K.SHIFT * i) for i in idx)
        out[m] = rng.randint(-99, 99) or 1
    return out


def cases(rng):
    a, b = random_poly(rng, 60, 4), random_poly(rng, 60, 4)
    big = random_poly(rng, 400, 6)
    prod = PY.p_mul(a, b)
    vals = [rng.randrange(1, PRIME) for _ in range(len(PL.REG) + 8)]
    i = PL.REG.index("y")
    dmap = {PL.REG.index("x"): {0: 1}, i: {1 << (K.SHIFT * PL.REG.index("P")): 1}}
    return {
        "mul 60x60": lambda B: B.p_mul(a, b),
        "add 400+400": lambda B: B.p_add(big, big),
        "divexact": lambda B: B.p_divexact(prod, b),
        "deriv": lambda B: B.p_deriv(big, i),
        "derivation": lambda B: B.p_derivation(big, dmap),
        "eval mod p": lambda B: B.p_eval_mod(big, vals, PRIME),
    }


def micro(repeat, number):
    try:
        CY = importlib.import_module("odekit._kernel")
    except ImportError:
        print("compiled kernel not importable; nothing to compare")
        return
    rng = random.Random(0)
    print(f"{'kernel':<14}{'python ms':>12}{'cython ms':>12}{'speed-up':>10}")
    for name, fn in cases(rng).items():
        assert fn(PY) == fn(CY), name
        t_py = min(timeit.repeat(lambda: fn(PY), repeat=repeat, number=number)) / number
        t_cy = min(timeit.repeat(lambda: fn(CY), repeat=repeat, number=number)) / number
        print(f"{name:<14}{t_py * 1e3:>12.3f}{t_cy * 1e3:>12.3f}{t_py / t_cy:>9.1f}x")


def end_to_end(suite):
    print(f"\nodekit verify --suite {suite}")
    for backend in ("python", "cython"):
        env = dict(os.environ, ODEKIT_KERNEL=backend)
        t0 = time.perf_counter()
        res = subprocess.run([sys.executable, "-m", "odekit.cli", "verify", "--suite", suite],
                             env=env, capture_output=True, text=True)
        dt = time.perf_counter() - t0
        tail = res.stdout.strip().splitlines()[-1] if res.stdout.strip() else res.stderr.strip()
        print(f"  {backend:<7} {dt:7.2f} s   {tail}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--suite", default="all")
    args = ap.parse_args()
    print(f"default backend: {K.BACKEND}")
    micro(repeat=3 if args.quick else 7, number=5 if args.quick else 20)
    if not args.quick:
        end_to_end(args.suite)


if __name__ == "__main__":
    main()
