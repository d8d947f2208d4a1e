"""Time the compiled and pure-Python entropy kernels on the same workloads.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from covchan import _pykernels
from covchan.zoo import family

try:
    from covchan import _ckernels
except ImportError:
    _ckernels = None


def workloads():
    yield "su3-6 p=0.3", family("su3-6", p=0.3)
    yield "su3-8 p=0.5", family("su3-8", p=0.5)
    yield "symmetric-pauli", family("symmetric-pauli", gen="11", q0=0.6, q1=0.3, q2=0.1)


def bench(mod, ch, x0, repeat):
    K, w = np.ascontiguousarray(ch.kraus), np.ascontiguousarray(ch.weights, dtype=float)
    t_eval = min(timeit.repeat(lambda: mod.output_entropy(K, w, x0), number=200, repeat=repeat)) / 200
    t_nm = min(timeit.repeat(lambda: mod.nelder_mead(K, w, x0), number=1, repeat=repeat))
    return t_eval, t_nm


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    mods = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled extension not built; timing the fallback only")
    x0 = np.array([0.4, 1.1, 0.3, 2.0])
    print(f"{'workload':<18}{'backend':<9}{'entropy eval':>14}{'nelder-mead':>14}")
    for name, ch in workloads():
        base = None
        for label, mod in mods:
            te, tn = bench(mod, ch, x0, args.repeat)
            speed = "" if base is None else f"  x{base / tn:.1f}"
            base = base or tn
            print(f"{name:<18}{label:<9}{te * 1e6:>11.1f} us{tn * 1e3:>11.2f} ms{speed}")


if __name__ == "__main__":
    main()
