"""Compare the numba and pure-numpy counting kernels.

    python3 benchmarks/bench_kernels.py --p 5 --r 2 --ell 3 --repeat 5

The first numba call (compilation, or cache load) is timed separately.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from paleycover import _kernels
from paleycover.cospectral import random_odd_permutation
from paleycover.cover import sample_voltage
from paleycover.field import make_field


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--ell", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    F = make_field(args.p, args.r)
    rng = np.random.default_rng(args.seed)
    v = sample_voltage(F, args.ell, rng)
    sq = F.squares
    tr_sq = np.ascontiguousarray(F.trace_products[:, sq])
    volt_sq = np.ascontiguousarray(v.values[sq])
    tp = np.ascontiguousarray(F.trace_products)
    fvals = random_odd_permutation(F, rng)

    cases = {
        "theta_counts": (
            lambda: _kernels.theta_counts_numpy(tr_sq, volt_sq, F.p, args.ell),
            lambda: _kernels.theta_counts_numba(tr_sq, volt_sq, F.p, args.ell),
        ),
        "m_counts": (
            lambda: _kernels.m_counts_numpy(tp, fvals, F.p),
            lambda: _kernels.m_counts_numba(tp, fvals, F.p),
        ),
    }
    print(f"q={F.q} ell={args.ell} numba={'yes' if _kernels.HAVE_NUMBA else 'no'}")
    print(f"{'kernel':<14}{'numpy (s)':>12}{'numba 1st':>12}{'numba (s)':>12}{'speedup':>10}")
    for name, (np_fn, nb_fn) in cases.items():
        t0 = time.perf_counter()
        first = nb_fn()
        t_first = time.perf_counter() - t0
        assert np.array_equal(first, np_fn()), f"{name}: backends disagree"
        t_np = best_of(np_fn, args.repeat)
        t_nb = best_of(nb_fn, args.repeat)
        print(f"{name:<14}{t_np:>12.5f}{t_first:>12.5f}{t_nb:>12.5f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
