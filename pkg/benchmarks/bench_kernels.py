"""Time the numba kernels against their numpy fallbacks.

Run: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from spanstruct import _kernels as K
from spanstruct.setops import additive_energy
from spanstruct.group import GSet


def cases(rng):
    # powers of 3 form a dissociated set, so the zero search scans every index
    diss = np.array([[3**i] for i in range(12)], dtype=np.int64)
    box = rng.integers(-1000, 1000, size=(12, 2)).astype(np.int64)
    keys = rng.integers(0, 5000, size=2_000_000).astype(np.int64)
    unb1, unb2 = np.zeros(1, dtype=np.int64), np.zeros(2, dtype=np.int64)
    return [
        ("signed_sums k=12 d=2", "signed_sums", (box, unb2)),
        ("first_zero k=12 (none)", "first_zero_combination", (diss, unb1)),
        ("first_zero k=14 (early)", "first_zero_combination", (np.arange(1, 15, dtype=np.int64)[:, None], unb1)),
        ("run_lengths 2e6 keys", "sorted_run_lengths", (keys,)),
    ]


def best(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if K.signed_sums_numba is None:
        raise SystemExit("numba unavailable (or SPANSTRUCT_NO_NUMBA=1); nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':26s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for label, name, a in cases(rng):
        f_np = getattr(K, name + "_numpy")
        f_nb = getattr(K, name + "_numba")
        r_np, r_nb = f_np(*a), f_nb(*a)
        assert np.array_equal(np.asarray(r_np), np.asarray(r_nb)), label
        t_np, t_nb = best(f_np, a, args.repeat), best(f_nb, a, args.repeat)
        print(f"{label:26s} {t_np * 1e3:11.2f} {t_nb * 1e3:11.2f} {t_np / t_nb:8.1f}x")
    A = GSet.of(rng.choice(10**6, size=2000, replace=False))
    t = best(lambda: additive_energy(A), (), args.repeat)
    print(f"additive_energy |A|=2000 (active backend): {t * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
