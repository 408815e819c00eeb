"""Compare the pure-Python and compiled kernel backends.

Times the LCS dynamic program and the greedy selection scan on random
instances of growing size, checking agreement as it goes. Run from the
repo root:

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import random
from time import perf_counter

from loopsum._kernels import pure

try:
    from loopsum._kernels import _speed as speed
except ImportError:
    speed = None


def _time(fn, args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = perf_counter()
        fn(*args)
        best = min(best, perf_counter() - t0)
    return best


def bench_lcs(repeats: int) -> None:
    print("\nlcs_length (token ids, equal lengths)")
    print(f"{'length':>8} {'pure':>12} {'speed':>12} {'ratio':>8}")
    rng = random.Random(11)
    for length in (50, 200, 800, 2000):
        a = [rng.randint(0, 500) for _ in range(length)]
        b = [rng.randint(0, 500) for _ in range(length)]
        t_pure = _time(pure.lcs_length, (a, b), repeats)
        if speed is None:
            print(f"{length:>8} {t_pure * 1e3:>10.2f}ms {'-':>12} {'-':>8}")
            continue
        assert pure.lcs_length(a, b) == speed.lcs_length(a, b)
        t_speed = _time(speed.lcs_length, (a, b), repeats)
        print(
            f"{length:>8} {t_pure * 1e3:>10.2f}ms {t_speed * 1e3:>10.2f}ms "
            f"{t_pure / t_speed:>7.1f}x"
        )


def random_greedy_instance(rng, n_sent: int, n_concepts: int):
    costs = [rng.randint(5, 30) for _ in range(n_sent)]
    indptr = [0]
    indices: list[int] = []
    for _ in range(n_sent):
        row = rng.sample(range(n_concepts), 20)
        indices.extend(sorted(row))
        indptr.append(len(indices))
    weights = [rng.uniform(-1, 1) for _ in range(n_concepts)]
    budget = n_sent  # roughly 5% of sentences fit
    return costs, indptr, indices, weights, n_concepts, budget, False


def bench_greedy(repeats: int) -> None:
    print("\ngreedy_select (coverage, 20 concepts per sentence)")
    print(f"{'sentences':>10} {'concepts':>9} {'pure':>12} {'speed':>12} "
          f"{'ratio':>8}")
    rng = random.Random(12)
    for n_sent, n_concepts in ((100, 2000), (500, 10000), (2000, 40000)):
        inst = random_greedy_instance(rng, n_sent, n_concepts)
        t_pure = _time(pure.greedy_select, inst, repeats)
        if speed is None:
            print(f"{n_sent:>10} {n_concepts:>9} {t_pure * 1e3:>10.2f}ms "
                  f"{'-':>12} {'-':>8}")
            continue
        assert pure.greedy_select(*inst) == list(speed.greedy_select(*inst))
        t_speed = _time(speed.greedy_select, inst, repeats)
        print(
            f"{n_sent:>10} {n_concepts:>9} {t_pure * 1e3:>10.2f}ms "
            f"{t_speed * 1e3:>10.2f}ms {t_pure / t_speed:>7.1f}x"
        )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats, best-of (default 5)")
    args = parser.parse_args()
    if speed is None:
        print("compiled backend not importable; timing pure only")
    bench_lcs(args.repeats)
    bench_greedy(args.repeats)


if __name__ == "__main__":
    main()
