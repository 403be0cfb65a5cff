#!/usr/bin/env python3
"""Ground truth at desk scale: exact search vs the greedy baseline.

The exact oracle is an exponential branch-and-bound, guarded to
n <= 12 and m <= 3; it exists so the approximation algorithms can be
judged against true optima rather than against each other.  Graham
list scheduling is the classic (2 - 1/m)-approximate greedy baseline.

The demo samples random DAG instances, compares the one-pass streaming
value A against both, and tallies where each lands.
"""

import numpy as np

import schedsketch as ss


def random_instance(rng):
    n = int(rng.integers(4, 11))
    m = int(rng.integers(2, 4))
    c = int(rng.integers(1, 4))
    inst = ss.random_dag(n=n, h=3, density=0.3, m=m, c=c, seed=int(rng.integers(1 << 30)))
    return inst


def main():
    rng = np.random.default_rng(123)
    rows = []
    for _ in range(40):
        inst = random_instance(rng)
        cstar = ss.exact_makespan(inst)
        greedy = ss.list_schedule(inst).makespan
        rep = ss.stream_unknown(
            inst.events(with_depth=False), ss.AlgoParams(epsilon=0.3, m=inst.m)
        )
        rows.append((cstar, greedy, rep.A, inst.m))

    print(f"{'optimum':>8} {'greedy':>7} {'A':>5} {'greedy/opt':>11} {'A/opt':>7}")
    for cstar, greedy, a, m in rows[:12]:
        print(f"{cstar:>8} {greedy:>7} {a:>5} {greedy / cstar:>11.3f} {a / cstar:>7.3f}")
    print("  ...")

    greedy_worst = max(g / c for c, g, _, _ in rows)
    bound_worst = max((2 - 1 / m) for *_, m in rows)
    a_worst = max(a / c for c, _, a, _ in rows)
    exact_hits = sum(1 for c, g, _, _ in rows if g == c)
    print()
    print(f"greedy matched the optimum in {exact_hits}/40 instances")
    print(f"worst greedy ratio     : {greedy_worst:.3f} (classic bound {bound_worst:.3f})")
    print(f"worst streaming A ratio: {a_worst:.3f}")
    print()
    print("A exceeds the optimum by the per-depth padding; on instances this")
    print("small the padding dominates, which is exactly why the guarantees")
    print("are conditioned on m being small relative to n (see demo 01).")


if __name__ == "__main__":
    main()
