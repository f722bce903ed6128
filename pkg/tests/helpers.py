"""Shared generators for the test suite. Everything is seeded: same seed,
same instances."""

from __future__ import annotations

import random

from gvks import (
    GapInstance,
    GapItem,
    INFEASIBLE,
    Item,
    KnapsackInstance,
)


def integral_gap_instance(
    rng: random.Random,
    n: int,
    k: int,
    d: int,
    cap_max: int = 8,
    val_max: int = 10,
    infeasible_rate: float = 0.1,
) -> GapInstance:
    """Random all-integer instance (integer values keep float sums exact)."""
    caps = tuple(float(rng.randint(0, cap_max)) for _ in range(k))
    lims = tuple(float(rng.randint(0, cap_max)) for _ in range(d))
    items = []
    for i in range(n):
        sizes = tuple(
            INFEASIBLE if rng.random() < infeasible_rate
            else float(rng.randint(0, cap_max))
            for _ in range(k)
        )
        values = tuple(float(rng.randint(0, val_max)) for _ in range(k))
        weights = tuple(float(rng.randint(0, cap_max)) for _ in range(d))
        items.append(GapItem(f"i{i:02d}", sizes, values, weights))
    return GapInstance(tuple(items), caps, lims)


def real_gap_instance(
    rng: random.Random,
    n: int,
    k: int,
    d: int,
    cap_hi: float = 8.0,
    small_bias: float | None = None,
) -> GapInstance:
    """Random real-valued instance. With small_bias set, sizes and weights
    are drawn below small_bias times the budgets, so most items are
    eps-small for eps >= small_bias."""
    caps = tuple(rng.uniform(1.0, cap_hi) for _ in range(k))
    lims = tuple(rng.uniform(1.0, cap_hi) for _ in range(d))
    items = []
    for i in range(n):
        if small_bias is not None:
            sizes = tuple(rng.uniform(0.0, small_bias * caps[j] * 0.95)
                          for j in range(k))
            weights = tuple(rng.uniform(0.0, small_bias * lims[q] * 0.95)
                            for q in range(d))
        else:
            sizes = tuple(INFEASIBLE if rng.random() < 0.08
                          else rng.uniform(0.0, caps[j] * 1.2) for j in range(k))
            weights = tuple(rng.uniform(0.0, lims[q] * 0.8) for q in range(d))
        values = tuple(rng.uniform(0.0, 10.0) for _ in range(k))
        items.append(GapItem(f"i{i:02d}", sizes, values, weights))
    return GapInstance(tuple(items), caps, lims)


def random_feasible_assignment(
    rng: random.Random, instance: GapInstance
) -> dict[str, int]:
    """A feasible (possibly empty) assignment built greedily in random order."""
    k, d = instance.k, instance.d
    loads = [0.0] * k
    wloads = [0.0] * d
    mach: dict[str, int] = {}
    order = list(instance.items)
    rng.shuffle(order)
    for it in order:
        j = rng.randrange(k + 1) - 1
        if j < 0:
            continue
        s = it.sizes[j]
        if s == INFEASIBLE or s != s or loads[j] + s > instance.capacities[j]:
            continue
        if any(wloads[q] + it.weights[q] > instance.weight_limits[q]
               for q in range(d)):
            continue
        loads[j] += s
        mach[it.id] = j
        for q in range(d):
            wloads[q] += it.weights[q]
    return mach


def rand_items(
    rng: random.Random,
    n: int,
    d: int = 1,
    w_lo: float = 0.05,
    w_hi: float = 0.95,
    h_lo: float = 0.05,
    h_hi: float = 0.95,
    weight_hi: float = 0.35,
) -> list[Item]:
    return [
        Item(
            id=f"i{i:02d}",
            width=rng.uniform(w_lo, w_hi),
            height=rng.uniform(h_lo, h_hi),
            profit=rng.uniform(0.1, 1.0),
            weights=tuple(rng.uniform(0.0, weight_hi) for _ in range(d)),
        )
        for i in range(n)
    ]


def rand_knapsack_instance(
    rng: random.Random, n: int, d: int = 1, rotations: bool = False
) -> KnapsackInstance:
    return KnapsackInstance(items=tuple(rand_items(rng, n, d)), d=d,
                            rotations_allowed=rotations)
