"""PTAS for Vector-Max-GAP.

The pipeline: round sizes and weights onto coarse grids so the exact DP
runs in polynomial time (the optimum survives, feasibility degrades to
(1+eps)-augmented budgets), repair the augmented solution by trimming
low-profit interval sets, and wrap both in an enumeration of all small
"big item" sets X with their machine partitions. The best candidate over
all iterations is a (1-(2d+3)eps)-approximation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Hashable, Sequence

from .gap import (
    DEFAULT_STATE_BUDGET,
    EMPTY_ASSIGNMENT,
    GapAssignment,
    GapInstance,
    GapItem,
    INFEASIBLE,
    solve_integral_dp,
)
from .model import TOL

TrimEntry = tuple[Hashable, float, float]  # (key, size, profit)


@dataclass(frozen=True)
class RoundingScheme:
    """Granularities for machine sizes (mu, one per machine) and weights (delta)."""

    mu: tuple[float, ...]
    delta: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", tuple(float(x) for x in self.mu))
        object.__setattr__(self, "delta", tuple(float(x) for x in self.delta))

    @staticmethod
    def default_for(instance: GapInstance, eps: float) -> "RoundingScheme":
        """mu_j = eps*M_j/n and delta_q = eps*W_q/n."""
        n = max(instance.n, 1)
        return RoundingScheme(
            mu=tuple(eps * m / n for m in instance.capacities),
            delta=tuple(eps * w / n for w in instance.weight_limits),
        )


def round_instance(instance: GapInstance, scheme: RoundingScheme) -> GapInstance:
    """Round sizes/weights up and budgets down (plus n slack) onto the scheme's grids.

    s' = ceil(s/mu), M' = floor(M/mu) + n, w' = ceil(w/delta),
    W' = floor(W/delta) + n. Infeasible sizes stay infeasible; values and
    ids are untouched. Any feasible set remains feasible after rounding,
    and any rounded-feasible set fits the (M + n*mu, W + n*delta) budgets.
    """
    if len(scheme.mu) != instance.k or len(scheme.delta) != instance.d:
        raise ValueError("scheme shape does not match the instance")
    if any(g <= 0.0 for g in scheme.mu) or any(g <= 0.0 for g in scheme.delta):
        raise ValueError("granularities must be positive")
    n = instance.n
    items = tuple(
        GapItem(
            id=it.id,
            sizes=tuple(
                INFEASIBLE if math.isinf(s) else float(math.ceil(s / scheme.mu[j]))
                for j, s in enumerate(it.sizes)
            ),
            values=it.values,
            weights=tuple(
                float(math.ceil(w / scheme.delta[q])) for q, w in enumerate(it.weights)
            ),
        )
        for it in instance.items
    )
    caps = tuple(float(math.floor(m / scheme.mu[j]) + n)
                 for j, m in enumerate(instance.capacities))
    lims = tuple(float(math.floor(w / scheme.delta[q]) + n)
                 for q, w in enumerate(instance.weight_limits))
    return GapInstance(items=items, capacities=caps, weight_limits=lims)


def assign_res_aug(
    instance: GapInstance,
    eps: float,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> GapAssignment:
    """Optimal assignment under (1+eps)-augmented budgets, at least the
    true unaugmented optimum in value.

    Rounds with the default scheme and solves the integral DP exactly.
    Zero-capacity machines and zero weight budgets take the limiting
    encoding: only zero-size (zero-weight) items stay assignable there.
    The DP table is clipped to the loads actually reachable, which never
    changes the answer.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps = {eps} not in (0, 1)")
    n = instance.n
    if n == 0:
        return EMPTY_ASSIGNMENT
    k, d = instance.k, instance.d
    M, W = instance.capacities, instance.weight_limits

    caps = [float(math.floor(n / eps) + n) if M[j] > 0.0 else float(n)
            for j in range(k)]
    lims = [float(math.floor(n / eps) + n) if W[q] > 0.0 else float(n)
            for q in range(d)]
    # floor(M_j / mu_j) = floor(n/eps) exactly, since mu_j = eps*M_j/n

    items: list[GapItem] = []
    for it in instance.items:
        sizes = []
        for j in range(k):
            s = it.sizes[j]
            if math.isinf(s):
                sizes.append(INFEASIBLE)
            elif M[j] > 0.0:
                sizes.append(float(math.ceil(s * n / (eps * M[j]))))
            else:
                sizes.append(0.0 if s == 0.0 else INFEASIBLE)
        weights = []
        for q in range(d):
            w = it.weights[q]
            if W[q] > 0.0:
                weights.append(float(math.ceil(w * n / (eps * W[q]))))
            else:
                # a positive weight against a zero budget blocks the item
                weights.append(0.0 if w == 0.0 else lims[q] + 1.0)
        items.append(GapItem(id=it.id, sizes=tuple(sizes), values=it.values,
                             weights=tuple(weights)))

    # Clip each budget axis to the total load the items could ever put on it.
    usable = [it for it in items
              if all(it.weights[q] <= lims[q] for q in range(d))
              and any(v > 0.0 and not math.isinf(it.sizes[j]) and it.sizes[j] <= caps[j]
                      for j, v in enumerate(it.values))]
    for j in range(k):
        reach = sum(it.sizes[j] for it in usable
                    if not math.isinf(it.sizes[j]) and it.values[j] > 0.0)
        caps[j] = min(caps[j], reach)
    for q in range(d):
        lims[q] = min(lims[q], sum(it.weights[q] for it in usable))

    rounded = GapInstance(items=tuple(items), capacities=tuple(caps),
                          weight_limits=tuple(lims))
    return solve_integral_dp(rounded, state_budget=state_budget)


def trim(
    entries: Sequence[TrimEntry],
    eps: float,
    delta: float,
    tol: float = TOL,
) -> tuple[list[TrimEntry], list[TrimEntry]]:
    """Remove a cheap interval-intersecting set so the rest fits in length 1.

    Entries are (key, size, profit) with every size in (0, eps] and total
    size at most 1 + delta. The entries are laid out contiguously in a bin
    of length 1 + delta; floor(1/(delta+eps)) + 1 disjoint candidate
    windows of length delta are marked, the last one flush with the end of
    the bin, and the cheapest window's intersecting set is removed. The
    kept sizes then sum to at most 1 and the removed profit is below
    (delta + eps) times the total. Returns (removed, kept) in input order.
    """
    if eps <= 0.0 or delta <= 0.0:
        raise ValueError("eps and delta must be positive")
    entries = list(entries)
    total = 0.0
    for key, size, _ in entries:
        if size <= 0.0 or size > eps + tol:
            raise ValueError(f"entry {key!r}: size {size} outside (0, {eps}]")
        total += size
    if total > 1.0 + delta + tol:
        raise ValueError(f"total size {total} exceeds 1 + delta = {1.0 + delta}")
    if not entries:
        return [], []

    width = delta + eps
    count = math.floor(1.0 / width)
    while count > 0 and count * width > 1.0:
        count -= 1
    starts = [i * width for i in range(count)] + [1.0]

    profits = [0.0] * len(starts)
    sizes_in = [0] * len(starts)
    member = [-1] * len(entries)
    cursor = 0.0
    for pos, (_, size, profit) in enumerate(entries):
        lo, hi = cursor, cursor + size
        cursor = hi
        for w, s in enumerate(starts):
            # strict comparisons: edge contact does not count, so each entry
            # lands in at most one window
            if lo < s + delta and hi > s:
                member[pos] = w
                profits[w] += profit
                sizes_in[w] += 1
                break

    target = min(range(len(starts)), key=lambda w: (profits[w], sizes_in[w], w))
    removed = [entries[pos] for pos in range(len(entries)) if member[pos] == target]
    kept = [entries[pos] for pos in range(len(entries)) if member[pos] != target]
    return removed, kept


def trim_small_solution(
    assignment: GapAssignment,
    instance: GapInstance,
    eps: float,
) -> GapAssignment:
    """Repair an assignment feasible for (1+eps)-augmented budgets so it
    fits the instance's own budgets, losing < 2(d+1)*eps of its value.

    Every assigned item must be eps-small: size at most eps*M_j on its
    machine and weight at most eps*W_q in every dimension. Trimming runs
    once per machine on normalized sizes, then once per weight dimension
    on the surviving set.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps = {eps} not in (0, 1)")
    k, d = instance.k, instance.d
    M, W = instance.capacities, instance.weight_limits
    by_id = instance.item_map()
    mach = assignment.as_dict()
    for i in mach:
        if i not in by_id:
            raise ValueError(f"assignment references unknown item {i!r}")

    # zero-value assignments carry nothing and only consume budget
    mach = {i: j for i, j in mach.items() if by_id[i].values[j] > 0.0}

    norm_size: dict[str, float] = {}
    norm_weight: dict[str, tuple[float, ...]] = {}
    for i, j in mach.items():
        it = by_id[i]
        s = it.sizes[j]
        if M[j] > 0.0:
            ns = s / M[j]
        elif s == 0.0:
            ns = 0.0
        else:
            raise ValueError(f"item {i!r} has positive size on zero-capacity machine {j}")
        if ns > eps + TOL:
            raise ValueError(f"item {i!r} is not eps-small on machine {j}")
        nw = []
        for q in range(d):
            w = it.weights[q]
            if W[q] > 0.0:
                x = w / W[q]
            elif w == 0.0:
                x = 0.0
            else:
                raise ValueError(f"item {i!r} has positive weight in zero-budget dim {q}")
            if x > eps + TOL:
                raise ValueError(f"item {i!r} is not eps-small in weight dim {q}")
            nw.append(x)
        norm_size[i] = ns
        norm_weight[i] = tuple(nw)

    for j in range(k):
        load = sum(norm_size[i] for i in mach if mach[i] == j)
        if load > 1.0 + eps + TOL:
            raise ValueError(f"machine {j} exceeds even the augmented capacity")
    for q in range(d):
        load = sum(norm_weight[i][q] for i in mach)
        if load > 1.0 + eps + TOL:
            raise ValueError(f"weight dim {q} exceeds even the augmented budget")

    for j in range(k):
        entries = [(i, norm_size[i], by_id[i].values[j])
                   for i in sorted(mach) if mach[i] == j and norm_size[i] > 0.0]
        if not entries:
            continue
        removed, _ = trim(entries, eps, eps)
        for key, _, _ in removed:
            del mach[key]

    for q in range(d):
        entries = [(i, norm_weight[i][q], by_id[i].values[mach[i]])
                   for i in sorted(mach) if norm_weight[i][q] > 0.0]
        if not entries:
            continue
        removed, _ = trim(entries, eps, eps)
        for key, _, _ in removed:
            del mach[key]

    value = sum(by_id[i].values[j] for i, j in mach.items())
    return GapAssignment(machine_of=tuple(mach.items()), total_value=value)


def structural_decompose(
    assignment: GapAssignment,
    instance: GapInstance,
    eps: float,
) -> tuple[set[str], set[str], set[str]]:
    """Partition an assigned set into (X, Y, Z): few big items X, cheap
    items Y with value at most eps * val(J), and Z small relative to the
    residual budgets after X.

    Built in rounds: round t collects the items still big against the
    budgets left after earlier rounds; the first cheap round becomes Y and
    everything before it becomes X. |X| <= (d+k)/eps^2 and the number of
    rounds is at most ceil(1/eps) because the rounds are disjoint.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    k, d = instance.k, instance.d
    M, W = instance.capacities, instance.weight_limits
    by_id = instance.item_map()
    mach = assignment.as_dict()
    val_total = sum(by_id[i].values[j] for i, j in mach.items())

    J = set(mach)
    union: set[str] = set()
    while True:
        res_m = [M[j] - sum(by_id[i].sizes[j] for i in union if mach[i] == j)
                 for j in range(k)]
        res_w = [W[q] - sum(by_id[i].weights[q] for i in union) for q in range(d)]
        round_set: set[str] = set()
        for i in J - union:
            j = mach[i]
            if by_id[i].sizes[j] > eps * res_m[j]:
                round_set.add(i)
                continue
            if any(by_id[i].weights[q] > eps * res_w[q] for q in range(d)):
                round_set.add(i)
        round_val = sum(by_id[i].values[mach[i]] for i in round_set)
        if round_val <= eps * val_total:
            return set(union), round_set, J - union - round_set
        union |= round_set


def x_enumeration_bound(d: int, k: int, eps: float) -> int:
    """Size bound (d+k)/eps^2 on the enumerated big-item sets."""
    return math.floor((d + k) / (eps * eps) + 1e-9)


def vmg_ptas(
    instance: GapInstance,
    eps: float,
    x_max: int | None = None,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> GapAssignment:
    """(1-(2d+3)eps)-approximation for Vector-Max-GAP.

    Enumerates candidate big-item sets X (by increasing size, then
    lexicographic id order) and their machine partitions (machine-index
    order). For each, the residual instance keeps only items that are
    eps-small against the residual budgets, is solved under resource
    augmentation, and repaired by trimming. The best candidate wins;
    ties keep the earliest, so the output is deterministic.

    x_max caps |X|. The proven guarantee needs x_max to reach
    x_enumeration_bound(d, k, eps) (the default); smaller caps trade the
    guarantee for speed. Items with zero value everywhere are dropped up
    front.
    """
    k, d = instance.k, instance.d
    if k == 0:
        return EMPTY_ASSIGNMENT
    if not 0.0 < eps < 1.0 / (2 * d + 3):
        raise ValueError(f"eps = {eps} not in (0, 1/(2d+3)) for d = {d}")

    items = sorted((it for it in instance.items if any(v > 0.0 for v in it.values)),
                   key=lambda it: it.id)
    n = len(items)
    bound = x_enumeration_bound(d, k, eps)
    cap = bound if x_max is None else min(x_max, bound)
    cap = min(cap, n)

    M, W = instance.capacities, instance.weight_limits
    sizes = [it.sizes for it in items]
    values = [it.values for it in items]
    weights = [it.weights for it in items]

    best_val = 0.0
    best_map: dict[str, int] = {}

    for t in range(cap + 1):
        for X in itertools.combinations(range(n), t):
            in_x = set(X)
            for part in itertools.product(range(k), repeat=t):
                res_m = list(M)
                res_w = list(W)
                val_x = 0.0
                feasible = True
                for pos, i in enumerate(X):
                    j = part[pos]
                    s = sizes[i][j]
                    if math.isinf(s):
                        feasible = False
                        break
                    res_m[j] -= s
                    val_x += values[i][j]
                if not feasible:
                    continue
                for i in X:
                    wv = weights[i]
                    for q in range(d):
                        res_w[q] -= wv[q]
                if any(m < -TOL for m in res_m) or any(w < -TOL for w in res_w):
                    continue
                for j in range(k):
                    if res_m[j] < 0.0:
                        res_m[j] = 0.0
                for q in range(d):
                    if res_w[q] < 0.0:
                        res_w[q] = 0.0

                # eps-small residual instance: zero the value of any
                # (item, machine) pair that is too big for the residual
                # capacity, and drop items too heavy for the residual
                # weight budget entirely
                eligible: list[tuple[int, tuple[float, ...]]] = []
                for i in range(n):
                    if i in in_x:
                        continue
                    wv = weights[i]
                    if any(wv[q] > eps * res_w[q] for q in range(d)):
                        continue
                    capped = tuple(
                        values[i][j]
                        if (not math.isinf(sizes[i][j])
                            and sizes[i][j] <= eps * res_m[j])
                        else 0.0
                        for j in range(k)
                    )
                    if any(v > 0.0 for v in capped):
                        eligible.append((i, capped))

                if eligible:
                    sub = GapInstance(
                        items=tuple(
                            GapItem(id=items[i].id, sizes=sizes[i], values=capped,
                                    weights=weights[i])
                            for i, capped in eligible
                        ),
                        capacities=tuple(res_m),
                        weight_limits=tuple(res_w),
                    )
                    augmented = assign_res_aug(sub, eps, state_budget=state_budget)
                    repaired = trim_small_solution(augmented, sub, eps)
                    cand_val = val_x + repaired.total_value
                    cand_map = {items[i].id: part[pos] for pos, i in enumerate(X)}
                    cand_map.update(repaired.as_dict())
                else:
                    cand_val = val_x
                    cand_map = {items[i].id: part[pos] for pos, i in enumerate(X)}

                if cand_val > best_val:
                    best_val = cand_val
                    best_map = cand_map

    return GapAssignment(machine_of=tuple(best_map.items()), total_value=best_val)
