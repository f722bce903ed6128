"""Vector-Max-GAP: items assigned to machines under per-machine size
capacities plus d global weight constraints.

This module holds the problem types and the exact dynamic program for
integral inputs. The DP fills a dense table indexed by the remaining
machine capacities and weight budgets, one layer per item, and recovers
the assignment by re-evaluating the maximum at each state instead of
storing parent pointers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .model import TOL

#: Sentinel size meaning "this item can never go on this machine".
INFEASIBLE = math.inf

DEFAULT_STATE_BUDGET = 10_000_000


class StateBudgetError(RuntimeError):
    """The DP table would exceed the configured state budget."""


@dataclass(frozen=True)
class GapItem:
    """Per-machine sizes and values plus a global weight vector.

    A size of INFEASIBLE forbids the machine outright.
    """

    id: str
    sizes: tuple[float, ...]
    values: tuple[float, ...]
    weights: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "sizes", tuple(float(s) for s in self.sizes))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.sizes) != len(self.values):
            raise ValueError(f"item {self.id!r}: sizes and values disagree on k")
        for s in self.sizes:
            if s < 0.0:
                raise ValueError(f"item {self.id!r}: negative size")
        for v in self.values:
            if v < 0.0 or math.isinf(v):
                raise ValueError(f"item {self.id!r}: values must be finite and >= 0")
        for w in self.weights:
            if w < 0.0 or math.isinf(w):
                raise ValueError(f"item {self.id!r}: weights must be finite and >= 0")


@dataclass(frozen=True)
class GapInstance:
    """An instance (items, capacities M, weight limits W); k and d are derived."""

    items: tuple[GapItem, ...]
    capacities: tuple[float, ...]
    weight_limits: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "capacities", tuple(float(m) for m in self.capacities))
        object.__setattr__(self, "weight_limits",
                           tuple(float(w) for w in self.weight_limits))
        for m in self.capacities:
            if m < 0.0 or math.isinf(m):
                raise ValueError("capacities must be finite and >= 0")
        for w in self.weight_limits:
            if w < 0.0 or math.isinf(w):
                raise ValueError("weight limits must be finite and >= 0")
        seen = set()
        for it in self.items:
            if it.id in seen:
                raise ValueError(f"duplicate item id {it.id!r}")
            seen.add(it.id)
            if len(it.sizes) != self.k:
                raise ValueError(f"item {it.id!r}: expected {self.k} sizes")
            if len(it.weights) != self.d:
                raise ValueError(f"item {it.id!r}: expected {self.d} weights")

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def k(self) -> int:
        return len(self.capacities)

    @property
    def d(self) -> int:
        return len(self.weight_limits)

    def item_map(self) -> dict[str, GapItem]:
        return {it.id: it for it in self.items}


@dataclass(frozen=True)
class GapAssignment:
    """A partial assignment item id -> machine index (0-based)."""

    machine_of: tuple[tuple[str, int], ...]
    total_value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "machine_of",
                           tuple(sorted((str(i), int(j)) for i, j in self.machine_of)))

    def as_dict(self) -> dict[str, int]:
        return dict(self.machine_of)

    @property
    def assigned_ids(self) -> tuple[str, ...]:
        return tuple(i for i, _ in self.machine_of)


EMPTY_ASSIGNMENT = GapAssignment(machine_of=(), total_value=0.0)


def assignment_value(instance: GapInstance, machine_of: Mapping[str, int]) -> float:
    by_id = instance.item_map()
    return sum(by_id[i].values[j] for i, j in machine_of.items())


def assignment_violations(
    instance: GapInstance,
    machine_of: Mapping[str, int],
    capacities: Sequence[float] | None = None,
    weight_limits: Sequence[float] | None = None,
    tol: float = TOL,
) -> list[str]:
    """Size and weight constraint violations of an assignment, as messages.

    Capacities and weight limits default to the instance's own; overriding
    them supports checking against augmented budgets.
    """
    M = instance.capacities if capacities is None else tuple(capacities)
    W = instance.weight_limits if weight_limits is None else tuple(weight_limits)
    by_id = instance.item_map()
    out: list[str] = []
    for i, j in machine_of.items():
        if i not in by_id:
            out.append(f"unknown item {i!r}")
        elif not 0 <= j < instance.k:
            out.append(f"item {i!r} assigned to missing machine {j}")
    if out:
        return out
    loads = [0.0] * instance.k
    for i, j in machine_of.items():
        s = by_id[i].sizes[j]
        if math.isinf(s):
            out.append(f"item {i!r} has infeasible size on machine {j}")
        else:
            loads[j] += s
    for j, load in enumerate(loads):
        if load > M[j] + tol:
            out.append(f"machine {j} load {load:.6g} exceeds capacity {M[j]:.6g}")
    for q in range(instance.d):
        tw = sum(by_id[i].weights[q] for i in machine_of)
        if tw > W[q] + tol:
            out.append(f"weight dim {q} total {tw:.6g} exceeds limit {W[q]:.6g}")
    return out


def is_feasible(
    instance: GapInstance,
    machine_of: Mapping[str, int],
    capacities: Sequence[float] | None = None,
    weight_limits: Sequence[float] | None = None,
    tol: float = TOL,
) -> bool:
    return not assignment_violations(instance, machine_of, capacities,
                                     weight_limits, tol)


@dataclass
class DpStats:
    """Instrumentation for the integral DP."""

    states_visited: int = 0
    table_cells: int = 0


def _as_int(x: float, what: str) -> int:
    if math.isinf(x):
        raise ValueError(f"{what} must be finite")
    r = int(round(x))
    if abs(x - r) > 0.0:
        raise ValueError(f"{what} = {x} is not integral")
    return r


def solve_integral_dp_with_stats(
    instance: GapInstance,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> tuple[GapAssignment, DpStats]:
    """Exact DP for integral sizes, weights, capacities and limits.

    The recurrence over the first t items keeps, for every vector of
    remaining capacities and weight budgets, the best achievable value;
    each item contributes a "skip" branch and one branch per machine with
    positive value there. Ties prefer skipping, then the lowest machine
    index, so the result is deterministic. State count is
    n * prod(M_j + 1) * prod(W_q + 1); exceeding state_budget raises
    StateBudgetError before any table is allocated.

    Items with INFEASIBLE size on a machine simply lose that branch, and
    no item is ever assigned where its value is 0.
    """
    k, d = instance.k, instance.d
    caps = [_as_int(m, f"capacity M[{j}]") for j, m in enumerate(instance.capacities)]
    lims = [_as_int(w, f"weight limit W[{q}]")
            for q, w in enumerate(instance.weight_limits)]
    moves = []
    for it in instance.items:
        sizes = []
        for j, s in enumerate(it.sizes):
            sizes.append(None if math.isinf(s) else _as_int(s, f"size s[{j}]({it.id})"))
        weights = [_as_int(w, f"weight w[{q}]({it.id})")
                   for q, w in enumerate(it.weights)]
        moves.append((it.id, sizes, list(it.values), weights))

    dims = tuple(c + 1 for c in caps) + tuple(w + 1 for w in lims)
    cells = 1
    for size in dims:
        cells *= size
    if max(len(moves), 1) * cells > state_budget:
        raise StateBudgetError(
            f"DP needs {len(moves)} x {cells} states, budget is {state_budget}")
    stats = DpStats(states_visited=len(moves) * cells, table_cells=cells)

    layers = [np.zeros(dims, dtype=np.float64)]
    for _, sizes, values, weights in moves:
        prev = layers[-1]
        cur = prev.copy()
        for j in range(k):
            if values[j] <= 0.0 or sizes[j] is None:
                continue
            shift = [0] * (k + d)
            shift[j] = sizes[j]
            for q in range(d):
                shift[k + q] = weights[q]
            if any(shift[a] >= dims[a] for a in range(k + d)):
                continue
            src = prev[tuple(slice(0, dims[a] - shift[a]) for a in range(k + d))]
            dst = cur[tuple(slice(shift[a], dims[a]) for a in range(k + d))]
            np.maximum(dst, src + values[j], out=dst)
        layers.append(cur)

    # Backtrack by re-evaluating the max; prefer skip, then lowest machine.
    state = tuple(c - 1 for c in dims)
    chosen: list[tuple[str, int]] = []
    for t in range(len(moves), 0, -1):
        here = float(layers[t][state])
        if float(layers[t - 1][state]) == here:
            continue
        item_id, sizes, values, weights = moves[t - 1]
        for j in range(k):
            if values[j] <= 0.0 or sizes[j] is None:
                continue
            nxt = list(state)
            nxt[j] -= sizes[j]
            for q in range(d):
                nxt[k + q] -= weights[q]
            if any(v < 0 for v in nxt):
                continue
            if float(layers[t - 1][tuple(nxt)]) + values[j] == here:
                chosen.append((item_id, j))
                state = tuple(nxt)
                break
        else:  # pragma: no cover - would indicate float non-reproducibility
            raise AssertionError("DP backtracking failed to re-derive the optimum")

    total = float(layers[-1][tuple(c - 1 for c in dims)])
    return GapAssignment(machine_of=tuple(chosen), total_value=total), stats


def solve_integral_dp(
    instance: GapInstance,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> GapAssignment:
    """See solve_integral_dp_with_stats; this drops the instrumentation."""
    assignment, _ = solve_integral_dp_with_stats(instance, state_budget)
    return assignment
