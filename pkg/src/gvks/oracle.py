"""Exponential-time exact solvers: ground truth for the approximation
guarantees at desk scale. All of them refuse oversized inputs instead of
silently degrading."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .containers import ContainerPackingInstance
from .gap import GapAssignment, GapInstance
from .model import TOL, Item, KnapsackInstance, Packing, Placement, rects_overlap
from .nfdh import nfdh_pack


@dataclass(frozen=True)
class OracleBudget:
    """Hard limits: item count, enumeration states (rows or search nodes),
    and an optional wall-clock timeout in seconds."""

    max_items: int = 12
    max_states: int = 2_000_000
    timeout: float | None = None


class OracleBudgetError(RuntimeError):
    """The instance exceeds the oracle's budget."""


DEFAULT_BUDGET = OracleBudget()


def _enumeration(n: int, k: int, budget: OracleBudget) -> np.ndarray:
    """All (k+1)^n assignment vectors, 0 = unassigned, in lexicographic order."""
    if n > budget.max_items:
        raise OracleBudgetError(f"{n} items exceed the budget of {budget.max_items}")
    rows = (k + 1) ** n
    if rows > budget.max_states:
        raise OracleBudgetError(f"{rows} assignments exceed the state budget")
    place = (k + 1) ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((np.arange(rows, dtype=np.int64)[:, None] // place) % (k + 1)).astype(
        np.int16)


def exact_vmg(
    instance: GapInstance,
    budget: OracleBudget = DEFAULT_BUDGET,
) -> GapAssignment:
    """Optimal Vector-Max-GAP by enumerating every assignment vector.

    Ties break toward the lexicographically smallest vector (unassigned
    sorts first), so the result is deterministic.
    """
    n, k, d = instance.n, instance.k, instance.d
    A = _enumeration(n, k, budget)
    rows = A.shape[0]
    feasible = np.ones(rows, dtype=bool)
    value = np.zeros(rows, dtype=np.float64)
    for j in range(k):
        mask = A == j + 1
        sizes = np.array([it.sizes[j] for it in instance.items], dtype=np.float64)
        load = np.where(mask, sizes, 0.0).sum(axis=1) if n else np.zeros(rows)
        feasible &= load <= instance.capacities[j] + TOL
        vals = np.array([it.values[j] for it in instance.items], dtype=np.float64)
        value += np.where(mask, vals, 0.0).sum(axis=1) if n else 0.0
    assigned = A > 0
    for q in range(d):
        weights = np.array([it.weights[q] for it in instance.items], dtype=np.float64)
        tw = np.where(assigned, weights, 0.0).sum(axis=1) if n else np.zeros(rows)
        feasible &= tw <= instance.weight_limits[q] + TOL
    value = np.where(feasible, value, -np.inf)
    best = int(np.argmax(value))
    row = A[best]
    machine_of = tuple((instance.items[i].id, int(row[i]) - 1)
                       for i in range(n) if row[i] > 0)
    return GapAssignment(machine_of=machine_of, total_value=float(value[best]))


def exact_container_packing(
    cp: ContainerPackingInstance,
    budget: OracleBudget = DEFAULT_BUDGET,
) -> float:
    """Optimal container-packing profit by direct enumeration.

    Checks the four constraint families on every item-to-container
    assignment: at most one item per large container, height sums in wide
    containers, width sums in tall containers, area sums against
    (1-eps')^2 of the container area with only eps'-small items admitted,
    plus the global unit weight budget per dimension. Implemented straight
    from those rules, independently of the GAP reduction.
    """
    items = cp.items
    n, k = len(items), len(cp.containers)
    if n == 0 or k == 0:
        return 0.0
    A = _enumeration(n, k, budget)
    rows = A.shape[0]
    feasible = np.ones(rows, dtype=bool)

    for j, c in enumerate(cp.containers):
        consumed = np.empty(n, dtype=np.float64)
        for i, it in enumerate(items):
            plain = (it.width <= c.width + TOL and it.height <= c.height + TOL)
            rot = cp.rotations_allowed and (it.height <= c.width + TOL
                                            and it.width <= c.height + TOL)
            if c.kind == "large":
                consumed[i] = 1.0 if (plain or rot) else np.inf
            elif c.kind == "wide":
                opts = ([it.height] if plain else []) + ([it.width] if rot else [])
                consumed[i] = min(opts) if opts else np.inf
            elif c.kind == "tall":
                opts = ([it.width] if plain else []) + ([it.height] if rot else [])
                consumed[i] = min(opts) if opts else np.inf
            else:
                small = (it.width <= cp.eps_prime * c.width
                         and it.height <= cp.eps_prime * c.height)
                consumed[i] = it.area if small else np.inf
        if c.kind == "large":
            cap = 1.0
        elif c.kind == "wide":
            cap = c.height
        elif c.kind == "tall":
            cap = c.width
        else:
            cap = (1.0 - cp.eps_prime) ** 2 * c.area
        load = np.where(A == j + 1, consumed, 0.0).sum(axis=1)
        feasible &= load <= cap + TOL

    assigned = A > 0
    d = len(items[0].weights)
    for q in range(d):
        weights = np.array([it.weights[q] for it in items], dtype=np.float64)
        feasible &= np.where(assigned, weights, 0.0).sum(axis=1) <= 1.0 + TOL

    profits = np.array([it.profit for it in items], dtype=np.float64)
    value = np.where(assigned, profits, 0.0).sum(axis=1)
    value = np.where(feasible, value, -np.inf)
    return float(value.max())


def _coordinate_grid(dims: Sequence[tuple[float, ...]]) -> list[float]:
    """All achievable sums of one chosen length per item subset, deduplicated."""
    sums = {0.0}
    for options in dims:
        sums |= {round(s + o, 12) for s in sums for o in options}
    return sorted(v for v in sums if v <= 1.0 + TOL)


def _search_packing(
    items: Sequence[Item],
    rotations: bool,
    xs: Sequence[float] | None = None,
    ys: Sequence[float] | None = None,
    node_budget: int = 2_000_000,
    deadline: float | None = None,
) -> list[Placement] | None:
    """Exhaustive orthogonal-packing search over canonical coordinates.

    Any feasible packing can be compacted left and down until every
    coordinate is a sum of other items' dimensions, so restricting
    placements to those sums preserves packability exactly. Items go in
    a fixed order (area descending); positions are tried bottom-left
    first. Grids can be overridden for cross-checking against finer
    discretizations.
    """
    order = sorted(items, key=lambda it: (-it.area, it.id))
    if xs is None:
        xs = _coordinate_grid([(it.width, it.height) if rotations else (it.width,)
                               for it in order])
    if ys is None:
        ys = _coordinate_grid([(it.height, it.width) if rotations else (it.height,)
                               for it in order])
    placed: list[tuple[float, float, float, float]] = []
    out: list[Placement] = []
    nodes = 0

    def visit(idx: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise OracleBudgetError("packing search exceeded its node budget")
        if deadline is not None and nodes % 1024 == 0 and time.monotonic() > deadline:
            raise OracleBudgetError("packing search timed out")
        if idx == len(order):
            return True
        it = order[idx]
        orientations = (False, True) if rotations and it.width != it.height else (False,)
        for rot in orientations:
            w, h = it.dims(rot)
            for y in ys:
                if y + h > 1.0 + TOL:
                    continue
                for x in xs:
                    if x + w > 1.0 + TOL:
                        continue
                    if any(rects_overlap(x, y, w, h, *r) > 0.0 for r in placed):
                        continue
                    placed.append((x, y, w, h))
                    out.append(Placement(item_id=it.id, x=x, y=y, rotated=rot))
                    if visit(idx + 1):
                        return True
                    placed.pop()
                    out.pop()
        return False

    return out if visit(0) else None


def _nfdh_quick_witness(
    items: Sequence[Item], rotations: bool
) -> list[Placement] | None:
    """Cheap packability certificate: plain NFDH, then tall-orientation NFDH."""
    packing, leftover = nfdh_pack(items, 1.0, 1.0)
    if not leftover:
        return list(packing.placements)
    if not rotations:
        return None
    upright = [it if it.height >= it.width else
               Item(id=it.id, width=it.height, height=it.width, profit=it.profit,
                    weights=it.weights)
               for it in items]
    flipped = {it.id for it, orig in zip(upright, items) if it is not orig}
    packing, leftover = nfdh_pack(upright, 1.0, 1.0)
    if leftover:
        return None
    return [Placement(item_id=pl.item_id, x=pl.x, y=pl.y,
                      rotated=pl.item_id in flipped)
            for pl in packing.placements]


def exact_gvks_small(
    instance: KnapsackInstance,
    budget: OracleBudget | None = None,
) -> tuple[float, Packing]:
    """Exact optimum (profit and a witness packing) for tiny instances.

    Subsets are scanned in decreasing-profit order, filtered by the weight
    budget and a total-area bound, and the first one that admits a
    geometric packing wins. Packability is decided by NFDH fast paths and
    the canonical-coordinate search.
    """
    budget = budget or OracleBudget(max_items=8)
    items = instance.items
    n = len(items)
    if n > budget.max_items:
        raise OracleBudgetError(f"{n} items exceed the budget of {budget.max_items}")
    deadline = (time.monotonic() + budget.timeout) if budget.timeout else None

    profits = [it.profit for it in items]
    masks = sorted(range(1 << n),
                   key=lambda m: (-sum(profits[i] for i in range(n) if m >> i & 1), m))
    for mask in masks:
        subset = [items[i] for i in range(n) if mask >> i & 1]
        if not subset:
            return 0.0, Packing()
        ok = True
        for q in range(instance.d):
            if sum(it.weights[q] for it in subset) > 1.0 + TOL:
                ok = False
                break
        if not ok or sum(it.area for it in subset) > 1.0 + TOL:
            continue
        witness = _nfdh_quick_witness(subset, instance.rotations_allowed)
        if witness is None:
            witness = _search_packing(subset, instance.rotations_allowed,
                                      node_budget=budget.max_states,
                                      deadline=deadline)
        if witness is not None:
            profit = sum(it.profit for it in subset)
            return profit, Packing(placements=tuple(witness), packed_profit=profit)
    return 0.0, Packing()  # pragma: no cover - the empty subset always packs
