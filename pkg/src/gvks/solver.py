"""End-to-end solver for the 2-D knapsack with vector constraints.

Candidate container widths and heights come from the item dimensions and
their small sums; container configurations are enumerated by recursive
guillotine cuts of the unit square at candidate coordinates, one container
anchored in every parcel, crossed with all type labelings. Each
configuration becomes a container packing problem solved through the GAP
PTAS; the best packing over all explored configurations wins.

Configurations that fill their parcels with the largest fitting candidate
dimensions dominate the rest, so the stream yields those first and the
remaining dimension choices afterwards. Truncating the stream with a
budget therefore keeps the strongest configurations.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterator, Sequence

from .containers import ContainerPackingInstance, fits, is_small_for, realize_assignment, reduce_to_vmg
from .gap import GapInstance
from .gap_ptas import vmg_ptas
from .model import (
    CONTAINER_KINDS,
    TOL,
    Container,
    Item,
    KnapsackInstance,
    Packing,
    SolverParams,
)

Parcel = tuple[float, float, float, float]  # x, y, width, height


@dataclass(frozen=True)
class CandidateDimensions:
    """Sorted, deduplicated candidate container widths and heights."""

    widths: tuple[float, ...]
    heights: tuple[float, ...]


def _dedupe(values: Sequence[float], tol: float = TOL) -> tuple[float, ...]:
    out: list[float] = []
    for v in sorted(values):
        if not out or v - out[-1] > tol:
            out.append(v)
    return tuple(out)


def generate_candidate_dimensions(
    items: Sequence[Item], params: SolverParams
) -> CandidateDimensions:
    """Candidate widths: 1.0, every item width, and sums of at most
    sum_depth item widths that stay within 1. Heights analogously."""
    widths: list[float] = [1.0]
    heights: list[float] = [1.0]
    ws = [it.width for it in items]
    hs = [it.height for it in items]
    for t in range(1, params.sum_depth + 1):
        for combo in itertools.combinations(ws, t):
            s = sum(combo)
            if s <= 1.0 + TOL:
                widths.append(min(s, 1.0))
        for combo in itertools.combinations(hs, t):
            s = sum(combo)
            if s <= 1.0 + TOL:
                heights.append(min(s, 1.0))
    return CandidateDimensions(widths=_dedupe(widths), heights=_dedupe(heights))


def _structures(
    region: Parcel,
    budget: int,
    widths: Sequence[float],
    heights: Sequence[float],
) -> list[tuple[Parcel, ...]]:
    """All guillotine partitions of region into 1..budget parcels.

    Cuts run at candidate offsets from the region's left or bottom edge.
    Different cut trees can carve the same parcels; callers deduplicate.
    """
    x, y, w, h = region
    out: list[tuple[Parcel, ...]] = [(region,)]
    if budget < 2:
        return out
    for c in widths:
        if c <= TOL or c >= w - TOL:
            continue
        left = (x, y, c, h)
        right = (x + c, y, w - c, h)
        for part_l in _structures(left, budget - 1, widths, heights):
            for part_r in _structures(right, budget - len(part_l), widths, heights):
                out.append(part_l + part_r)
    for c in heights:
        if c <= TOL or c >= h - TOL:
            continue
        bottom = (x, y, w, c)
        top = (x, y + c, w, h - c)
        for part_b in _structures(bottom, budget - 1, widths, heights):
            for part_t in _structures(top, budget - len(part_b), widths, heights):
                out.append(part_b + part_t)
    return out


def _round_key(values: Sequence[float]) -> tuple[float, ...]:
    return tuple(round(v, 12) for v in values)


def enumerate_container_configs(
    cands: CandidateDimensions,
    params: SolverParams,
) -> Iterator[tuple[Container, ...]]:
    """Stream every container configuration of at most c_max containers.

    Containers take candidate dimensions and sit bottom-left-anchored in
    the parcels of a guillotine partition, one per parcel; each distinct
    rectangle set is crossed with all type labelings. The stream is
    deterministic: partitions with fewer parcels first, and within a
    partition the parcel-filling (largest) dimension choice before all
    smaller choices.
    """
    widths, heights = cands.widths, cands.heights
    raw = _structures((0.0, 0.0, 1.0, 1.0), params.c_max, widths, heights)
    structures: list[tuple[Parcel, ...]] = []
    seen_struct: set[frozenset] = set()
    for parcels in raw:
        key = frozenset(_round_key(p) for p in parcels)
        if key not in seen_struct:
            seen_struct.add(key)
            structures.append(parcels)
    structures.sort(key=len)

    def fitting(options: Sequence[float], limit: float) -> list[float]:
        hi = bisect_right(options, limit + TOL)
        return list(reversed(options[:hi]))  # largest first

    seen_rects: set[tuple] = set()

    def emit(parcels: tuple[Parcel, ...], choices: list[list[tuple[float, float]]]
             ) -> Iterator[tuple[Container, ...]]:
        for dims in itertools.product(*choices):
            rects = tuple(
                (round(p[0], 12), round(p[1], 12), round(d[0], 12), round(d[1], 12))
                for p, d in zip(parcels, dims)
            )
            key = tuple(sorted(rects))
            if key in seen_rects:
                continue
            seen_rects.add(key)
            for kinds in itertools.product(CONTAINER_KINDS, repeat=len(parcels)):
                yield tuple(
                    Container(kind=kind, x=p[0], y=p[1], width=d[0], height=d[1])
                    for kind, p, d in zip(kinds, parcels, dims)
                )

    # pass 1: fill every parcel with the largest fitting candidate dims
    for parcels in structures:
        choices = []
        for _, _, pw, ph in parcels:
            ws = fitting(widths, pw)
            hs = fitting(heights, ph)
            if not ws or not hs:
                choices = []
                break
            choices.append([(ws[0], hs[0])])
        if choices:
            yield from emit(parcels, choices)

    # pass 2: every remaining dimension choice, largest first
    for parcels in structures:
        choices = []
        for _, _, pw, ph in parcels:
            ws = fitting(widths, pw)
            hs = fitting(heights, ph)
            if not ws or not hs:
                choices = []
                break
            choices.append([(cw, ch) for cw in ws for ch in hs])
        if choices:
            yield from emit(parcels, choices)


def _profit_upper_bound(
    items: Sequence[Item],
    config: Sequence[Container],
    eps_prime: float,
    rotations: bool,
) -> float:
    """Cheap bound on any packing's profit in this configuration."""
    large = [c for c in config if c.kind == "large"]
    other = [c for c in config if c.kind != "large"]
    total = 0.0
    large_only: list[float] = []
    for it in items:
        in_other = False
        for c in other:
            if c.kind == "area":
                if is_small_for(it, c, eps_prime):
                    in_other = True
                    break
            elif fits(it, c) or (rotations and fits(it, c, rotated=True)):
                in_other = True
                break
        if in_other:
            total += it.profit
            continue
        for c in large:
            if fits(it, c) or (rotations and fits(it, c, rotated=True)):
                large_only.append(it.profit)
                break
    large_only.sort(reverse=True)
    return total + sum(large_only[:len(large)])


def _gap_cache_key(reduced: GapInstance) -> tuple:
    return (
        _round_key(reduced.capacities),
        _round_key(reduced.weight_limits),
        tuple((it.id, _round_key(it.sizes)) for it in reduced.items),
    )


@dataclass
class SolveResult:
    """A packing plus how the configuration search went."""

    packing: Packing
    configs_explored: int
    truncated: bool
    best_config: tuple[Container, ...] | None


def solve_gvks_detailed(
    instance: KnapsackInstance,
    params: SolverParams | None = None,
) -> SolveResult:
    """Best container packing over the enumerated configurations.

    The output is always geometrically and vector-feasible, whatever the
    budgets; enlarging c_max, sum_depth, or config_budget never lowers the
    profit. When the enumeration covers the configuration the structural
    argument promises, the profit is at least (1/2 - eps) of the optimum
    with eps_struct = eps/2 and eps_cont = eps.
    """
    params = params or SolverParams()
    if not instance.items:
        return SolveResult(Packing(), 0, False, None)
    d = instance.d
    if not 0.0 < params.eps_cont < 1.0 / (2 * d + 3):
        raise ValueError(
            f"eps_cont = {params.eps_cont} must be below 1/(2d+3) = "
            f"{1.0 / (2 * d + 3):.4g} for d = {d}")

    cands = generate_candidate_dimensions(instance.items, params)
    best_packing = Packing()
    best_value = 0.0
    best_config: tuple[Container, ...] | None = None
    explored = 0
    truncated = False
    cache: dict[tuple, object] = {}

    for config in enumerate_container_configs(cands, params):
        if explored >= params.config_budget:
            truncated = True
            break
        explored += 1
        if _profit_upper_bound(instance.items, config, params.eps_prime,
                               instance.rotations_allowed) <= best_value:
            continue
        cp = ContainerPackingInstance(
            items=instance.items,
            containers=config,
            eps_prime=params.eps_prime,
            rotations_allowed=instance.rotations_allowed,
        )
        reduced = reduce_to_vmg(cp)
        key = _gap_cache_key(reduced)
        assignment = cache.get(key)
        if assignment is None:
            assignment = vmg_ptas(reduced, params.eps_cont, x_max=params.x_max,
                                  state_budget=params.dp_state_budget)
            cache[key] = assignment
        if assignment.total_value > best_value:
            best_value = assignment.total_value
            best_packing = realize_assignment(assignment, cp)
            best_config = config

    return SolveResult(packing=best_packing, configs_explored=explored,
                       truncated=truncated, best_config=best_config)


def solve_gvks(
    instance: KnapsackInstance,
    params: SolverParams | None = None,
) -> Packing:
    """See solve_gvks_detailed; this returns just the packing."""
    return solve_gvks_detailed(instance, params).packing
