"""Next-Fit-Decreasing-Heights shelf packing, plus the profit-density
greedy that fills area containers with small items."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .model import TOL, Container, Item, Packing, Placement


@dataclass
class Shelf:
    """One shelf: items sit left to right at base_y; the first item fixes the height."""

    base_y: float
    shelf_height: float
    cursor_x: float


def nfdh_pack(
    items: Sequence[Item],
    bin_width: float,
    bin_height: float,
    tol: float = TOL,
) -> tuple[Packing, list[Item]]:
    """Shelf-pack items into a bin, tallest first.

    Items are sorted by decreasing height (ties by id) and placed left to
    right; when one does not fit the shelf closes and a new shelf opens on
    the top edge of the closed shelf's first item. Packing stops at the
    first item that fits neither way, and that item plus the rest of the
    sorted order comes back as the unpacked suffix. Whenever the total
    item area is at most (bin_width - max_width) * (bin_height -
    max_height), the suffix is empty.

    Every item must fit the bin on its own; anything wider or taller is a
    contract error.
    """
    for it in items:
        if it.width > bin_width + tol or it.height > bin_height + tol:
            raise ValueError(f"item {it.id!r} does not fit a "
                             f"{bin_width} x {bin_height} bin")

    order = sorted(items, key=lambda it: (-it.height, it.id))
    placements: list[Placement] = []
    unpacked: list[Item] = []
    shelf: Shelf | None = None
    for pos, it in enumerate(order):
        if shelf is None:
            shelf = Shelf(base_y=0.0, shelf_height=it.height, cursor_x=0.0)
        if (shelf.cursor_x + it.width <= bin_width + tol
                and shelf.base_y + it.height <= bin_height + tol):
            placements.append(Placement(item_id=it.id, x=shelf.cursor_x, y=shelf.base_y))
            shelf.cursor_x += it.width
            continue
        new_base = shelf.base_y + shelf.shelf_height
        if new_base + it.height <= bin_height + tol:
            shelf = Shelf(base_y=new_base, shelf_height=it.height, cursor_x=it.width)
            placements.append(Placement(item_id=it.id, x=0.0, y=new_base))
            continue
        unpacked = list(order[pos:])
        break

    by_id = {it.id: it for it in items}
    profit = sum(by_id[pl.item_id].profit for pl in placements)
    return Packing(placements=tuple(placements), packed_profit=profit), unpacked


def pack_small_greedy(
    items: Sequence[Item],
    containers: Sequence[Container],
    eps: float,
    tol: float = TOL,
) -> tuple[list[Item], Packing]:
    """Fill area containers with eps-small items, densest first.

    Items are ordered by non-increasing profit/area (ties by id). Each
    container takes the largest prefix of the remaining order whose area
    stays within (1-eps)^2 of the container's area; NFDH then provably
    packs that prefix completely. If the whole input was packable in the
    containers, the packed profit is at least (1-2*eps) of the total.

    Every item must be eps-small for every container (width at most
    eps * container width, height at most eps * container height).
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps = {eps} not in (0, 1)")
    for it in items:
        for c in containers:
            if it.width > eps * c.width or it.height > eps * c.height:
                raise ValueError(
                    f"item {it.id!r} is not {eps}-small for a "
                    f"{c.width} x {c.height} container")

    remaining = sorted(items, key=lambda it: (-(it.profit / it.area), it.id))
    placements: list[Placement] = []
    packed: list[Item] = []
    for c in containers:
        if not remaining:
            break
        budget = (1.0 - eps) ** 2 * c.area
        area = 0.0
        take = 0
        for it in remaining:
            if area + it.area > budget:
                break
            area += it.area
            take += 1
        if take == 0:
            continue
        chunk = remaining[:take]
        remaining = remaining[take:]
        sub, leftover = nfdh_pack(chunk, c.width, c.height, tol=tol)
        if leftover:  # pragma: no cover - excluded by the area bound
            raise AssertionError("NFDH failed below its area bound")
        placements.extend(
            Placement(item_id=pl.item_id, x=pl.x + c.x, y=pl.y + c.y)
            for pl in sub.placements
        )
        packed.extend(chunk)

    profit = sum(it.profit for it in packed)
    return packed, Packing(placements=tuple(placements), packed_profit=profit)
