"""Container packing: pack items into a fixed set of typed containers.

Large containers hold at most one item, wide containers stack items
bottom-up, tall containers line them up left to right, and area containers
hold only items small relative to the container, with total item area
capped at (1-eps')^2 of the container area. Global weight budgets of 1 per
dimension apply across all containers.

The problem reduces to Vector-Max-GAP with one machine per container; a
feasible assignment converts back into a geometric packing of equal
profit, which makes the GAP PTAS a PTAS here too.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gap import DEFAULT_STATE_BUDGET, GapAssignment, GapInstance, GapItem, INFEASIBLE
from .gap import assignment_violations
from .gap_ptas import vmg_ptas
from .model import TOL, Container, Item, Packing, Placement, container_config_valid
from .nfdh import nfdh_pack


@dataclass(frozen=True)
class ContainerPackingInstance:
    """Items, a valid container configuration, the area slack, and the rotation flag."""

    items: tuple[Item, ...]
    containers: tuple[Container, ...]
    eps_prime: float
    rotations_allowed: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "containers", tuple(self.containers))
        if not 0.0 < self.eps_prime < 1.0:
            raise ValueError(f"eps_prime = {self.eps_prime} not in (0, 1)")
        bad = container_config_valid(self.containers)
        if bad:
            raise ValueError(f"invalid container configuration: {bad[0]}")


def fits(item: Item, container: Container, rotated: bool = False,
         tol: float = TOL) -> bool:
    w, h = item.dims(rotated)
    return w <= container.width + tol and h <= container.height + tol


def is_small_for(item: Item, container: Container, eps_prime: float) -> bool:
    """eps'-small check for area containers; always on the unrotated dimensions."""
    return (item.width <= eps_prime * container.width
            and item.height <= eps_prime * container.height)


def _wide_tall_size(item: Item, container: Container, rotations: bool) -> float:
    """Machine size of an item in a wide or tall container.

    Wide containers consume height, tall ones width. With rotations the
    consumed size is the smaller of the two fitting orientations.
    """
    wide = container.kind == "wide"
    plain = item.height if wide else item.width
    flipped = item.width if wide else item.height
    if not rotations:
        return plain if fits(item, container) else INFEASIBLE
    fit_plain = fits(item, container, rotated=False)
    fit_rot = fits(item, container, rotated=True)
    if fit_plain and fit_rot:
        return min(item.width, item.height)
    if fit_plain:
        return plain
    if fit_rot:
        return flipped
    return INFEASIBLE


def reduce_to_vmg(cp: ContainerPackingInstance) -> GapInstance:
    """Build the Vector-Max-GAP instance with one machine per container.

    Sizes: 1 for a fitting item in a large container, consumed height
    (resp. width) in a wide (resp. tall) container, item area in an area
    container when the item is eps'-small, and infeasible otherwise.
    Capacities: 1, container height, container width, and
    (1-eps')^2 * container area respectively. Values are the item profits
    on every machine, weights carry over unchanged, and the global budget
    is 1 in every dimension.
    """
    k = len(cp.containers)
    caps = []
    for c in cp.containers:
        if c.kind == "large":
            caps.append(1.0)
        elif c.kind == "wide":
            caps.append(c.height)
        elif c.kind == "tall":
            caps.append(c.width)
        else:
            caps.append((1.0 - cp.eps_prime) ** 2 * c.area)

    d = len(cp.items[0].weights) if cp.items else 0
    gap_items = []
    for it in cp.items:
        sizes = []
        for c in cp.containers:
            if c.kind == "large":
                ok = fits(it, c) or (cp.rotations_allowed and fits(it, c, rotated=True))
                sizes.append(1.0 if ok else INFEASIBLE)
            elif c.kind in ("wide", "tall"):
                sizes.append(_wide_tall_size(it, c, cp.rotations_allowed))
            else:
                sizes.append(it.area if is_small_for(it, c, cp.eps_prime)
                             else INFEASIBLE)
        gap_items.append(GapItem(
            id=it.id,
            sizes=tuple(sizes),
            values=tuple(it.profit for _ in range(k)),
            weights=it.weights,
        ))
    return GapInstance(items=tuple(gap_items), capacities=tuple(caps),
                       weight_limits=tuple(1.0 for _ in range(d)))


def _orientation_in(item: Item, container: Container, rotations: bool) -> bool:
    """Whether the realized placement is rotated, matching the reduction's size.

    Squares and anything where both orientations consume the same stay
    unrotated.
    """
    if not rotations or container.kind == "area":
        return False
    fit_plain = fits(item, container)
    fit_rot = fits(item, container, rotated=True)
    if fit_plain and not fit_rot:
        return False
    if fit_rot and not fit_plain:
        return True
    if container.kind == "wide":
        return item.width < item.height
    if container.kind == "tall":
        return item.height < item.width
    return False  # large: prefer unrotated when both fit


def realize_assignment(
    assignment: GapAssignment,
    cp: ContainerPackingInstance,
) -> Packing:
    """Turn a feasible machine assignment into a geometric packing of equal profit.

    Wide containers stack their items bottom-up and tall containers line
    them up left to right, both in ascending item-id order; area
    containers are packed by NFDH, which the capacity bound guarantees to
    succeed. An infeasible assignment is a contract error, never clipped.
    """
    reduced = reduce_to_vmg(cp)
    bad = assignment_violations(reduced, assignment.as_dict())
    if bad:
        raise ValueError(f"assignment is not feasible for the reduction: {bad[0]}")

    by_id = {it.id: it for it in cp.items}
    per_machine: dict[int, list[Item]] = {}
    for item_id, j in assignment.machine_of:
        per_machine.setdefault(j, []).append(by_id[item_id])

    placements: list[Placement] = []
    for j, members in sorted(per_machine.items()):
        c = cp.containers[j]
        members.sort(key=lambda it: it.id)
        if c.kind == "large":
            it = members[0]  # capacity 1 with unit sizes forces a single item
            rot = _orientation_in(it, c, cp.rotations_allowed)
            placements.append(Placement(item_id=it.id, x=c.x, y=c.y, rotated=rot))
        elif c.kind == "wide":
            cursor = c.y
            for it in members:
                rot = _orientation_in(it, c, cp.rotations_allowed)
                placements.append(Placement(item_id=it.id, x=c.x, y=cursor, rotated=rot))
                cursor += it.dims(rot)[1]
        elif c.kind == "tall":
            cursor = c.x
            for it in members:
                rot = _orientation_in(it, c, cp.rotations_allowed)
                placements.append(Placement(item_id=it.id, x=cursor, y=c.y, rotated=rot))
                cursor += it.dims(rot)[0]
        else:
            for it in members:
                if not is_small_for(it, c, cp.eps_prime):  # pragma: no cover
                    raise AssertionError("area container holds a non-small item")
            sub, leftover = nfdh_pack(members, c.width, c.height)
            if leftover:  # pragma: no cover - excluded by the capacity bound
                raise AssertionError("NFDH failed inside an area container")
            placements.extend(
                Placement(item_id=pl.item_id, x=pl.x + c.x, y=pl.y + c.y)
                for pl in sub.placements
            )

    profit = sum(by_id[i].profit for i, _ in assignment.machine_of)
    return Packing(placements=tuple(placements), packed_profit=profit)


def solve_container_packing(
    cp: ContainerPackingInstance,
    eps_cont: float,
    x_max: int | None = None,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> Packing:
    """PTAS for container packing: reduce, run the GAP PTAS, realize.

    With x_max at its default bound the packed profit is at least
    (1 - (2d+3)*eps_cont) times the container-packing optimum, with or
    without rotations.
    """
    if not cp.items:
        return Packing()
    d = len(cp.items[0].weights)
    if not 0.0 < eps_cont < 1.0 / (2 * d + 3):
        raise ValueError(f"eps_cont = {eps_cont} not in (0, 1/(2d+3)) for d = {d}")
    reduced = reduce_to_vmg(cp)
    assignment = vmg_ptas(reduced, eps_cont, x_max=x_max, state_budget=state_budget)
    return realize_assignment(assignment, cp)
