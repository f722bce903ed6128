"""Core domain types for the 2-D knapsack with vector constraints.

Items are axis-parallel rectangles carrying a profit and a d-dimensional
weight vector. The knapsack is always the unit square. A packing is feasible
when the placed rectangles are pairwise interior-disjoint, lie inside the
knapsack, and the packed weights stay within 1 in every dimension.

All types here are immutable value objects; the validators are pure
functions, so everything is safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

#: Absolute tolerance for all geometric and weight comparisons.
TOL = 1e-9

CONTAINER_KINDS = ("large", "wide", "tall", "area")


class PackingStructureError(ValueError):
    """A packing references an unknown item or references one twice."""


@dataclass(frozen=True)
class Item:
    """A rectangular item: dimensions in (0,1], profit >= 0, weights in [0,1]."""

    id: str
    width: float
    height: float
    profit: float
    weights: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(float(v) for v in self.weights))
        if not (0.0 < self.width <= 1.0 + TOL):
            raise ValueError(f"item {self.id!r}: width {self.width} not in (0, 1]")
        if not (0.0 < self.height <= 1.0 + TOL):
            raise ValueError(f"item {self.id!r}: height {self.height} not in (0, 1]")
        if self.profit < 0.0:
            raise ValueError(f"item {self.id!r}: negative profit")
        for q, v in enumerate(self.weights):
            if not (-TOL <= v <= 1.0 + TOL):
                raise ValueError(f"item {self.id!r}: weight[{q}] = {v} not in [0, 1]")

    @property
    def area(self) -> float:
        return self.width * self.height

    def dims(self, rotated: bool = False) -> tuple[float, float]:
        """(width, height) after an optional 90-degree rotation."""
        return (self.height, self.width) if rotated else (self.width, self.height)


@dataclass(frozen=True)
class KnapsackInstance:
    """A set of items to pack into the unit square, plus the weight dimension."""

    items: tuple[Item, ...]
    d: int
    rotations_allowed: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        if self.d < 0:
            raise ValueError("d must be nonnegative")
        seen = set()
        for it in self.items:
            if it.id in seen:
                raise ValueError(f"duplicate item id {it.id!r}")
            seen.add(it.id)
            if len(it.weights) != self.d:
                raise ValueError(
                    f"item {it.id!r} has {len(it.weights)} weights, instance d={self.d}"
                )

    def item_map(self) -> dict[str, Item]:
        return {it.id: it for it in self.items}


@dataclass(frozen=True)
class Placement:
    """An item placed with its lower-left corner at (x, y)."""

    item_id: str
    x: float
    y: float
    rotated: bool = False


@dataclass(frozen=True)
class Packing:
    """A list of placements together with the profit they claim to pack."""

    placements: tuple[Placement, ...] = ()
    packed_profit: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "placements", tuple(self.placements))


@dataclass(frozen=True)
class Container:
    """A typed rectangular region inside the unit knapsack."""

    kind: str
    x: float
    y: float
    width: float
    height: float

    def __post_init__(self) -> None:
        if self.kind not in CONTAINER_KINDS:
            raise ValueError(f"unknown container kind {self.kind!r}")
        if self.width <= 0.0 or self.height <= 0.0:
            raise ValueError("container dimensions must be positive")

    @property
    def x2(self) -> float:
        return self.x + self.width

    @property
    def y2(self) -> float:
        return self.y + self.height

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass(frozen=True)
class SolverParams:
    """Knobs for the end-to-end solver.

    eps is the headline accuracy parameter; eps_struct and eps_cont default
    to eps/2 and eps, and the area-container slack eps_prime defaults to
    eps_cont. c_max bounds the containers per configuration, sum_depth the
    number of item dimensions summed when generating candidate container
    dimensions. config_budget caps how many configurations the solver
    evaluates; x_max caps the subset-enumeration size inside the assignment
    PTAS (None means the full bound required by the approximation proof).
    """

    eps: float = 0.1
    eps_struct: float | None = None
    eps_cont: float | None = None
    eps_prime: float | None = None
    c_max: int = 2
    sum_depth: int = 2
    x_max: int | None = None
    config_budget: int = 4000
    dp_state_budget: int = 10_000_000

    def __post_init__(self) -> None:
        if self.eps_struct is None:
            object.__setattr__(self, "eps_struct", self.eps / 2.0)
        if self.eps_cont is None:
            object.__setattr__(self, "eps_cont", self.eps)
        if self.eps_prime is None:
            object.__setattr__(self, "eps_prime", self.eps_cont)
        for name in ("eps", "eps_struct", "eps_cont", "eps_prime"):
            v = getattr(self, name)
            if not (0.0 < v < 0.5):
                raise ValueError(f"{name} = {v} not in (0, 1/2)")
        if self.c_max < 1:
            raise ValueError("c_max must be >= 1")
        if self.sum_depth < 1:
            raise ValueError("sum_depth must be >= 1")
        if self.config_budget < 1 or self.dp_state_budget < 1:
            raise ValueError("budgets must be positive")
        if self.x_max is not None and self.x_max < 0:
            raise ValueError("x_max must be nonnegative")


@dataclass(frozen=True)
class Violation:
    """One reason a packing or container configuration is invalid."""

    kind: str
    message: str
    items: tuple[str, ...] = ()
    dimension: int | None = None
    overshoot: float | None = None

    def __str__(self) -> str:
        return self.message


def rects_overlap(
    ax: float, ay: float, aw: float, ah: float,
    bx: float, by: float, bw: float, bh: float,
    tol: float = TOL,
) -> float:
    """Overlap area of two rectangles if their interiors meet beyond tol, else 0.

    Shared edges are boundary contact, not overlap.
    """
    ox = min(ax + aw, bx + bw) - max(ax, bx)
    oy = min(ay + ah, by + bh) - max(ay, by)
    if ox > tol and oy > tol:
        return ox * oy
    return 0.0


def validate_packing(
    packing: Packing, instance: KnapsackInstance, tol: float = TOL
) -> list[Violation]:
    """Check a packing against the instance; an empty report means valid.

    Raises PackingStructureError for unknown or repeated item references;
    everything else (overlap, bounds, rotation, weights, profit mismatch)
    is reported as a Violation. The verdict does not depend on placement
    order.
    """
    by_id = instance.item_map()
    seen: set[str] = set()
    for pl in packing.placements:
        if pl.item_id not in by_id:
            raise PackingStructureError(f"placement references unknown item {pl.item_id!r}")
        if pl.item_id in seen:
            raise PackingStructureError(f"item {pl.item_id!r} placed more than once")
        seen.add(pl.item_id)

    violations: list[Violation] = []
    rects: list[tuple[str, float, float, float, float]] = []
    for pl in sorted(packing.placements, key=lambda p: p.item_id):
        it = by_id[pl.item_id]
        if pl.rotated and not instance.rotations_allowed:
            violations.append(Violation(
                kind="rotation",
                message=f"item {pl.item_id!r} is rotated but rotations are not allowed",
                items=(pl.item_id,),
            ))
        w, h = it.dims(pl.rotated)
        over = max(-pl.x, -pl.y, pl.x + w - 1.0, pl.y + h - 1.0)
        if over > tol:
            violations.append(Violation(
                kind="out-of-bounds",
                message=f"item {pl.item_id!r} leaves the unit square by {over:.3g}",
                items=(pl.item_id,),
                overshoot=over,
            ))
        rects.append((pl.item_id, pl.x, pl.y, w, h))

    for i in range(len(rects)):
        for j in range(i + 1, len(rects)):
            a, b = rects[i], rects[j]
            area = rects_overlap(*a[1:], *b[1:], tol=tol)
            if area > 0.0:
                violations.append(Violation(
                    kind="overlap",
                    message=f"items {a[0]!r} and {b[0]!r} overlap (area {area:.3g})",
                    items=(a[0], b[0]),
                    overshoot=area,
                ))

    for q in range(instance.d):
        total = sum(by_id[pl.item_id].weights[q] for pl in packing.placements)
        if total > 1.0 + tol:
            violations.append(Violation(
                kind="weight",
                message=f"weight dimension {q} packs {total:.6g} > 1",
                items=tuple(sorted(pl.item_id for pl in packing.placements)),
                dimension=q,
                overshoot=total - 1.0,
            ))

    profit = sum(by_id[pl.item_id].profit for pl in packing.placements)
    if abs(profit - packing.packed_profit) > tol:
        violations.append(Violation(
            kind="profit-mismatch",
            message=(f"packed_profit {packing.packed_profit:.6g} but placements "
                     f"sum to {profit:.6g}"),
            overshoot=abs(profit - packing.packed_profit),
        ))
    return violations


def container_config_valid(
    containers: Sequence[Container], tol: float = TOL
) -> list[Violation]:
    """Containers must sit inside the unit square and be pairwise interior-disjoint."""
    violations: list[Violation] = []
    for idx, c in enumerate(containers):
        over = max(-c.x, -c.y, c.x2 - 1.0, c.y2 - 1.0)
        if over > tol:
            violations.append(Violation(
                kind="out-of-bounds",
                message=f"container #{idx} ({c.kind}) leaves the unit square by {over:.3g}",
                overshoot=over,
            ))
    for i in range(len(containers)):
        for j in range(i + 1, len(containers)):
            a, b = containers[i], containers[j]
            area = rects_overlap(a.x, a.y, a.width, a.height,
                                 b.x, b.y, b.width, b.height, tol=tol)
            if area > 0.0:
                violations.append(Violation(
                    kind="overlap",
                    message=f"containers #{i} and #{j} overlap (area {area:.3g})",
                    overshoot=area,
                ))
    return violations


# ---------------------------------------------------------------------------
# JSON schemas shared with the CLI.
# Instance: {"d": int, "rotations": bool, "items": [{"id","w","h","p","v": [..]}]}
# Packing:  {"placements": [{"id","x","y","rot"}], "profit": float}
# ---------------------------------------------------------------------------

def instance_to_json(instance: KnapsackInstance) -> dict:
    return {
        "d": instance.d,
        "rotations": instance.rotations_allowed,
        "items": [
            {"id": it.id, "w": it.width, "h": it.height, "p": it.profit,
             "v": list(it.weights)}
            for it in instance.items
        ],
    }


def instance_from_json(obj: dict) -> KnapsackInstance:
    try:
        items = tuple(
            Item(id=str(rec["id"]), width=float(rec["w"]), height=float(rec["h"]),
                 profit=float(rec["p"]), weights=tuple(float(v) for v in rec["v"]))
            for rec in obj["items"]
        )
        return KnapsackInstance(items=items, d=int(obj["d"]),
                                rotations_allowed=bool(obj.get("rotations", False)))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed instance object: {exc}") from exc


def packing_to_json(packing: Packing) -> dict:
    return {
        "placements": [
            {"id": pl.item_id, "x": pl.x, "y": pl.y, "rot": pl.rotated}
            for pl in packing.placements
        ],
        "profit": packing.packed_profit,
    }


def packing_from_json(obj: dict) -> Packing:
    try:
        placements = tuple(
            Placement(item_id=str(rec["id"]), x=float(rec["x"]), y=float(rec["y"]),
                      rotated=bool(rec.get("rot", False)))
            for rec in obj["placements"]
        )
        return Packing(placements=placements, packed_profit=float(obj["profit"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed packing object: {exc}") from exc


def dumps(obj: dict) -> str:
    """Canonical JSON text used by the CLI; stable for determinism checks."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
