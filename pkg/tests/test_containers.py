"""The container packing problem, its GAP reduction, and realization."""

import math
import random

import pytest

from gvks import (
    Container,
    ContainerPackingInstance,
    GapAssignment,
    Item,
    KnapsackInstance,
    exact_container_packing,
    realize_assignment,
    reduce_to_vmg,
    solve_container_packing,
    validate_packing,
)
from gvks.gap import is_feasible

from helpers import rand_items

TOL = 1e-9


def _cp(items, containers, eps_prime=0.2, rotations=False):
    return ContainerPackingInstance(items=tuple(items), containers=tuple(containers),
                                    eps_prime=eps_prime, rotations_allowed=rotations)


def _validate(cp, packing):
    d = len(cp.items[0].weights) if cp.items else 0
    inst = KnapsackInstance(items=cp.items, d=d,
                            rotations_allowed=cp.rotations_allowed)
    return validate_packing(packing, inst)


# --- reduction table ---------------------------------------------------------

def test_wide_container_consumes_height():
    cp = _cp([Item("a", 0.7, 0.1, 5.0, (0.3,))],
             [Container("wide", 0.0, 0.0, 0.8, 0.3)])
    red = reduce_to_vmg(cp)
    assert red.items[0].sizes == (0.1,)
    assert red.capacities == (0.3,)
    assert red.weight_limits == (1.0,)
    assert red.items[0].values == (5.0,)
    assert red.items[0].weights == (0.3,)


def test_tall_container_consumes_width():
    cp = _cp([Item("a", 0.1, 0.7, 5.0, ())],
             [Container("tall", 0.0, 0.0, 0.3, 0.8)])
    red = reduce_to_vmg(cp)
    assert red.items[0].sizes == (0.1,)
    assert red.capacities == (0.3,)


def test_area_container_formulas():
    cp = _cp([Item("a", 0.05, 0.05, 1.0, ())],
             [Container("area", 0.0, 0.0, 0.5, 0.5)], eps_prime=0.2)
    red = reduce_to_vmg(cp)
    assert red.items[0].sizes[0] == pytest.approx(0.0025)
    assert red.capacities[0] == pytest.approx(0.64 * 0.25)


def test_area_container_rejects_non_small():
    cp = _cp([Item("a", 0.2, 0.05, 1.0, ())],
             [Container("area", 0.0, 0.0, 0.5, 0.5)], eps_prime=0.2)
    assert math.isinf(reduce_to_vmg(cp).items[0].sizes[0])


def test_large_container_unit_size():
    cp = _cp([Item("a", 0.9, 0.9, 1.0, ()), Item("b", 0.9, 1.0, 1.0, ())],
             [Container("large", 0.0, 0.0, 0.9, 0.95)])
    red = reduce_to_vmg(cp)
    assert red.items[0].sizes == (1.0,)
    assert math.isinf(red.items[1].sizes[0])
    assert red.capacities == (1.0,)


def test_misfit_is_infeasible_everywhere():
    cp = _cp([Item("a", 0.9, 0.2, 1.0, ())],
             [Container("wide", 0.0, 0.0, 0.8, 0.3)])
    assert math.isinf(reduce_to_vmg(cp).items[0].sizes[0])


def test_rotation_variant_table():
    # tall container, item fits both ways: min of the two dimensions
    cp = _cp([Item("a", 0.2, 0.05, 1.0, ())],
             [Container("tall", 0.0, 0.0, 0.3, 0.3)], rotations=True)
    assert reduce_to_vmg(cp).items[0].sizes == (0.05,)
    # wide container, fits only rotated: consumes the original width
    cp = _cp([Item("a", 0.2, 0.6, 1.0, ())],
             [Container("wide", 0.0, 0.0, 0.7, 0.4)], rotations=True)
    assert reduce_to_vmg(cp).items[0].sizes == (0.2,)
    # fits neither way
    cp = _cp([Item("a", 0.9, 0.6, 1.0, ())],
             [Container("wide", 0.0, 0.0, 0.7, 0.4)], rotations=True)
    assert math.isinf(reduce_to_vmg(cp).items[0].sizes[0])
    # area containers ignore rotation: smallness stays unrotated
    cp = _cp([Item("a", 0.09, 0.01, 1.0, ())],
             [Container("area", 0.0, 0.0, 0.5, 0.5)], eps_prime=0.1,
             rotations=True)
    assert math.isinf(reduce_to_vmg(cp).items[0].sizes[0])


# --- realization --------------------------------------------------------------

def test_instance_rejects_bad_inputs():
    with pytest.raises(ValueError):
        ContainerPackingInstance(items=(), containers=(), eps_prime=1.2,
                                 rotations_allowed=False)
    clash = (Container("wide", 0.0, 0.0, 0.6, 1.0),
             Container("wide", 0.0, 0.0, 0.6, 1.0))
    with pytest.raises(ValueError):
        ContainerPackingInstance(items=(), containers=clash, eps_prime=0.2,
                                 rotations_allowed=False)


def test_wide_realization_stacks_in_id_order():
    items = [Item("a", 0.5, 0.1, 1.0, ()), Item("b", 0.6, 0.15, 1.0, ())]
    cp = _cp(items, [Container("wide", 0.1, 0.2, 0.7, 0.3)])
    assignment = GapAssignment((("a", 0), ("b", 0)), 2.0)
    packing = realize_assignment(assignment, cp)
    by_id = {pl.item_id: pl for pl in packing.placements}
    assert by_id["a"].x == pytest.approx(0.1)
    assert by_id["a"].y == pytest.approx(0.2)
    assert by_id["b"].y == pytest.approx(0.3)
    assert _validate(cp, packing) == []


def test_tall_realization_lines_up_left_to_right():
    items = [Item("a", 0.1, 0.5, 1.0, ()), Item("b", 0.15, 0.6, 1.0, ())]
    cp = _cp(items, [Container("tall", 0.0, 0.0, 0.3, 0.7)])
    packing = realize_assignment(GapAssignment((("a", 0), ("b", 0)), 2.0), cp)
    by_id = {pl.item_id: pl for pl in packing.placements}
    assert by_id["a"].x == pytest.approx(0.0)
    assert by_id["b"].x == pytest.approx(0.1)


def test_area_realization_packs_by_nfdh():
    rng = random.Random(9)
    items = [Item(f"i{i:02d}", rng.uniform(0.01, 0.04), rng.uniform(0.01, 0.04),
                  1.0, ()) for i in range(20)]
    c = Container("area", 0.25, 0.25, 0.5, 0.5)
    cp = _cp(items, [c], eps_prime=0.1)
    red = reduce_to_vmg(cp)
    total_area = sum(it.area for it in items)
    assert total_area <= red.capacities[0]
    assignment = GapAssignment(tuple((it.id, 0) for it in items), 20.0)
    packing = realize_assignment(assignment, cp)
    assert len(packing.placements) == 20
    assert _validate(cp, packing) == []
    for pl in packing.placements:
        assert pl.x >= c.x - TOL and pl.y >= c.y - TOL


def test_infeasible_assignment_is_contract_error():
    items = [Item("a", 0.5, 0.2, 1.0, ()), Item("b", 0.5, 0.2, 1.0, ())]
    cp = _cp(items, [Container("wide", 0.0, 0.0, 0.6, 0.3)])
    with pytest.raises(ValueError):
        realize_assignment(GapAssignment((("a", 0), ("b", 0)), 2.0), cp)


def test_only_rotated_fit_realizes_rotated():
    items = [Item("a", 0.6, 0.2, 3.0, ())]
    cp = _cp(items, [Container("tall", 0.0, 0.0, 0.3, 0.7)], rotations=True)
    packing = solve_container_packing(cp, 0.1)
    assert packing.packed_profit == 3.0
    assert packing.placements[0].rotated
    assert _validate(cp, packing) == []


# --- fuzzed round trips --------------------------------------------------------

def _random_container_config(rng, kinds=("large", "wide", "tall", "area")):
    count = rng.randint(1, 3)
    xs = sorted(rng.uniform(0.1, 0.9) for _ in range(count - 1))
    edges = [0.0] + xs + [1.0]
    containers = []
    for i in range(count):
        w = edges[i + 1] - edges[i]
        if w < 0.05:
            continue
        containers.append(Container(rng.choice(kinds), edges[i], 0.0,
                                    w, rng.uniform(0.3, 1.0)))
    return containers or [Container(rng.choice(kinds), 0.0, 0.0, 1.0, 1.0)]


def _feasible_packing_by_construction(rng, containers, eps_prime, d, rotations):
    """Fill containers directly, returning (items, machine_of)."""
    items = []
    mach = {}
    for j, c in enumerate(containers):
        if c.kind == "large":
            if rng.random() < 0.3:
                continue
            w = rng.uniform(0.05, c.width)
            h = rng.uniform(0.05, c.height)
            it = Item(f"c{j}x0", w, h, rng.uniform(0.1, 1.0),
                      tuple(rng.uniform(0, 0.2) for _ in range(d)))
            items.append(it)
            mach[it.id] = j
        elif c.kind in ("wide", "tall"):
            budget = c.height if c.kind == "wide" else c.width
            used = 0.0
            for t in range(rng.randint(0, 4)):
                span = rng.uniform(0.02, budget / 3)
                if used + span > budget:
                    break
                if c.kind == "wide":
                    it = Item(f"c{j}x{t}", rng.uniform(0.05, c.width), span,
                              rng.uniform(0.1, 1.0),
                              tuple(rng.uniform(0, 0.2) for _ in range(d)))
                else:
                    it = Item(f"c{j}x{t}", span, rng.uniform(0.05, c.height),
                              rng.uniform(0.1, 1.0),
                              tuple(rng.uniform(0, 0.2) for _ in range(d)))
                items.append(it)
                mach[it.id] = j
                used += span
        else:
            budget = (1 - eps_prime) ** 2 * c.area
            used = 0.0
            for t in range(rng.randint(0, 8)):
                w = rng.uniform(0.005, eps_prime * c.width * 0.99)
                h = rng.uniform(0.005, eps_prime * c.height * 0.99)
                if used + w * h > budget:
                    break
                it = Item(f"c{j}x{t}", w, h, rng.uniform(0.1, 1.0),
                          tuple(rng.uniform(0, 0.2) for _ in range(d)))
                items.append(it)
                mach[it.id] = j
                used += w * h
    return items, mach


def test_reduction_round_trip_fuzzed():
    rng = random.Random(606)
    for trial in range(120):
        rotations = trial % 2 == 1
        d = rng.randint(1, 2)
        eps_prime = rng.choice([0.1, 0.2])
        containers = _random_container_config(rng)
        items, mach = _feasible_packing_by_construction(
            rng, containers, eps_prime, d, rotations)
        if not items:
            continue
        # forward: a constructed feasible packing induces a feasible
        # assignment of equal value
        cp = _cp(items, containers, eps_prime, rotations)
        red = reduce_to_vmg(cp)
        if any(sum(it.weights[q] for it in items) > 1.0 for q in range(d)):
            continue
        assert is_feasible(red, mach)
        value = sum(it.profit for it in items)
        # backward: realizing that assignment gives a valid packing of the
        # same profit
        assignment = GapAssignment(tuple(mach.items()), value)
        packing = realize_assignment(assignment, cp)
        assert packing.packed_profit == pytest.approx(value)
        assert _validate(cp, packing) == []


def test_realized_profit_equals_assignment_value_from_solver():
    rng = random.Random(1212)
    for trial in range(30):
        rotations = trial % 2 == 1
        containers = _random_container_config(rng)
        items = rand_items(rng, rng.randint(1, 6), d=1)
        cp = _cp(items, containers, 0.2, rotations)
        packing = solve_container_packing(cp, 0.1)
        assert _validate(cp, packing) == []
        # placements live inside their containers
        by_id = {it.id: it for it in items}
        placed_ids = {pl.item_id for pl in packing.placements}
        assert packing.packed_profit == pytest.approx(
            sum(by_id[i].profit for i in placed_ids))


def test_container_ptas_guarantee_vs_oracle():
    rng = random.Random(9090)
    eps = 0.1
    for trial in range(25):
        rotations = trial % 2 == 1
        containers = _random_container_config(rng)
        items = rand_items(rng, rng.randint(1, 6), d=1)
        cp = _cp(items, containers, 0.2, rotations)
        packing = solve_container_packing(cp, eps)
        opt = exact_container_packing(cp)
        d = 1
        assert packing.packed_profit >= (1 - (2 * d + 3) * eps) * opt - TOL
        assert packing.packed_profit <= opt + TOL


def test_rotation_never_hurts():
    rng = random.Random(111)
    for _ in range(15):
        containers = _random_container_config(rng)
        items = rand_items(rng, 5, d=1)
        plain = solve_container_packing(_cp(items, containers, 0.2, False), 0.1)
        spun = solve_container_packing(_cp(items, containers, 0.2, True), 0.1)
        assert spun.packed_profit >= plain.packed_profit - TOL


def test_exact_container_packing_examples():
    # single large container, two fitting items: the better one wins
    items = [Item("a", 0.5, 0.5, 3.0, (0.1,)), Item("b", 0.5, 0.5, 7.0, (0.1,))]
    cp = _cp(items, [Container("large", 0.0, 0.0, 0.6, 0.6)])
    assert exact_container_packing(cp) == 7.0
    # no items
    cp_empty = ContainerPackingInstance(
        items=(), containers=(Container("large", 0, 0, 1, 1),),
        eps_prime=0.2, rotations_allowed=False)
    assert exact_container_packing(cp_empty) == 0.0
    # no containers
    cp_bare = ContainerPackingInstance(
        items=tuple(items), containers=(), eps_prime=0.2,
        rotations_allowed=False)
    assert exact_container_packing(cp_bare) == 0.0


def test_solver_picks_best_item_for_lone_large_container():
    items = [Item("a", 0.5, 0.5, 3.0, (0.1,)), Item("b", 0.5, 0.5, 7.0, (0.1,))]
    cp = _cp(items, [Container("large", 0.0, 0.0, 0.6, 0.6)])
    packing = solve_container_packing(cp, 0.1)
    assert packing.packed_profit == 7.0
    assert [pl.item_id for pl in packing.placements] == ["b"]


def test_exact_container_packing_matches_hand_enumeration():
    # 3 items, 2 containers: wide 1.0 x 0.3 (height capacity 0.3) and a
    # large 0.5 x 0.5. Hand enumeration over 3^3 = 27 assignments:
    #  - a (h 0.2) and b (h 0.1) stack in the wide one: 4 + 3 = 7
    #  - c (0.5 x 0.5) fills the large one: +5
    items = [Item("a", 0.8, 0.2, 4.0, (0.3,)),
             Item("b", 0.6, 0.1, 3.0, (0.3,)),
             Item("c", 0.5, 0.5, 5.0, (0.3,))]
    containers = [Container("wide", 0.0, 0.0, 1.0, 0.3),
                  Container("large", 0.0, 0.5, 0.5, 0.5)]
    cp = _cp(items, containers)
    assert exact_container_packing(cp) == 12.0
    # tighten the weight budget so only two of the three fit: best pair is c+a
    items_heavy = [Item("a", 0.8, 0.2, 4.0, (0.5,)),
                   Item("b", 0.6, 0.1, 3.0, (0.6,)),
                   Item("c", 0.5, 0.5, 5.0, (0.5,))]
    cp2 = _cp(items_heavy, containers)
    assert exact_container_packing(cp2) == 9.0
