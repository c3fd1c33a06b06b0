"""The brute-force reference checked against hand-computed tours and plain enumeration."""
from itertools import permutations

import numpy as np
import pytest

from pickroute import Depot, Pick, PickInstance, WarehouseLayout, oracle_optimal
from pickroute.oracle import MAX_REQUIRED, OracleTooLarge, held_karp, warehouse_graph


def brute_cycle(dist):
    n = len(dist)
    if n == 1:
        return 0
    return min(sum(dist[a][b] for a, b in zip((0, *p), (*p, 0)))
               for p in permutations(range(1, n)))


@pytest.mark.parametrize("seed", range(40))
def test_held_karp_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    pts = rng.integers(0, 50, size=(n, 2))
    dist = [[int(abs(p - q).sum()) for q in pts] for p in pts]
    assert held_karp(dist) == brute_cycle(dist)


def test_depot_only_is_zero():
    inst = PickInstance(WarehouseLayout(1, 3, 5), Depot(2, "front"))
    assert oracle_optimal(inst) == 0


def test_single_pick_in_depot_aisle():
    # slot 3 sits at 2.5 from the front; out and back is 5, in half-slot units 10
    inst = PickInstance(WarehouseLayout(1, 2, 6), Depot(1, "front"), (Pick(1, 3),))
    assert inst.layout.scale().denominator == 2
    assert oracle_optimal(inst) == 10


def test_pick_in_neighbouring_aisle():
    # walk 2 along the front, up 0.5 and back: 2 * (2 + 0.5) = 5
    inst = PickInstance(WarehouseLayout(1, 2, 6, 1, 2), Depot(1, "front"), (Pick(2, 1),))
    assert inst.layout.scale().to_length(oracle_optimal(inst)) == 5


def test_traversal_beats_return():
    # picks at the top of aisles 1 and 2: the rectangle 6 + 1 + 6 + 1 = 14
    # beats returning from each aisle (11 + 13)
    inst = PickInstance(WarehouseLayout(1, 2, 6, 1, 1), Depot(1, "front"),
                        (Pick(1, 6), Pick(2, 6)))
    assert inst.layout.scale().to_length(oracle_optimal(inst)) == 14


def test_two_block_middle_cross_aisle():
    # two-block: c = 1, subaisle length 3 + 0.5; pick in upper block slot 1 of aisle 1
    # sits at 3.5 + 0.5 + 0.5 = 4.5 above the front
    inst = PickInstance(WarehouseLayout(2, 1, 3, 1, 1, 1), Depot(1, "front"),
                        (Pick(1, 1, "upper"),))
    assert inst.layout.scale().to_length(oracle_optimal(inst)) == 9


def test_graph_is_connected_and_integral():
    inst = PickInstance(WarehouseLayout(2, 3, 4, "1/2", "0.7", "1/3"), Depot(2, "middle"),
                        (Pick(1, 2, "lower"), Pick(3, 4, "upper")))
    g = warehouse_graph(inst)
    assert all(isinstance(d["length"], int) and d["length"] > 0 for *_, d in g.edges(data=True))
    assert len(g) == 3 * 3 + 2


def test_size_cap():
    picks = tuple(Pick(1, i) for i in range(1, MAX_REQUIRED + 1))
    inst = PickInstance(WarehouseLayout(1, 1, MAX_REQUIRED), Depot(1, "front"), picks)
    with pytest.raises(OracleTooLarge):
        oracle_optimal(inst)
