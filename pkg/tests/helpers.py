"""Instance generators and an independent tour checker shared by the test modules."""
from __future__ import annotations

from collections import Counter
from fractions import Fraction

import networkx as nx
import numpy as np

from pickroute import Depot, Pick, PickInstance, WarehouseLayout
from pickroute.geometry import depot_vertex
from pickroute.oracle import warehouse_graph

BLOCK_TAGS = {1: (None,), 2: ("lower", "upper")}

# acceptance criterion -> [(passed, detail), ...], printed at the end of the session
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def report(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((ok, detail))
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}")


def random_instance(rng: np.random.Generator, blocks: int, m: int, n_picks: int,
                    slots: int | None = None, geometry: bool = True) -> PickInstance:
    """Uniform picks without replacement on a small layout with randomised dimensions."""
    slots = slots or int(rng.integers(1, 6))
    cells = [(j, b, i) for j in range(1, m + 1) for b in BLOCK_TAGS[blocks]
             for i in range(1, slots + 1)]
    n_picks = min(n_picks, len(cells))
    chosen = rng.choice(len(cells), size=n_picks, replace=False)
    picks = tuple(Pick(cells[c][0], cells[c][2], cells[c][1]) for c in chosen.tolist())
    if geometry:
        ell = Fraction(rng.choice(["1", "2", "1/2"]))
        w = Fraction(rng.choice(["1", "3", "7/10"]))
        c = Fraction(rng.choice(["0", "1", "1/2"])) if blocks == 2 else 0
    else:
        ell, w, c = 1, 1, (1 if blocks == 2 else 0)
    crosses = ["front", "back"] + (["middle"] if blocks == 2 else [])
    depot = Depot(int(rng.integers(1, m + 1)), crosses[int(rng.integers(len(crosses)))])
    return PickInstance(WarehouseLayout(blocks, m, slots, ell, w, c), depot, picks)


def check_tour(inst: PickInstance, sol) -> None:
    """Assert the Eulerian invariants of a reconstructed solution.

    Every edge must be a segment of the warehouse graph with its true length.
    The multiset must have even degrees, be connected, cover the depot and every
    pick, and sum to the reported length.  The walk must be a closed Eulerian
    circuit of that multiset starting at the depot.
    """
    g_ref = warehouse_graph(inst)
    tour = nx.MultiGraph()
    dv = depot_vertex(inst)
    tour.add_node(dv)
    for u, v, length in sol.edges:
        assert g_ref.has_edge(u, v), f"{u}-{v} is not a warehouse segment"
        assert g_ref[u][v]["length"] == length, f"{u}-{v} has length {length}"
        tour.add_edge(u, v)
    assert all(d % 2 == 0 for _, d in tour.degree()), "odd degree"
    touched = [v for v, d in tour.degree() if d] + [dv]
    assert nx.is_connected(tour.subgraph(touched)), "disconnected"
    for p in inst.picks:
        assert p.label() in tour, f"{p.label()} not visited"
    assert sum(e[2] for e in sol.edges) == sol.length_units

    walk = sol.walk
    assert walk[0] == dv and walk[-1] == dv
    used = Counter(frozenset((u, v)) for u, v in zip(walk, walk[1:]))
    assert used == Counter(frozenset((u, v)) for u, v, _ in sol.edges)
