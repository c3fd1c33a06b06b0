"""Brute-force reference: shortest closed walk through the depot and all picks.

Closed walks may revisit vertices and edges, so the optimum equals the best
Hamiltonian cycle over shortest-path distances between required vertices.
That cycle is found with the Held-Karp subset DP.
"""
from __future__ import annotations

from itertools import combinations

import networkx as nx

from .geometry import PickInstance, depot_vertex, validate_instance, vertex_name

MAX_REQUIRED = 12


class OracleTooLarge(ValueError):
    pass


def warehouse_graph(inst: PickInstance) -> nx.Graph:
    """Cross-aisle vertices, pick vertices and the segments joining them (integer units)."""
    validate_instance(inst)
    sc = inst.layout.scale()
    m = inst.layout.aisles
    h = sc.subaisle
    g = nx.Graph()
    crosses = "ab" if inst.blocks == 1 else "abc"
    for name in crosses:
        for j in range(1, m):
            g.add_edge(vertex_name(name, j), vertex_name(name, j + 1), length=sc.spacing)
    if inst.blocks == 1:
        subs = [(None, "a", "b")]
    else:
        subs = [("lower", "b", "c"), ("upper", "a", "b")]
    for j in range(1, m + 1):
        for block, back, front in subs:
            pts = sorted((sc.slot_position(p.slot, p.block), p.label())
                         for p in inst.picks if p.aisle == j and p.block == block)
            chain = [(0, vertex_name(front, j))] + pts + [(h, vertex_name(back, j))]
            for (y1, u), (y2, v) in zip(chain, chain[1:]):
                g.add_edge(u, v, length=y2 - y1)
    return g


def oracle_optimal(inst: PickInstance) -> int:
    """Optimal closed-walk length in integer units of ``inst.layout.scale()``."""
    required = [depot_vertex(inst)] + [p.label() for p in inst.picks]
    if len(required) > MAX_REQUIRED:
        raise OracleTooLarge(f"{len(required)} required vertices exceed the cap of {MAX_REQUIRED}")
    g = warehouse_graph(inst)
    dist = [[0] * len(required) for _ in required]
    for i, u in enumerate(required):
        d = nx.single_source_dijkstra_path_length(g, u, weight="length")
        for k, v in enumerate(required):
            dist[i][k] = d[v]
    return held_karp(dist)


def held_karp(dist) -> int:
    """Shortest cycle through all nodes, starting and ending at node 0."""
    n = len(dist)
    if n == 1:
        return 0
    best = {(1 << k, k): dist[0][k] for k in range(1, n)}
    for size in range(2, n):
        for subset in combinations(range(1, n), size):
            mask = sum(1 << k for k in subset)
            for k in subset:
                prev = mask & ~(1 << k)
                best[mask, k] = min(best[prev, i] + dist[i][k] for i in subset if i != k)
    full = (1 << n) - 2
    return min(best[full, k] + dist[k][0] for k in range(1, n))
