"""Stage programs, the DP driver shared by all variants, and tour reconstruction."""
from __future__ import annotations

import gc
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import networkx as nx
import numpy as np

from . import kernel
from .configs import VerticalConfig, gap_split, horizontal_cost, horizontal_label, vertical_cost
from .geometry import NormalizedInstance, Subaisle, vertex_name
from .states import CombinedAction, CompiledTable, all_states, compile_table

V = VerticalConfig


class ReconstructionError(RuntimeError):
    """The DP produced a trace whose edges do not form a valid tour subgraph."""


@dataclass(frozen=True)
class Stage:
    kind: str  # vertical, horizontal or combined
    variant: str
    final: bool
    aisle: int  # index into NormalizedInstance.aisles
    subaisle: Optional[str] = None  # single, lower or upper for vertical stages
    span: int = 1


@dataclass
class TraceStep:
    stage: int
    kind: str
    aisle: int  # original aisle number
    from_state: str
    action: str
    to_state: str
    cost: int
    action_obj: object = field(default=None, repr=False, compare=False)

    def as_dict(self, denominator: int) -> dict:
        return {"stage": self.stage, "kind": self.kind, "aisle": self.aisle,
                "from": self.from_state, "action": self.action, "to": self.to_state,
                "cost": self.cost / denominator}


@dataclass
class Solution:
    algorithm: str
    length_units: int
    denominator: int
    trace: list[TraceStep]
    edges: list[tuple[str, str, int]]
    walk: list[str]
    counters: dict = field(default_factory=dict)

    @property
    def length(self) -> Fraction:
        return Fraction(self.length_units, self.denominator)

    def to_json(self) -> dict:
        return {
            "length": float(self.length),
            "trace": [t.as_dict(self.denominator) for t in self.trace],
            "walk": self.walk,
            "counters": dict(self.counters),
        }


# --------------------------------------------------------------------------
# merged table arrays


@dataclass(frozen=True)
class TableBundle:
    keys: tuple
    tables: tuple[CompiledTable, ...]
    base: dict  # key -> offset of the table's ptr block
    ptr: np.ndarray
    nxt: np.ndarray
    act: np.ndarray
    rank: np.ndarray
    entry_offset: dict
    n_states: int


@lru_cache(maxsize=None)
def table_bundle(keys: tuple) -> TableBundle:
    """Concatenate compiled tables ``(variant, final, depot_cross)`` for one sweep."""
    tables = tuple(compile_table(*k) for k in keys)
    n = len(tables[0].ptr) - 1
    ptrs, nxts, acts, ranks = [], [], [], []
    base, offsets = {}, {}
    off = 0
    for k, t in zip(keys, tables):
        base[k] = len(ptrs) * (n + 1)
        offsets[k] = off
        ptrs.append(t.ptr + off)
        nxts.append(t.nxt.ravel())
        acts.append(t.act.ravel())
        ranks.append(t.rank)
        off += len(t.rank)
    return TableBundle(keys, tables, base, np.ascontiguousarray(np.concatenate(ptrs)),
                       np.ascontiguousarray(np.concatenate(nxts)),
                       np.ascontiguousarray(np.concatenate(acts)),
                       np.ascontiguousarray(np.concatenate(ranks)), offsets, n)


# --------------------------------------------------------------------------
# stage programs


@dataclass
class StageProgram:
    norm: NormalizedInstance
    stages: list[Stage]
    depot_cross: str
    bundle: TableBundle = None
    stage_base: np.ndarray = None
    stage_ctx: np.ndarray = None
    cost: np.ndarray = None
    precompute_ns: int = 0
    skip_initial: Optional[bool] = None

    def key(self, st: Stage) -> tuple:
        cross = self.depot_cross if st.kind == "combined" and st.final else "front"
        return (st.variant, st.final, cross, self.skip_initial)


def _subaisles(norm: NormalizedInstance, k: int) -> dict[str, Subaisle]:
    subs = norm.subaisles[k]
    if len(subs) == 1:
        return {"single": subs[0]}
    return {"lower": subs[0], "upper": subs[1]}


def _ctx(norm: NormalizedInstance, st: Stage) -> int:
    subs = _subaisles(norm, st.aisle)
    if st.kind == "vertical":
        return int(subs[st.subaisle].empty)
    if st.kind == "combined":
        if norm.blocks == 1:
            return int(subs["single"].empty)
        return int(subs["lower"].empty) + 2 * int(subs["upper"].empty)
    return 0


def _vertical_units(sub: Subaisle, cfg: VerticalConfig) -> int:
    if cfg is V.NONE and not sub.empty:
        return 0  # never selected: such entries are invalid in this context
    return vertical_cost(sub.positions, sub.length, cfg)


def action_cost(norm: NormalizedInstance, st: Stage, action) -> int:
    subs = _subaisles(norm, st.aisle)
    spacing = norm.scale.spacing
    if st.kind == "vertical":
        return _vertical_units(subs[st.subaisle], action)
    if st.kind == "horizontal":
        return horizontal_cost(action, spacing, st.span)
    total = horizontal_cost(action.horizontal, spacing, st.span)
    if norm.blocks == 1:
        return total + _vertical_units(subs["single"], action.lower)
    return (total + _vertical_units(subs["lower"], action.lower)
            + _vertical_units(subs["upper"], action.upper))


def prepare(program: StageProgram) -> StageProgram:
    """Resolve tables and precompute every action cost (timed separately)."""
    t0 = time.perf_counter_ns()
    keys = tuple(dict.fromkeys(program.key(st) for st in program.stages))
    bundle = table_bundle(keys)
    by_key = dict(zip(bundle.keys, bundle.tables))
    width = max(len(t.actions) for t in bundle.tables)
    cost = np.zeros((len(program.stages), width), dtype=np.int64)
    base = np.empty(len(program.stages), dtype=np.int64)
    ctx = np.empty(len(program.stages), dtype=np.int64)
    for i, st in enumerate(program.stages):
        k = program.key(st)
        base[i] = bundle.base[k]
        ctx[i] = _ctx(program.norm, st)
        for a, action in enumerate(by_key[k].actions):
            cost[i, a] = action_cost(program.norm, st, action)
    program.bundle, program.stage_base, program.stage_ctx, program.cost = bundle, base, ctx, cost
    program.precompute_ns = time.perf_counter_ns() - t0
    return program


def single_block_stages(norm: NormalizedInstance, combined: bool) -> list[Stage]:
    stages = []
    last = max(k for k, ne in enumerate(norm.nonempty()) if ne)
    for k in range(len(norm.aisles)):
        final = k >= last
        span = 1 if k == len(norm.aisles) - 1 else norm.spans[k + 1]
        if combined:
            stages.append(Stage("combined", "single-combined", final, k, span=span))
        else:
            stages.append(Stage("vertical", "single-original-vertical", False, k, "single"))
            stages.append(Stage("horizontal", "single-original-horizontal", final, k, span=span))
    return stages


def two_block_stages(norm: NormalizedInstance, variant: str) -> list[Stage]:
    nonempty = norm.nonempty()
    last = max(k for k, ne in enumerate(nonempty) if ne)
    stages = []
    for k in range(len(norm.aisles)):
        final = k >= last
        if variant == "mod2":
            stages.append(Stage("combined", "two-combined", final, k))
            continue
        tag = "original" if variant == "original" else "mod1"
        stages.append(Stage("vertical", f"two-{tag}-lower", False, k, "lower"))
        stages.append(Stage("vertical", f"two-{tag}-upper", False, k, "upper"))
        stages.append(Stage("horizontal", "two-original-horizontal", final, k))
    return stages


# --------------------------------------------------------------------------
# running and backtracking


def run_program(program: StageProgram, algorithm: str, backend: Optional[str] = None,
                reconstruct: bool = True) -> Solution:
    if program.bundle is None:
        prepare(program)
    b = program.bundle
    states = all_states(program.norm.blocks)
    start = len(states) - 2
    term = len(states) - 1
    sweep = kernel.get_sweep(backend)
    # like timeit, keep the collector out of the measurement
    gc_was_on = gc.isenabled()
    gc.disable()
    try:
        t0 = time.perf_counter_ns()
        best, back_entry, back_state, evals = sweep(b.ptr, b.nxt, b.act, b.rank,
                                                    program.stage_base, program.stage_ctx,
                                                    program.cost, b.n_states, start)
        runtime = time.perf_counter_ns() - t0
    finally:
        if gc_was_on:
            gc.enable()
    length = int(best[term])
    if length >= kernel.INF:
        raise ReconstructionError("no closed tour reaches the terminal state")
    counters = {"stages": len(program.stages), "evals_vertical": 0, "evals_horizontal": 0,
                "evals_combined": 0}
    for st, n in zip(program.stages, evals.tolist()):
        counters[f"evals_{st.kind}"] += n
    counters["evaluations"] = int(evals.sum())
    counters["runtime_ns"] = runtime
    counters["precompute_ns"] = program.precompute_ns
    counters["backend"] = backend or kernel.BACKEND
    trace = backtrack(program, back_entry, back_state, term)
    sol = Solution(algorithm, length, program.norm.scale.denominator, trace, [], [], counters)
    if reconstruct:
        reconstruct_tour(sol, program)
    return sol


def _entry_table(program: StageProgram, st: Stage, e: int):
    k = program.key(st)
    table = program.bundle.tables[program.bundle.keys.index(k)]
    return table, e - program.bundle.entry_offset[k]


def backtrack(program: StageProgram, back_entry, back_state, term: int) -> list[TraceStep]:
    states = all_states(program.norm.blocks)
    steps = []
    s = term
    for t in range(len(program.stages) - 1, -1, -1):
        st = program.stages[t]
        e, prev = int(back_entry[t, s]), int(back_state[t, s])
        table, local = _entry_table(program, st, e)
        ctx = int(program.stage_ctx[t])
        action = table.actions[int(table.act[local, ctx])]
        steps.append(TraceStep(t, st.kind, program.norm.aisles[st.aisle], states[prev].label(),
                               _action_text(action), states[s].label(),
                               int(program.cost[t, int(table.act[local, ctx])]), action))
        s = prev
    steps.reverse()
    return steps


def _action_text(action) -> str:
    if isinstance(action, CombinedAction):
        return action.label()
    if isinstance(action, V):
        return action.value
    return horizontal_label(action)


# --------------------------------------------------------------------------
# tour reconstruction


def _chain(sub: Subaisle, back: str, front: str) -> list[tuple[int, str]]:
    pts = [(0, front)]
    for pos, lab in zip(sub.positions, sub.labels):
        pts.append((pos, lab))
    pts.append((sub.length, back))
    return pts


def _add_path(g, pts: list[tuple[int, str]], lo: int, hi: int, times: int):
    """Add ``times`` copies of every chain edge between chain indices lo..hi."""
    for (p1, u), (p2, v) in zip(pts[lo:hi], pts[lo + 1:hi + 1]):
        if u == v:
            continue
        for _ in range(times):
            g.add_edge(u, v, length=p2 - p1)


def vertical_edges(g, sub: Subaisle, back: str, front: str, cfg: VerticalConfig):
    if sub.empty and cfg in (V.TOP, V.BOTTOM, V.GAP, V.NONE):
        return
    pts = _chain(sub, back, front)
    last = len(pts) - 1
    if cfg is V.ONE_PASS:
        _add_path(g, pts, 0, last, 1)
    elif cfg is V.TWO_PASS:
        _add_path(g, pts, 0, last, 2)
    elif cfg is V.TOP:
        _add_path(g, pts, 1, last, 2)
    elif cfg is V.BOTTOM:
        _add_path(g, pts, 0, last - 1, 2)
    elif cfg is V.GAP:
        top, bottom = gap_split(sub.positions, sub.length)
        _add_path(g, pts, len(bottom) + 1, last, 2)
        _add_path(g, pts, 0, len(bottom), 2)


def reconstruct_tour(sol: Solution, program: StageProgram) -> Solution:
    """Materialise the traced actions as an edge multiset and extract a closed walk."""
    norm = program.norm
    g = nx.MultiGraph()
    g.add_node(norm.depot_vertex)
    spacing = norm.scale.spacing
    names = "ab" if norm.blocks == 1 else "abc"
    for step, st in zip(sol.trace, program.stages):
        action = step.action_obj
        j = norm.aisles[st.aisle]
        subs = _subaisles(norm, st.aisle)
        verticals = []
        horizontal = None
        if st.kind == "vertical":
            verticals = [(st.subaisle, action)]
        elif st.kind == "horizontal":
            horizontal = action
        else:
            horizontal = action.horizontal
            verticals = [("single", action.lower)] if norm.blocks == 1 else \
                [("lower", action.lower), ("upper", action.upper)]
        for which, cfg in verticals:
            back, front = {"single": ("a", "b"), "lower": ("b", "c"), "upper": ("a", "b")}[which]
            vertical_edges(g, subs[which], vertex_name(back, j), vertex_name(front, j), cfg)
        if horizontal is not None and any(horizontal):
            for i, k in enumerate(horizontal):
                for x in range(j, j + st.span):
                    for _ in range(k):
                        g.add_edge(vertex_name(names[i], x), vertex_name(names[i], x + 1),
                                   length=spacing)
    _check_tour(g, sol, norm)
    sol.edges = sorted((min(u, v), max(u, v), d["length"]) for u, v, d in g.edges(data=True))
    if g.number_of_edges():
        sol.walk = [norm.depot_vertex] + [v for _, v in nx.eulerian_circuit(g, source=norm.depot_vertex)]
    else:
        sol.walk = [norm.depot_vertex]
    return sol


def _check_tour(g, sol: Solution, norm: NormalizedInstance):
    odd = [v for v, d in g.degree() if d % 2]
    if odd:
        raise ReconstructionError(f"odd-degree vertices {odd}")
    touched = g.subgraph([v for v, d in g.degree() if d > 0] + [norm.depot_vertex])
    if not nx.is_connected(touched):
        raise ReconstructionError("tour subgraph is disconnected")
    required = {lab for subs in norm.subaisles for sub in subs for lab in sub.labels}
    missing = [v for v in required if v not in touched]
    if missing:
        raise ReconstructionError(f"picks not visited: {missing}")
    total = sum(d["length"] for _, _, d in g.edges(data=True))
    if total != sol.length_units:
        raise ReconstructionError(f"edge lengths sum to {total}, DP optimum is {sol.length_units}")


def replay(program: StageProgram, actions: list[str]) -> tuple[int, list[str]]:
    """Cost and visited state labels of a given action sequence, one action per stage.

    Raises ``ValueError`` if an action is not available from the current state.
    """
    if program.bundle is None:
        prepare(program)
    if len(actions) != len(program.stages):
        raise ValueError(f"{len(actions)} actions for {len(program.stages)} stages")
    states = all_states(program.norm.blocks)
    s = len(states) - 2
    labels = [states[s].label()]
    total = 0
    for t, (st, want) in enumerate(zip(program.stages, actions)):
        k = program.key(st)
        table = program.bundle.tables[program.bundle.keys.index(k)]
        ctx = int(program.stage_ctx[t])
        for e in range(int(table.ptr[s]), int(table.ptr[s + 1])):
            nxt = int(table.nxt[e, ctx])
            a = int(table.act[e, ctx])
            if nxt >= 0 and _action_text(table.actions[a]) == want:
                total += int(program.cost[t, a])
                s = nxt
                break
        else:
            raise ValueError(f"stage {t}: action {want!r} not available from {states[s].label()}")
        labels.append(states[s].label())
    return total, labels
