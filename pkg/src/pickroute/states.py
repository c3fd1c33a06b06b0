"""Boundary states of partial tour subgraphs and their transition tables.

A boundary state records, for the cross-aisle vertices of the current aisle
(``a`` back, ``b`` front for one block; ``a`` back, ``b`` middle, ``c`` front
for two blocks), the degree parity of each vertex and how the touched
vertices are distributed over connected components.  Two special states
exist: the initial state (nothing built yet) and the terminal state (a
closed tour subgraph that needs nothing further).

Every table is generated from the algebra in this module.  Entries carry one
next state and action per *context*, because a subaisle without picks
changes what a vertical configuration does:

* vertical tables: context 0 = subaisle has picks, 1 = subaisle is empty;
* combined tables: context ``lower_empty + 2 * upper_empty`` (single block
  uses 0/1 only);
* horizontal tables ignore the context.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional, Sequence

import numpy as np

from .configs import (SINGLE_HORIZONTAL, TWO_HORIZONTAL, VerticalConfig, horizontal_label,
                      is_closing)

V = VerticalConfig
ZERO, ODD, EVEN = 0, 1, 2
MARKS = "0UE"
VERTEX_NAMES = {1: "ab", 2: "abc"}
N_CONTEXTS = 4

# subaisle endpoints as (back, front) vertex indices
SINGLE_AISLE = (0, 1)
UPPER_AISLE = (0, 1)
LOWER_AISLE = (1, 2)


@dataclass(frozen=True, order=True)
class State:
    parities: tuple[int, ...]
    components: tuple[tuple[int, ...], ...] = ()
    terminal: bool = False

    @property
    def initial(self) -> bool:
        return not self.terminal and not self.components

    @property
    def regular(self) -> bool:
        return bool(self.components)

    @property
    def blocks(self) -> int:
        return len(self.parities) - 1

    def label(self) -> str:
        marks = [MARKS[p] for p in self.parities]
        n = 1 if self.terminal else len(self.components)
        parts = marks + [f"{n}C"]
        if self.blocks == 2 and len(self.components) == 2 and all(self.parities):
            names = VERTEX_NAMES[2]
            single = next(c for c in self.components if len(c) == 1)
            pair = next(c for c in self.components if len(c) == 2)
            parts.append(f"{names[single[0]]}-{''.join(names[i] for i in pair)}")
        return "(" + ",".join(parts) + ")"

    def __str__(self) -> str:
        return self.label()


def initial_state(blocks: int) -> State:
    return State((ZERO,) * (blocks + 1))


def terminal_state(blocks: int) -> State:
    return State((ZERO,) * (blocks + 1), (), True)


def _make(parities: Sequence[int], components: Iterable[Iterable[int]]) -> State:
    comps = tuple(sorted(tuple(sorted(c)) for c in components if c))
    if not comps:
        return State(tuple(parities))
    return State(tuple(parities), comps)


def _set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@lru_cache(maxsize=None)
def regular_states(blocks: int) -> tuple[State, ...]:
    """All reachable classes other than initial and terminal (5 or 23)."""
    n = blocks + 1
    out = set()
    for par in product((ZERO, ODD, EVEN), repeat=n):
        touched = [i for i in range(n) if par[i]]
        if not touched:
            continue
        for part in _set_partitions(touched):
            # an odd vertex needs a partner of odd degree in its own component
            if all(sum(par[i] == ODD for i in blk) % 2 == 0 for blk in part):
                out.add(_make(par, part))
    if blocks == 1:
        order = ["(U,U,1C)", "(E,0,1C)", "(0,E,1C)", "(E,E,1C)", "(E,E,2C)"]
        by_label = {s.label(): s for s in out}
        return tuple(by_label[x] for x in order)
    return tuple(sorted(out, key=lambda s: (len(s.components), s.label())))


@lru_cache(maxsize=None)
def all_states(blocks: int) -> tuple[State, ...]:
    """Regular states followed by the initial and the terminal state."""
    return regular_states(blocks) + (initial_state(blocks), terminal_state(blocks))


def parse_state(label: str, blocks: int) -> State:
    for s in all_states(blocks):
        if s.label() == label:
            return s
    raise ValueError(f"unknown {blocks}-block state {label!r}")


def add_degree(parity: int, k: int) -> int:
    if k == 0:
        return parity
    if k % 2 == 0:
        return EVEN if parity == ZERO else parity
    return ODD if parity in (ZERO, EVEN) else EVEN


# --------------------------------------------------------------------------
# transition algebra


def apply_vertical(state: State, cfg: VerticalConfig, back: int, front: int) -> Optional[State]:
    """Context-free effect of a vertical configuration on subaisle (back, front).

    Picks are assumed present; gap attaches each endpoint to its own side.
    """
    cfg = V(cfg)
    if state.terminal:
        return state if cfg is V.NONE else None
    if cfg is V.NONE:
        return state
    par = list(state.parities)
    comps = [set(c) for c in state.components]

    def component_of(x):
        for c in comps:
            if x in c:
                return c
        c = {x}
        comps.append(c)
        return c

    if cfg in (V.ONE_PASS, V.TWO_PASS):
        k = 1 if cfg is V.ONE_PASS else 2
        par[back] = add_degree(par[back], k)
        par[front] = add_degree(par[front], k)
        cu, cv = component_of(back), component_of(front)
        if cu is not cv:
            cu |= cv
            comps.remove(cv)
    else:
        ends = {V.TOP: (back,), V.BOTTOM: (front,), V.GAP: (back, front)}[cfg]
        for x in ends:
            par[x] = add_degree(par[x], 2)
            component_of(x)
    return _make(par, comps)


def vertical_in_context(state: State, cfg: VerticalConfig, back: int, front: int,
                        empty: bool) -> Optional[State]:
    """Effect of a vertical configuration given whether the subaisle holds picks.

    In an empty subaisle top, bottom and gap place no edges; none is only
    allowed there.
    """
    cfg = V(cfg)
    if empty and cfg in (V.TOP, V.BOTTOM, V.GAP, V.NONE):
        return state
    if not empty and cfg is V.NONE:
        return None
    return apply_vertical(state, cfg, back, front)


def apply_horizontal(state: State, h: Sequence[int], allow_new: bool = True) -> Optional[State]:
    """Add ``h[i]`` edges leaving boundary vertex ``i`` to the next aisle.

    The all-zero configuration closes the tour (regular state with even
    parities and one component -> terminal); on the initial state it skips
    an aisle.  With ``allow_new`` an untouched vertex may start a new
    component through a doubled edge.
    """
    if state.terminal:
        return state if is_closing(h) else None
    if state.initial:
        return state if is_closing(h) else None
    par = state.parities
    for p, k in zip(par, h):
        if (p == ODD) != (k % 2 == 1):
            return None
    if is_closing(h):
        return terminal_state(state.blocks) if len(state.components) == 1 else None
    comps = []
    for c in state.components:
        carried = [i for i in c if h[i] > 0]
        if not carried:
            return None
        comps.append(carried)
    for i, k in enumerate(h):
        if k and par[i] == ZERO:
            if not allow_new:
                return None
            comps.append([i])
    return _make([(ZERO, ODD, EVEN)[k] for k in h], comps)


@dataclass(frozen=True)
class CombinedAction:
    """A horizontal configuration together with the vertical configuration of each subaisle."""

    horizontal: tuple[int, ...]
    lower: VerticalConfig
    upper: Optional[VerticalConfig] = None

    def label(self) -> str:
        parts = [horizontal_label(self.horizontal), self.lower.value]
        if self.upper is not None:
            parts.append(self.upper.value)
        return "|".join(parts)


@dataclass(frozen=True)
class StepContext:
    """What a single step needs to know about the aisle being processed.

    ``subaisle`` selects the endpoints of a vertical action (``single``,
    ``lower`` or ``upper``); ``empty`` lists emptiness of the relevant
    subaisles (lower first).  ``final`` means nothing remains to the right.
    """

    blocks: int = 1
    subaisle: str = "single"
    empty: tuple[bool, ...] = (False,)
    final: bool = False
    allow_new: Optional[bool] = None


def _endpoints(subaisle: str):
    return {"single": SINGLE_AISLE, "lower": LOWER_AISLE, "upper": UPPER_AISLE}[subaisle]


def _combined_step(state: State, action: CombinedAction, empty: Sequence[bool],
                   blocks: int, context_free: bool) -> Optional[State]:
    if blocks == 1:
        steps = [(action.lower, SINGLE_AISLE, empty[0])]
    else:
        steps = [(action.lower, LOWER_AISLE, empty[0]), (action.upper, UPPER_AISLE, empty[1])]
    s: Optional[State] = state
    for cfg, (u, v), emp in steps:
        s = apply_vertical(s, cfg, u, v) if context_free else vertical_in_context(s, cfg, u, v, emp)
        if s is None:
            return None
    return apply_horizontal(s, action.horizontal, allow_new=(blocks == 1))


def step_state(state: State, action, context: StepContext) -> Optional[State]:
    """Apply one vertical, horizontal or combined action; ``None`` marks an invalid move."""
    if isinstance(action, CombinedAction):
        nxt = _combined_step(state, action, context.empty, context.blocks, context_free=False)
        if nxt is None or context.final != is_closing(action.horizontal):
            return nxt if nxt is not None and nxt.initial and not context.final else None
        return None if nxt.initial else nxt
    if isinstance(action, (V, str)) and not isinstance(action, tuple):
        u, v = _endpoints(context.subaisle)
        return vertical_in_context(state, V(action), u, v, context.empty[0])
    h = tuple(action)
    if is_closing(h) and not context.final and not state.initial:
        return None
    if not is_closing(h) and context.final:
        return None
    allow_new = context.allow_new if context.allow_new is not None else context.blocks == 1
    return apply_horizontal(state, h, allow_new=allow_new)


# --------------------------------------------------------------------------
# the deterministic vertical rule


def required_vertical(back_parity: int, front_parity: int, back_connected: bool,
                      front_connected: bool, empty: bool) -> VerticalConfig:
    """Vertical configuration forced by the degrees a subaisle's endpoints get elsewhere.

    Parities are those contributed by all non-vertical edges of this
    subaisle (0 = none, 1 = odd, 2 = even and positive).  An endpoint is
    *connected* when the rest of the tour subgraph reaches it.
    """
    odd_b, odd_f = back_parity == ODD, front_parity == ODD
    if odd_b and odd_f:
        return V.ONE_PASS
    if odd_b != odd_f:
        raise ValueError("exactly one odd endpoint: no vertical configuration fits")
    if empty:
        return V.NONE
    if back_connected and front_connected:
        return V.GAP
    if back_connected:
        return V.TOP
    if front_connected:
        return V.BOTTOM
    raise ValueError("non-empty subaisle with neither endpoint reachable")


# --------------------------------------------------------------------------
# table generation

VARIANTS = (
    "single-original-vertical", "single-original-horizontal", "single-combined",
    "two-original-lower", "two-original-upper", "two-original-horizontal",
    "two-mod1-lower", "two-mod1-upper", "two-combined",
)

SINGLE_VERTICALS = (V.ONE_PASS, V.TOP, V.BOTTOM, V.GAP)
TWO_VERTICALS = (V.ONE_PASS, V.TOP, V.BOTTOM, V.GAP, V.TWO_PASS, V.NONE)
MOD1_VERTICALS = (V.ONE_PASS, V.TOP, V.BOTTOM, V.GAP, V.NONE)
# per subaisle, only configurations that differ in effect are considered
_NONEMPTY_OPTIONS = (V.ONE_PASS, V.TOP, V.BOTTOM, V.GAP)
_EMPTY_OPTIONS = (V.NONE, V.ONE_PASS)
# (cheaper, dearer) pairs valid for every geometry with the same effect
_DOMINATES = {(V.GAP, V.TOP), (V.GAP, V.BOTTOM), (V.NONE, V.ONE_PASS)}


@dataclass(frozen=True)
class Transition:
    from_state: State
    to_state: State
    horizontal: Optional[tuple[int, ...]] = None
    vertical_lower: Optional[VerticalConfig] = None
    vertical_upper: Optional[VerticalConfig] = None
    # per context: the action actually taken, or None when invalid there
    options: tuple = ()
    # per context next state when it differs from ``to_state`` (vertical tables)
    next_by_context: tuple = ()

    def action_label(self) -> str:
        parts = []
        if self.horizontal is not None:
            parts.append(horizontal_label(self.horizontal))
        parts += [v.value for v in (self.vertical_lower, self.vertical_upper) if v is not None]
        return "|".join(parts)


@dataclass
class TransitionTable:
    variant: str
    blocks: int
    kind: str  # vertical, horizontal or combined
    final: bool
    entries: list[Transition] = field(default_factory=list)

    @property
    def states(self) -> tuple[State, ...]:
        return all_states(self.blocks)

    @property
    def evaluation_count(self) -> int:
        """Entries per stage when every regular state is reachable."""
        return sum(1 for t in self.entries if t.from_state.regular)

    def lookup(self, state: State, action_label: str) -> Optional[Transition]:
        for t in self.entries:
            if t.from_state == state and t.action_label() == action_label:
                return t
        return None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["state", "horizontal", "vertical_lower", "vertical_upper", "annotation",
                    "next_state"])
        for t in self.entries:
            verts = [t.vertical_lower, t.vertical_upper]
            w.writerow([t.from_state.label(),
                        horizontal_label(t.horizontal) if t.horizontal is not None else "",
                        *(v.value if v is not None else "" for v in verts),
                        "/".join(v.roman for v in verts if v is not None),
                        t.to_state.label()])
        return buf.getvalue()


def _vertical_table(variant: str, blocks: int, endpoints, configs, prune_to_gap: bool):
    u, v = endpoints
    table = TransitionTable(variant, blocks, "vertical", False)
    for s in all_states(blocks):
        if s.terminal:
            table.entries.append(Transition(s, s, None, V.NONE, options=(None, V.NONE)))
            continue
        for cfg in configs:
            nxt = apply_vertical(s, cfg, u, v)
            if nxt is None:
                continue
            if (prune_to_gap and cfg in (V.TOP, V.BOTTOM) and nxt != s
                    and apply_vertical(s, V.GAP, u, v) == nxt):
                # gap reaches the same class and never costs more
                continue
            per_ctx = tuple(vertical_in_context(s, cfg, u, v, emp) for emp in (False, True))
            opts = tuple(cfg if r is not None else None for r in per_ctx)
            lower, upper = (None, cfg) if blocks == 2 and endpoints == UPPER_AISLE else (cfg, None)
            table.entries.append(Transition(s, nxt, None, lower, upper, options=opts,
                                            next_by_context=per_ctx))
    return table


def _horizontal_table(variant: str, blocks: int, final: bool, skip: bool):
    table = TransitionTable(variant, blocks, "horizontal", final)
    configs = SINGLE_HORIZONTAL if blocks == 1 else TWO_HORIZONTAL
    for s in all_states(blocks):
        for h in configs:
            if is_closing(h) != final and not (skip and s.initial and not final):
                continue
            if final and s.initial:
                continue
            nxt = apply_horizontal(s, h, allow_new=(blocks == 1))
            if nxt is not None:
                table.entries.append(Transition(s, nxt, h, options=(h,)))
    return table


def _contexts(blocks: int):
    if blocks == 1:
        return [(False,), (True,)]
    return [(False, False), (True, False), (False, True), (True, True)]


def _dominated(a: tuple, b: tuple) -> bool:
    """True when option ``b`` is never cheaper than ``a`` (and they differ)."""
    return a != b and all(x == y or (x, y) in _DOMINATES for x, y in zip(a, b))


def _touches(option: tuple, vertex: int, blocks: int) -> bool:
    ends = [SINGLE_AISLE] if blocks == 1 else [LOWER_AISLE, UPPER_AISLE]
    for cfg, (u, v) in zip(option, ends):
        if cfg in (V.ONE_PASS, V.TWO_PASS, V.GAP) and vertex in (u, v):
            return True
        if (cfg is V.TOP and vertex == u) or (cfg is V.BOTTOM and vertex == v):
            return True
    return False


def _depot_vertex_index(depot_cross: str, blocks: int) -> int:
    if blocks == 1:
        return {"back": 0, "front": 1}[depot_cross]
    return {"back": 0, "middle": 1, "front": 2}[depot_cross]


def _resolve(state: State, h, empty, blocks: int, depot_cross: str) -> dict:
    """Cheapest vertical option per reachable class for a combined cell under one context."""
    per_sub = [_EMPTY_OPTIONS if e else _NONEMPTY_OPTIONS for e in empty]
    found: dict[State, list[tuple]] = {}
    for opt in product(*per_sub):
        act = CombinedAction(h, *opt)
        nxt = _combined_step(state, act, empty, blocks, context_free=False)
        if nxt is not None:
            found.setdefault(nxt, []).append(opt)
    chosen = {}
    for nxt, opts in found.items():
        best = [o for o in opts if not any(_dominated(p, o) for p in opts)]
        if len(best) > 1:
            # only the initial state closing in a lone aisle gets here: the walk must
            # reach the depot, so keep the option touching its cross-aisle vertex
            dv = _depot_vertex_index(depot_cross, blocks)
            best = [o for o in best if _touches(o, dv, blocks)]
            if not best:
                continue  # the depot aisle cannot look like this
            if len(best) > 1:
                raise AssertionError(f"ambiguous vertical options for {state} {h}: {best}")
        chosen[nxt] = best[0]
    return chosen


def _combined_table(variant: str, blocks: int, final: bool, depot_cross: str, skip: bool):
    table = TransitionTable(variant, blocks, "combined", final)
    configs = SINGLE_HORIZONTAL if blocks == 1 else TWO_HORIZONTAL
    vopts = (V.ONE_PASS, V.TOP, V.BOTTOM, V.GAP, V.NONE)
    for s in all_states(blocks):
        for h in configs:
            if is_closing(h) != final and not (skip and s.initial and not final):
                continue
            # context-free existence of the cell
            reach = set()
            for opt in product(vopts, repeat=blocks):
                nxt = _combined_step(s, CombinedAction(h, *opt), (False,) * blocks, blocks, True)
                if nxt is not None:
                    reach.add(nxt)
            if not reach:
                continue
            if len(reach) > 1 and not s.initial:
                raise AssertionError(f"cell {s} {h} is not deterministic: {reach}")
            per_ctx = [_resolve(s, h, empty, blocks, depot_cross) for empty in _contexts(blocks)]
            for nxt in sorted(set().union(*per_ctx)):
                if nxt.initial != (is_closing(h) and not final):
                    continue  # closing mid-warehouse, or skipping at the end
                options = tuple(CombinedAction(h, *r[nxt]) if nxt in r else None for r in per_ctx)
                shown = next(o for o in options if o is not None)
                table.entries.append(Transition(s, nxt, h, shown.lower, shown.upper,
                                                options=options))
    return table


@lru_cache(maxsize=None)
def generate_transition_table(variant: str, final: bool = False, depot_cross: str = "front",
                              skip: Optional[bool] = None) -> TransitionTable:
    """Build one transition table.

    ``final`` selects the closing version of horizontal and combined tables
    (only the all-zero configuration, into the terminal state); vertical
    tables are the same at every stage.  ``depot_cross`` only matters for
    combined tables, where the initial state closing in a single aisle must
    walk to the depot's cross-aisle.  ``skip`` adds the entry that carries
    the initial state past an empty aisle; it defaults to on for two blocks,
    where empty aisles are kept.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown table variant {variant!r}; choose from {', '.join(VARIANTS)}")
    if skip is None:
        skip = variant.startswith("two")
    if variant == "single-original-vertical":
        return _vertical_table(variant, 1, SINGLE_AISLE, SINGLE_VERTICALS, prune_to_gap=False)
    if variant == "single-original-horizontal":
        return _horizontal_table(variant, 1, final, skip)
    if variant == "single-combined":
        return _combined_table(variant, 1, final, depot_cross, skip)
    if variant == "two-original-horizontal":
        return _horizontal_table(variant, 2, final, skip)
    if variant == "two-combined":
        return _combined_table(variant, 2, final, depot_cross, skip)
    configs = TWO_VERTICALS if "original" in variant else MOD1_VERTICALS
    ends = LOWER_AISLE if variant.endswith("lower") else UPPER_AISLE
    return _vertical_table(variant, 2, ends, configs, prune_to_gap=True)


# --------------------------------------------------------------------------
# flat arrays for the DP kernels


@dataclass(frozen=True)
class CompiledTable:
    """Array form of a table.

    Entries of state ``s`` occupy ``ptr[s]:ptr[s + 1]``.  ``nxt[e, ctx]`` is
    the next state index (-1 when invalid) and ``act[e, ctx]`` indexes
    ``actions``.  ``rank[e]`` orders entries by action label for
    deterministic tie-breaking.
    """

    table: TransitionTable
    actions: tuple
    ptr: np.ndarray
    nxt: np.ndarray
    act: np.ndarray
    rank: np.ndarray


def _ctx_action(t: Transition, kind: str, ctx: int):
    if kind == "horizontal":
        return t.horizontal
    opts = t.options
    if kind == "vertical":
        return opts[min(ctx, 1)]
    return opts[ctx] if ctx < len(opts) else None


def _action_key(a) -> str:
    if isinstance(a, CombinedAction):
        return a.label()
    if isinstance(a, V):
        return a.value
    return horizontal_label(a)


@lru_cache(maxsize=None)
def compile_table(variant: str, final: bool = False, depot_cross: str = "front",
                  skip: Optional[bool] = None) -> CompiledTable:
    table = generate_transition_table(variant, final, depot_cross, skip)
    states = all_states(table.blocks)
    index = {s: i for i, s in enumerate(states)}
    actions: list = []
    seen: dict = {}
    rows = sorted(table.entries, key=lambda t: (index[t.from_state], t.action_label()))
    ptr = np.zeros(len(states) + 1, dtype=np.int64)
    nxt = np.full((len(rows), N_CONTEXTS), -1, dtype=np.int64)
    act = np.zeros((len(rows), N_CONTEXTS), dtype=np.int64)
    for e, t in enumerate(rows):
        ptr[index[t.from_state] + 1] += 1
        for ctx in range(N_CONTEXTS):
            a = _ctx_action(t, table.kind, ctx)
            if a is None:
                continue
            key = _action_key(a)
            if key not in seen:
                seen[key] = len(actions)
                actions.append(a)
            to = t.next_by_context[min(ctx, 1)] if t.next_by_context else t.to_state
            nxt[e, ctx] = index[to]
            act[e, ctx] = seen[key]
    ptr = np.cumsum(ptr)
    labels = sorted({t.action_label() for t in rows})
    rank = np.array([labels.index(t.action_label()) for t in rows], dtype=np.int64)
    tbl = TransitionTable(table.variant, table.blocks, table.kind, table.final, rows)
    return CompiledTable(tbl, tuple(actions), ptr, nxt, act, rank)
