"""Exact routing in two-block warehouses (front, middle and back cross-aisle).

``original`` processes each aisle in three stages: lower subaisle, upper
subaisle, then the horizontal edges.  ``mod1`` is the same sweep with the
double traversal removed from the vertical tables.  ``mod2`` collapses the
three stages into one.  All aisles are kept, since an empty subaisle can
still carry travel between cross-aisles.
"""
from __future__ import annotations

from typing import Optional

from ._dp import Solution, StageProgram, prepare, run_program, two_block_stages
from .geometry import PickInstance, anchor_depot

VARIANTS = ("original", "mod1", "mod2")


def degenerate_guard(inst: PickInstance, variant: str = "mod2") -> str:
    """Variant that actually runs.

    With at most one non-empty aisle (after placing the depot) a tour may
    need to traverse a subaisle twice, which the 2pass-free tables cannot
    express, so the original variant takes over.
    """
    if variant == "original":
        return variant
    if sum(anchor_depot(inst).nonempty()) <= 1:
        return "original"
    return variant


def build_program(inst: PickInstance, variant: str) -> StageProgram:
    if inst.blocks != 2:
        raise ValueError("two-block solver needs a two-block layout")
    if variant not in VARIANTS:
        raise ValueError(f"unknown two-block variant {variant!r}")
    norm = anchor_depot(inst)
    return prepare(StageProgram(norm, two_block_stages(norm, variant), inst.depot.cross))


def solve_two(inst: PickInstance, variant: str = "mod2", backend: Optional[str] = None,
              reconstruct: bool = True, guard: bool = True) -> Solution:
    runs = degenerate_guard(inst, variant) if guard else variant
    sol = run_program(build_program(inst, runs), f"two-{variant}", backend, reconstruct)
    sol.counters["delegated"] = runs != variant
    return sol
