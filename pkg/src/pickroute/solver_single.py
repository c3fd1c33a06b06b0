"""Exact routing in single-block warehouses.

``original`` alternates a vertical stage and a horizontal stage per aisle;
``modified`` applies each horizontal configuration together with the
vertical configuration it forces, one stage per aisle.  Both run on the
instance with the depot anchored and empty aisles removed.
"""
from __future__ import annotations

from typing import Optional

from ._dp import Solution, StageProgram, prepare, run_program, single_block_stages
from .geometry import PickInstance, anchor_depot, compress_empty_aisles

VARIANTS = ("original", "modified")


def build_program(inst: PickInstance, variant: str, compress: bool = True) -> StageProgram:
    """Stage program for one variant; ``compress=False`` keeps empty aisles as no-op stages."""
    if inst.blocks != 1:
        raise ValueError("single-block solver needs a single-block layout")
    if variant not in VARIANTS:
        raise ValueError(f"unknown single-block variant {variant!r}")
    norm = anchor_depot(inst)
    if compress:
        norm = compress_empty_aisles(norm)
    stages = single_block_stages(norm, combined=(variant == "modified"))
    return prepare(StageProgram(norm, stages, inst.depot.cross, skip_initial=not compress))


def solve_single(inst: PickInstance, variant: str = "modified", backend: Optional[str] = None,
                 reconstruct: bool = True, compress: bool = True) -> Solution:
    program = build_program(inst, variant, compress)
    return run_program(program, f"single-{variant}", backend, reconstruct)
