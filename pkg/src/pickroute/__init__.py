"""Exact order-picker routing in single- and two-block rectangular warehouses."""
from ._dp import ReconstructionError, Solution
from .configs import VerticalConfig, gap_split, horizontal_cost, vertical_cost
from .geometry import (Depot, InstanceError, Pick, PickInstance, WarehouseLayout, anchor_depot,
                       compress_empty_aisles, load_instance, validate_instance)
from .oracle import oracle_optimal
from .solver_single import solve_single
from .solver_two import degenerate_guard, solve_two
from .states import generate_transition_table, required_vertical, step_state

ALGORITHMS = ("single-original", "single-modified", "two-original", "two-mod1", "two-mod2")


def solve(inst: PickInstance, algorithm: str, **kwargs) -> Solution:
    """Run one of :data:`ALGORITHMS` on an instance."""
    family, _, variant = algorithm.partition("-")
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    if family == "single":
        return solve_single(inst, variant, **kwargs)
    return solve_two(inst, variant, **kwargs)


def algorithms_for(blocks: int) -> tuple[str, ...]:
    prefix = "single-" if blocks == 1 else "two-"
    return tuple(a for a in ALGORITHMS if a.startswith(prefix))


__version__ = "0.1.0"
