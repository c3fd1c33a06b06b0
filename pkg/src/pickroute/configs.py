"""Vertical and horizontal edge configurations and their costs.

Costs are generic over the numeric type: the solvers pass integer units,
tests also use plain ints or Fractions.
"""
from __future__ import annotations

import enum
from itertools import product
from typing import Sequence


class VerticalConfig(str, enum.Enum):
    """Travel pattern inside one subaisle, between its back and front vertex."""

    ONE_PASS = "1pass"
    TOP = "top"
    BOTTOM = "bottom"
    GAP = "gap"
    TWO_PASS = "2pass"
    NONE = "none"

    @property
    def roman(self) -> str:
        return _ROMAN[self]

    @classmethod
    def from_roman(cls, numeral: str) -> "VerticalConfig":
        return _FROM_ROMAN[numeral]

    def __str__(self) -> str:
        return self.value


_ROMAN = dict(zip(VerticalConfig, ("i", "ii", "iii", "iv", "v", "vi")))
_FROM_ROMAN = {v: k for k, v in _ROMAN.items()}

# Horizontal configurations list edge counts from the back cross-aisle to the front one.
SINGLE_HORIZONTAL: tuple[tuple[int, ...], ...] = ((1, 1), (2, 0), (0, 2), (2, 2), (0, 0))


def _two_block_horizontal() -> tuple[tuple[int, ...], ...]:
    # every triple with an even number of single edges; 000 listed last
    cfgs = [h for h in product((0, 1, 2), repeat=3) if sum(k == 1 for k in h) % 2 == 0]
    cfgs.sort(key=lambda h: (not any(h), h))
    return tuple(cfgs)


TWO_HORIZONTAL = _two_block_horizontal()


def is_closing(cfg: Sequence[int]) -> bool:
    """True for the all-zero configuration, only legal when nothing remains to the right."""
    return not any(cfg)


def horizontal_label(cfg: Sequence[int]) -> str:
    return "".join(map(str, cfg))


def parse_horizontal(label: str) -> tuple[int, ...]:
    if not label or any(ch not in "012" for ch in label):
        raise ValueError(f"bad horizontal configuration {label!r}")
    return tuple(int(ch) for ch in label)


def vertical_cost(picks: Sequence, length, cfg: VerticalConfig):
    """Length of the vertical edges of ``cfg`` in a subaisle of the given length.

    ``picks`` are sorted distances from the front vertex.
    """
    cfg = VerticalConfig(cfg)
    if cfg is VerticalConfig.ONE_PASS:
        return length
    if cfg is VerticalConfig.TWO_PASS:
        return 2 * length
    if cfg is VerticalConfig.NONE:
        if picks:
            raise ValueError("'none' leaves picks in a non-empty subaisle uncovered")
        return 0 * length
    if not picks:
        return 0 * length
    if cfg is VerticalConfig.TOP:
        return 2 * (length - picks[0])
    if cfg is VerticalConfig.BOTTOM:
        return 2 * picks[-1]
    return 2 * (length - largest_gap(picks, length)[1])


def largest_gap(picks: Sequence, length) -> tuple[int, object]:
    """Index and size of the front-most largest gap in ``0, picks..., length``.

    Index ``k`` is the gap just below ``picks[k]`` (``k == len(picks)`` is the
    gap between the last pick and the back vertex).
    """
    best_k, best = 0, None
    prev = 0 * length
    for k, y in enumerate(list(picks) + [length]):
        g = y - prev
        if best is None or g > best:
            best_k, best = k, g
        prev = y
    return best_k, best


def gap_split(picks: Sequence, length) -> tuple[tuple, tuple]:
    """Split picks at the largest gap into (back-side, front-side) groups."""
    if not picks:
        return (), ()
    k, _ = largest_gap(picks, length)
    return tuple(picks[k:]), tuple(picks[:k])


def horizontal_cost(cfg: Sequence[int], spacing, spans: int = 1):
    if spans < 1:
        raise ValueError("spans must be >= 1")
    return sum(cfg) * spacing * spans
