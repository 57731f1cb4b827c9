"""Ball-in-box trapdoor channel and its relabeling to the binary EMS channel.

A box of capacity ``beta`` holds red and blue balls. Each step one ball is
thrown in and one of the ``beta + 1`` resident balls is drawn out. The state
is the red count ``r``; it plays the role of the battery level when
consumption/request symbol 1 is relabeled blue and 0 red.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .errors import DomainError, InvariantViolation
from .model import EmsConfig


class Color(enum.Enum):
    RED = "red"
    BLUE = "blue"

    @property
    def bl(self) -> int:
        return 1 if self is Color.BLUE else 0


@dataclass(frozen=True)
class TrapdoorBox:
    capacity: int
    red_count: int

    def __post_init__(self):
        if self.capacity < 0:
            raise DomainError(f"capacity must be >= 0, got {self.capacity}")
        if not 0 <= self.red_count <= self.capacity:
            raise DomainError(f"red_count {self.red_count} outside [0, {self.capacity}]")

    @property
    def blue_count(self) -> int:
        return self.capacity - self.red_count


def trapdoor_step(box: TrapdoorBox, in_ball: Color, out_ball: Color) -> Optional[TrapdoorBox]:
    """Insert ``in_ball`` then extract ``out_ball``; ``None`` if infeasible.

    Two feasibility checks are made: the red-count recursion
    ``r' = r + bl(out) - bl(in)`` must stay in ``[0, capacity]``, and the box
    must actually contain a ball of the extracted color after insertion.
    They are equivalent; disagreement raises ``InvariantViolation``.
    """
    r = box.red_count
    r_next = r + out_ball.bl - in_ball.bl
    count_ok = 0 <= r_next <= box.capacity

    red = r + (in_ball is Color.RED)
    blue = box.blue_count + (in_ball is Color.BLUE)
    present = red if out_ball is Color.RED else blue
    physical_ok = present >= 1

    if count_ok != physical_ok:
        raise InvariantViolation(f"count and physical feasibility disagree at {box}, {in_ball}, {out_ball}")
    if not count_ok:
        return None
    return TrapdoorBox(box.capacity, r_next)


def trapdoor_stable(inputs: Sequence[Color], outputs: Sequence[Color], box: TrapdoorBox) -> bool:
    """True iff every draw in ``outputs`` is feasible starting from ``box``."""
    if len(inputs) != len(outputs):
        raise DomainError("input and output ball sequences differ in length")
    for a, b in zip(inputs, outputs):
        box = trapdoor_step(box, a, b)
        if box is None:
            return False
    return True


def _require_binary(cfg: EmsConfig) -> None:
    if cfg.alpha != 1 or cfg.gamma != 1:
        raise DomainError(
            f"trapdoor relabeling needs alpha = gamma = 1, got alpha={cfg.alpha}, gamma={cfg.gamma}"
        )


def _to_color(v: int) -> Color:
    if v == 1:
        return Color.BLUE
    if v == 0:
        return Color.RED
    raise DomainError(f"symbol {v} has no ball color")


def ems_to_trapdoor(
    x: Sequence[int], y: Sequence[int], cfg: EmsConfig
) -> Tuple[Tuple[Color, ...], Tuple[Color, ...], int]:
    _require_binary(cfg)
    return tuple(map(_to_color, x)), tuple(map(_to_color, y)), cfg.s0


def trapdoor_to_ems(
    inputs: Sequence[Color], outputs: Sequence[Color], r0: int
) -> Tuple[Tuple[int, ...], Tuple[int, ...], int]:
    return tuple(c.bl for c in inputs), tuple(c.bl for c in outputs), r0
