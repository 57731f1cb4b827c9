"""Discrete-time energy management channel with a finite battery.

Sequences are plain tuples of ints, 0-indexed. The battery recursion is
``s[i+1] = s[i] + y[i] - x[i]`` and a request sequence is stable when every
state stays in ``[0, beta]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Literal, Optional, Sequence, Tuple, Union

from .errors import DomainError, ResourceError

ConsumptionSequence = Tuple[int, ...]
RequestSequence = Tuple[int, ...]

OUTAGE = "outage"
WASTE = "waste"
ViolationKind = Literal["outage", "waste"]

DEFAULT_ENUM_CAP = 2 ** 24


@dataclass(frozen=True)
class EmsConfig:
    """Channel instance: alphabets, battery capacity and initial level.

    ``gamma`` defaults to ``alpha``. ``enum_cap`` bounds the number of
    candidate request sequences any exhaustive enumeration may visit.
    """

    alpha: int
    beta: int
    gamma: Optional[int] = None
    s0: int = 0
    enum_cap: int = field(default=DEFAULT_ENUM_CAP, compare=False)

    def __post_init__(self):
        if self.gamma is None:
            object.__setattr__(self, "gamma", self.alpha)
        for name in ("alpha", "beta", "gamma", "s0"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise DomainError(f"{name} must be an integer, got {v!r}")
        if self.alpha < 1:
            raise DomainError(f"alpha must be >= 1, got {self.alpha}")
        if self.beta < 0:
            raise DomainError(f"beta must be >= 0, got {self.beta}")
        if self.gamma < self.alpha:
            raise DomainError(f"gamma ({self.gamma}) must be >= alpha ({self.alpha})")
        if not 0 <= self.s0 <= self.beta:
            raise DomainError(f"s0 must lie in [0, {self.beta}], got {self.s0}")

    def with_s0(self, s0: int) -> "EmsConfig":
        return replace(self, s0=s0)


@dataclass(frozen=True)
class Violation:
    index: int
    kind: ViolationKind
    level: int  # the out-of-range value s + y - x


@dataclass(frozen=True)
class BatteryTrajectory:
    """States visited before the first violation (all of them if none)."""

    states: Tuple[int, ...]
    violation: Optional[Violation] = None

    @property
    def stable(self) -> bool:
        return self.violation is None


def check_consumption(x: Iterable[int], cfg: EmsConfig) -> ConsumptionSequence:
    x = tuple(x)
    if not x:
        raise DomainError("consumption sequence must be non-empty")
    for i, v in enumerate(x):
        if not 0 <= v <= cfg.alpha:
            raise DomainError(f"x[{i}] = {v} outside [0, {cfg.alpha}]")
    return x


def check_request(y: Iterable[int], cfg: EmsConfig) -> RequestSequence:
    y = tuple(y)
    for i, v in enumerate(y):
        if not 0 <= v <= cfg.gamma:
            raise DomainError(f"y[{i}] = {v} outside [0, {cfg.gamma}]")
    return y


def step(s: int, x: int, y: int, cfg: EmsConfig) -> Union[int, Violation]:
    """Advance the battery one step.

    Returns the next level, or a ``Violation`` (index 0) when the step would
    drain the battery below zero or overfill it past ``beta``.
    """
    if not 0 <= s <= cfg.beta:
        raise DomainError(f"battery level {s} outside [0, {cfg.beta}]")
    if not 0 <= x <= cfg.alpha:
        raise DomainError(f"consumption {x} outside [0, {cfg.alpha}]")
    if not 0 <= y <= cfg.gamma:
        raise DomainError(f"request {y} outside [0, {cfg.gamma}]")
    nxt = s + y - x
    if nxt < 0:
        return Violation(0, OUTAGE, nxt)
    if nxt > cfg.beta:
        return Violation(0, WASTE, nxt)
    return nxt


def trajectory(x: Sequence[int], y: Sequence[int], cfg: EmsConfig) -> BatteryTrajectory:
    if len(x) != len(y):
        raise DomainError(f"length mismatch: len(x)={len(x)}, len(y)={len(y)}")
    states = [cfg.s0]
    s = cfg.s0
    for i, (xi, yi) in enumerate(zip(x, y)):
        out = step(s, xi, yi, cfg)
        if isinstance(out, Violation):
            return BatteryTrajectory(tuple(states), Violation(i, out.kind, out.level))
        s = out
        states.append(s)
    return BatteryTrajectory(tuple(states))


def is_stable(x: Sequence[int], y: Sequence[int], cfg: EmsConfig) -> bool:
    return trajectory(x, y, cfg).violation is None


def enumerate_stable_set(x: Sequence[int], cfg: EmsConfig) -> set:
    """All request sequences that keep the battery in range for input ``x``.

    Depth-first over prefixes; a prefix that already leaves ``[0, beta]``
    cannot be completed, so it is pruned.
    """
    x = check_consumption(x, cfg)
    n = len(x)
    candidates = (cfg.gamma + 1) ** n
    if candidates > cfg.enum_cap:
        raise ResourceError(
            f"(gamma+1)^n = {candidates} candidates exceeds enum_cap = {cfg.enum_cap}"
        )
    beta, gamma = cfg.beta, cfg.gamma
    out = set()
    prefix = [0] * n

    def extend(i: int, s: int) -> None:
        if i == n:
            out.add(tuple(prefix))
            return
        xi = x[i]
        # s + y - xi in [0, beta]  <=>  y in [xi - s, beta - s + xi]
        for y in range(max(0, xi - s), min(gamma, beta - s + xi) + 1):
            prefix[i] = y
            extend(i + 1, s + y - xi)

    extend(0, cfg.s0)
    return out
