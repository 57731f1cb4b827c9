"""Block repetition alphabet and the block battery policy.

The request sequence is built from ``m`` blocks of length ``l``, each either
all zeros or all ``alpha``. Per block the policy sends the zero block if the
battery can cover the block's consumption on its own, otherwise the
``alpha`` block. One of the two is always stable when
``l <= floor((beta + 1) / alpha)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from .errors import DomainError, InvariantViolation, PolicyInfeasibleError
from .model import EmsConfig, RequestSequence, check_consumption, trajectory


def max_block_length(cfg: EmsConfig) -> int:
    """Largest block length for which a block policy exists for every s0 and x.

    Zero when ``alpha > beta + 1``: no block policy exists at all.
    """
    return (cfg.beta + 1) // cfg.alpha


@dataclass(frozen=True)
class BlockAlphabet:
    l: int
    m: int
    alpha: int

    def __post_init__(self):
        if self.l < 1 or self.m < 1:
            raise DomainError(f"block length and block count must be >= 1, got l={self.l}, m={self.m}")
        if self.alpha < 1:
            raise DomainError(f"alpha must be >= 1, got {self.alpha}")

    @property
    def n(self) -> int:
        return self.l * self.m

    @property
    def codewords(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return (0,) * self.l, (self.alpha,) * self.l

    def __len__(self) -> int:
        return 2 ** self.m

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        for blocks in itertools.product(self.codewords, repeat=self.m):
            yield tuple(itertools.chain.from_iterable(blocks))

    def __contains__(self, seq) -> bool:
        seq = tuple(seq)
        if len(seq) != self.n:
            return False
        for k in range(self.m):
            block = seq[k * self.l:(k + 1) * self.l]
            if block not in self.codewords:
                return False
        return True


def _check_block_length(l: int, cfg: EmsConfig) -> None:
    lmax = max_block_length(cfg)
    if lmax == 0:
        raise PolicyInfeasibleError(
            f"no block policy exists: alpha={cfg.alpha} exceeds beta+1={cfg.beta + 1}"
        )
    if l < 1:
        raise DomainError(f"block length must be >= 1, got {l}")
    if l > lmax:
        raise PolicyInfeasibleError(
            f"l = {l} exceeds floor((beta+1)/alpha) = {lmax} for beta={cfg.beta}, alpha={cfg.alpha}"
        )


def choose_block(s_start: int, x_block: Sequence[int], cfg: EmsConfig) -> Tuple[int, ...]:
    """Pick the zero block or the alpha block for one block of consumption.

    Ties go to the zero block.
    """
    l = len(x_block)
    _check_block_length(l, cfg)
    if not 0 <= s_start <= cfg.beta:
        raise DomainError(f"battery level {s_start} outside [0, {cfg.beta}]")
    slack = s_start - sum(x_block)
    if slack >= 0:
        # zero requests: the level only falls, and it ends at slack >= 0
        block = (0,) * l
    else:
        # alpha requests: the level only rises, ending at slack + alpha*l <= beta
        block = (cfg.alpha,) * l
    sub = EmsConfig(alpha=cfg.alpha, beta=cfg.beta, gamma=cfg.gamma, s0=s_start)
    if trajectory(x_block, block, sub).violation is not None:
        raise InvariantViolation(
            f"neither block is stable for s={s_start}, x_block={tuple(x_block)}, cfg={cfg}"
        )
    return block


def apply_policy(x: Sequence[int], cfg: EmsConfig, l: Optional[int] = None) -> RequestSequence:
    """Run the block policy over ``x``, threading battery state across blocks."""
    x = check_consumption(x, cfg)
    if l is None:
        l = max_block_length(cfg)
    _check_block_length(l, cfg)
    if len(x) % l:
        raise DomainError(f"len(x) = {len(x)} is not a multiple of block length {l}")
    y = []
    s = cfg.s0
    for k in range(0, len(x), l):
        xb = x[k:k + l]
        yb = choose_block(s, xb, cfg)
        s += sum(yb) - sum(xb)
        y.extend(yb)
    return tuple(y)


@dataclass(frozen=True)
class PolicyTable:
    """The block policy for a fixed channel and block length, usable as ``x -> y``."""

    cfg: EmsConfig
    block_length: Optional[int] = None

    def __post_init__(self):
        if self.block_length is None:
            object.__setattr__(self, "block_length", max_block_length(self.cfg))
        _check_block_length(self.block_length, self.cfg)

    def decide(self, s: int, x_block: Sequence[int]) -> Tuple[int, ...]:
        if len(x_block) != self.block_length:
            raise DomainError(f"block of length {len(x_block)}, expected {self.block_length}")
        return choose_block(s, x_block, self.cfg)

    def __call__(self, x: Sequence[int]) -> RequestSequence:
        return apply_policy(x, self.cfg, self.block_length)


# Reference stable policies, used to exercise policy-independence claims.

def echo_policy(cfg: EmsConfig):
    """Request exactly what is consumed; the battery never moves."""
    def policy(x: Sequence[int]) -> RequestSequence:
        return tuple(x)
    return policy


def greedy_charge_policy(cfg: EmsConfig):
    """Request as much as possible each step without overfilling the battery."""
    def policy(x: Sequence[int]) -> RequestSequence:
        s = cfg.s0
        y = []
        for xi in x:
            yi = min(cfg.gamma, cfg.beta - s + xi)
            s += yi - xi
            y.append(yi)
        return tuple(y)
    return policy
