"""Exact finite-support laws over consumption sequences."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, ResourceError
from .model import EmsConfig
from .policy import BlockAlphabet

DEFAULT_SUPPORT_CAP = 2 ** 20
NORM_TOL = 1e-12
MEAN_TOL = 1e-9


@dataclass(frozen=True)
class SequenceDistribution:
    """Probability mass function over length-``n`` sequences in ``[0, alpha]^n``.

    Zero-probability sequences are dropped from ``support``. If ``mean`` is
    declared it must match the time-averaged expectation computed from the
    support.
    """

    n: int
    alpha: int
    support: Mapping[Tuple[int, ...], float]
    mean: Optional[float] = None
    cap: int = field(default=DEFAULT_SUPPORT_CAP, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"horizon must be >= 1, got {self.n}")
        clean: Dict[Tuple[int, ...], float] = {}
        for seq, p in self.support.items():
            seq = tuple(int(v) for v in seq)
            p = float(p)
            if p < 0 or math.isnan(p):
                raise DomainError(f"negative or NaN probability {p} for {seq}")
            if len(seq) != self.n:
                raise DomainError(f"sequence {seq} has length {len(seq)}, expected {self.n}")
            if any(not 0 <= v <= self.alpha for v in seq):
                raise DomainError(f"sequence {seq} has a symbol outside [0, {self.alpha}]")
            if p > 0:
                clean[seq] = clean.get(seq, 0.0) + p
        if len(clean) > self.cap:
            raise ResourceError(f"support size {len(clean)} exceeds cap {self.cap}")
        total = math.fsum(clean.values())
        if abs(total - 1.0) > NORM_TOL:
            raise DomainError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "support", MappingProxyType(clean))
        if self.mean is not None:
            realized = mean_of(self)
            if abs(realized - self.mean) > MEAN_TOL:
                raise DomainError(f"declared mean {self.mean} but support gives {realized}")

    def __len__(self) -> int:
        return len(self.support)

    def items(self):
        return self.support.items()

    def to_json(self) -> str:
        entries = [{"seq": list(seq), "p": p} for seq, p in sorted(self.support.items())]
        doc = {"n": self.n, "alpha": self.alpha, "entries": entries}
        if self.mean is not None:
            doc["mean"] = self.mean
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str, cap: int = DEFAULT_SUPPORT_CAP) -> "SequenceDistribution":
        doc = json.loads(text)
        try:
            support: Dict[Tuple[int, ...], float] = {}
            for e in doc["entries"]:
                seq = tuple(e["seq"])
                support[seq] = support.get(seq, 0.0) + float(e["p"])
            return cls(int(doc["n"]), int(doc["alpha"]), support, doc.get("mean"), cap=cap)
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed distribution document: {exc}") from exc


def mean_of(d: SequenceDistribution) -> float:
    """Expected time-averaged consumption ``E[(1/n) sum x_i]``."""
    return math.fsum(p * sum(seq) for seq, p in d.support.items()) / d.n


def _check_pmf(p: Sequence[float], what: str) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise DomainError(f"{what} must be a non-empty vector")
    if np.any(p < 0) or abs(math.fsum(p) - 1.0) > NORM_TOL:
        raise DomainError(f"{what} is not a probability vector: {p}")
    return p


def point_mass(seq: Sequence[int], alpha: int) -> SequenceDistribution:
    seq = tuple(seq)
    return SequenceDistribution(len(seq), alpha, {seq: 1.0})


def iid_process(p: Sequence[float], n: int, cap: int = DEFAULT_SUPPORT_CAP) -> SequenceDistribution:
    """Product law of ``n`` draws from the per-symbol pmf ``p`` over ``0..len(p)-1``."""
    p = _check_pmf(p, "per-symbol pmf")
    alpha = p.size - 1
    if alpha < 1:
        raise DomainError("per-symbol pmf must cover at least the symbols {0, 1}")
    live = [a for a in range(p.size) if p[a] > 0]
    if len(live) ** n > cap:
        raise ResourceError(f"support size {len(live)}^{n} exceeds cap {cap}")
    support = {}
    for seq in itertools.product(live, repeat=n):
        support[seq] = math.prod(p[a] for a in seq)
    return SequenceDistribution(n, alpha, support, cap=cap)


def markov_process(
    P: Sequence[Sequence[float]], init: Sequence[float], n: int, cap: int = DEFAULT_SUPPORT_CAP
) -> SequenceDistribution:
    """First-order Markov chain over ``0..alpha``; path probabilities by the chain rule."""
    P = np.asarray(P, dtype=float)
    init = _check_pmf(init, "initial pmf")
    k = init.size
    if P.shape != (k, k):
        raise DomainError(f"transition matrix shape {P.shape} does not match init size {k}")
    for row in P:
        _check_pmf(row, "transition row")
    if k < 2:
        raise DomainError("chain must cover at least the symbols {0, 1}")

    support: Dict[Tuple[int, ...], float] = {(a,): init[a] for a in range(k) if init[a] > 0}
    for _ in range(n - 1):
        nxt = {}
        for seq, q in support.items():
            row = P[seq[-1]]
            for b in range(k):
                if row[b] > 0:
                    nxt[seq + (b,)] = q * row[b]
        if len(nxt) > cap:
            raise ResourceError(f"support size {len(nxt)} exceeds cap {cap}")
        support = nxt
    return SequenceDistribution(n, k - 1, support, cap=cap)


def uniform_block_process(cfg: EmsConfig, l: int, m: int, cap: int = DEFAULT_SUPPORT_CAP) -> SequenceDistribution:
    """Uniform law over the ``2^m`` sequences of the block repetition alphabet."""
    alphabet = BlockAlphabet(l, m, cfg.alpha)
    if len(alphabet) > cap:
        raise ResourceError(f"2^{m} sequences exceeds cap {cap}")
    q = 1.0 / len(alphabet)
    return SequenceDistribution(alphabet.n, cfg.alpha, {seq: q for seq in alphabet},
                                mean=cfg.alpha / 2, cap=cap)


def mean_block_process(cfg: EmsConfig, l: int, m: int, mu: float,
                       cap: int = DEFAULT_SUPPORT_CAP) -> SequenceDistribution:
    """I.i.d. blocks, each all-``alpha`` w.p. ``mu/alpha`` and all-zero otherwise.

    Among laws on the block alphabet with mean ``mu`` this one has the largest
    entropy, ``m * H2(mu/alpha)``.
    """
    if not 0 <= mu <= cfg.alpha:
        raise DomainError(f"mean {mu} outside [0, {cfg.alpha}]")
    alphabet = BlockAlphabet(l, m, cfg.alpha)
    if len(alphabet) > cap:
        raise ResourceError(f"2^{m} sequences exceeds cap {cap}")
    q = mu / cfg.alpha
    support = {}
    for seq in alphabet:
        ones = sum(seq) // (cfg.alpha * l)
        support[seq] = q ** ones * (1 - q) ** (m - ones)
    return SequenceDistribution(alphabet.n, cfg.alpha, support, mean=float(mu), cap=cap)
