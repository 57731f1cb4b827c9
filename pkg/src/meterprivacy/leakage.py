"""Exact information leakage of deterministic battery policies.

All entropies are in bits. Rates are divided by the horizon ``n``.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from dataclasses import asdict, dataclass
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from .errors import DomainError, InvariantViolation, ResourceError
from .model import EmsConfig, enumerate_stable_set, is_stable
from .policy import BlockAlphabet
from .processes import SequenceDistribution, mean_of

RATE_TOL = 1e-9
ORACLE_GUARD = 10 ** 6

Policy = Callable[[Sequence[int]], Tuple[int, ...]]


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def entropy(probs: Iterable[float]) -> float:
    """Shannon entropy of a pmf given as an iterable of masses (0 log 0 = 0)."""
    return -math.fsum(p * math.log2(p) for p in probs if p > 0)


def _floor_len(cfg: EmsConfig) -> int:
    return (cfg.beta + 1) // cfg.alpha


def _ceil_len(cfg: EmsConfig) -> int:
    return -(-(cfg.beta + 1) // cfg.alpha)


def theorem1_bound(cfg: EmsConfig) -> float:
    """``1 / floor((beta+1)/alpha)``; infinite when no block policy exists."""
    l = _floor_len(cfg)
    return 1.0 / l if l else math.inf


def _mean_arg(mu: float, cfg: EmsConfig) -> None:
    if not 0 <= mu <= cfg.alpha:
        raise DomainError(f"mean {mu} outside [0, {cfg.alpha}]")


def theorem3_terms(cfg: EmsConfig, mu: float, n: Optional[int] = None) -> Tuple[float, bool]:
    """Mean-constrained upper bound and whether an entropy argument was clamped.

    ``n=None`` gives the ``n -> infinity`` limit ``H2(mu/alpha)/floor(...)``.
    Otherwise the bound is the larger of ``H2`` at ``(mu -+ beta/n)/alpha``,
    with each argument clamped into ``[0, 1]``.
    """
    _mean_arg(mu, cfg)
    l = _floor_len(cfg)
    if n is None:
        lo = hi = mu / cfg.alpha
    else:
        if n < 1:
            raise DomainError(f"horizon must be >= 1, got {n}")
        lo = (mu - cfg.beta / n) / cfg.alpha
        hi = (mu + cfg.beta / n) / cfg.alpha
    clamped = lo < 0 or hi > 1
    top = max(binary_entropy(min(max(lo, 0.0), 1.0)), binary_entropy(min(max(hi, 0.0), 1.0)))
    if l == 0:
        return math.inf, clamped
    return top / l, clamped


def theorem3_bound(cfg: EmsConfig, mu: float, n: Optional[int] = None) -> float:
    return theorem3_terms(cfg, mu, n)[0]


def mean_interval_bound(cfg: EmsConfig, mu: float, n: Optional[int] = None) -> float:
    """Largest ``H2(p)/floor(...)`` over every request mean ``p*alpha`` within ``beta/n`` of ``mu``.

    Same interval as ``theorem3_bound`` but maximized over the whole interval
    rather than its two endpoints; equals 1/floor(...) whenever the interval
    contains ``alpha/2``.
    """
    _mean_arg(mu, cfg)
    l = _floor_len(cfg)
    if l == 0:
        return math.inf
    if n is None:
        return binary_entropy(mu / cfg.alpha) / l
    lo = min(max((mu - cfg.beta / n) / cfg.alpha, 0.0), 1.0)
    hi = min(max((mu + cfg.beta / n) / cfg.alpha, 0.0), 1.0)
    if lo <= 0.5 <= hi:
        return 1.0 / l
    return max(binary_entropy(lo), binary_entropy(hi)) / l


def theorem2_rate(cfg: EmsConfig) -> float:
    return 1.0 / _ceil_len(cfg)


def theorem4_rate(cfg: EmsConfig, mu: float) -> float:
    _mean_arg(mu, cfg)
    return binary_entropy(mu / cfg.alpha) / _ceil_len(cfg)


@dataclass(frozen=True)
class LeakageReport:
    n: int
    leakage_rate: float
    entropy_x_rate: float
    entropy_y_rate: float
    equivocation_rate: float
    bound: float
    bound_tag: str
    satisfied: bool
    clamped: bool = False

    def to_json(self) -> str:
        doc = asdict(self)
        if math.isinf(self.bound):
            doc["bound"] = "inf"
        return json.dumps(doc)


_BOUND_TAGS = ("theorem1", "theorem2", "theorem3", "theorem4", "none")


def _bound_for(tag: str, d: SequenceDistribution, cfg: EmsConfig) -> Tuple[float, bool, bool]:
    """(value, is_equality, clamped) for a theorem tag."""
    mu = d.mean if d.mean is not None else mean_of(d)
    if tag == "theorem1":
        return theorem1_bound(cfg), False, False
    if tag == "theorem3":
        v, clamped = theorem3_terms(cfg, min(max(mu, 0.0), cfg.alpha), d.n)
        return v, False, clamped
    if tag == "theorem2":
        return theorem2_rate(cfg), True, False
    if tag == "theorem4":
        return theorem4_rate(cfg, min(max(mu, 0.0), cfg.alpha)), True, False
    if tag == "none":
        return math.inf, False, False
    raise DomainError(f"unknown bound tag {tag!r}; expected one of {_BOUND_TAGS}")


def push_forward(d: SequenceDistribution, policy: Policy, cfg: EmsConfig,
                 check: bool = True) -> Dict[Tuple[int, ...], Dict[Tuple[int, ...], float]]:
    """Group the support of ``d`` by policy output: ``{y: {x: P[x]}}``."""
    if d.alpha > cfg.alpha:
        raise DomainError(f"distribution alphabet {d.alpha} exceeds channel alpha {cfg.alpha}")
    groups: Dict[Tuple[int, ...], Dict[Tuple[int, ...], float]] = defaultdict(dict)
    for x, p in d.support.items():
        y = tuple(policy(x))
        if check and (len(y) != len(x) or any(not 0 <= v <= cfg.gamma for v in y)
                      or not is_stable(x, y, cfg)):
            raise InvariantViolation(f"policy output {y} is not stable for input {x} (s0={cfg.s0})")
        groups[y][x] = p
    return groups


def exact_leakage(d: SequenceDistribution, policy: Policy, cfg: EmsConfig,
                  bound: str = "theorem1") -> LeakageReport:
    """Exact ``I(X^n; Y^n)/n`` for a deterministic stable policy.

    Since ``Y`` is a function of ``X``, ``I = H(Y)``. The equivocation
    ``H(X|Y)`` is computed separately from the output groups, so
    ``H(X) = I + H(X|Y)`` is an independent consistency check.
    """
    groups = push_forward(d, policy, cfg)
    n = d.n
    h_x = entropy(d.support.values())
    py = {y: math.fsum(g.values()) for y, g in groups.items()}
    h_y = entropy(py.values())
    h_x_given_y = math.fsum(
        py[y] * entropy(p / py[y] for p in g.values()) for y, g in groups.items()
    )
    # H(X|Y) is mathematically >= 0; tiny negatives are rounding
    h_x_given_y = max(h_x_given_y, 0.0)
    if abs(h_x - h_y - h_x_given_y) > n * RATE_TOL:
        raise InvariantViolation(
            f"H(X)={h_x} != H(Y)+H(X|Y)={h_y + h_x_given_y}: deterministic decomposition broken"
        )
    rate = h_y / n
    value, equality, clamped = _bound_for(bound, d, cfg)
    if equality:
        ok = abs(rate - value) <= RATE_TOL
    else:
        ok = rate <= value + RATE_TOL
    return LeakageReport(
        n=n,
        leakage_rate=rate,
        entropy_x_rate=h_x / n,
        entropy_y_rate=h_y / n,
        equivocation_rate=h_x_given_y / n,
        bound=value,
        bound_tag=bound,
        satisfied=ok,
        clamped=clamped,
    )


@dataclass(frozen=True)
class DisjointnessReport:
    disjoint: bool
    witness: Optional[dict] = None  # {"s0", "x", "x_other", "y"}
    checked_states: int = 0


def verify_disjointness(cfg: EmsConfig, l: int, m: int) -> DisjointnessReport:
    """Check that distinct block-alphabet inputs never share a stable output.

    Runs for every initial level in ``[0, beta]``; ``cfg.s0`` is ignored.
    The first overlap found is returned as a witness.
    """
    alphabet = BlockAlphabet(l, m, cfg.alpha)
    inputs = list(alphabet)
    for s0 in range(cfg.beta + 1):
        c = cfg.with_s0(s0)
        owner: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
        for x in inputs:
            for y in enumerate_stable_set(x, c):
                prev = owner.setdefault(y, x)
                if prev != x:
                    return DisjointnessReport(
                        False, {"s0": s0, "x": list(prev), "x_other": list(x), "y": list(y)}, s0 + 1
                    )
    return DisjointnessReport(True, None, cfg.beta + 1)


def brute_force_min_leakage(d: SequenceDistribution, cfg: EmsConfig,
                            guard: int = ORACLE_GUARD) -> Tuple[float, Dict[Tuple[int, ...], Tuple[int, ...]]]:
    """Minimum leakage rate over every deterministic stable map on ``d``'s support.

    Exhaustive; raises ``ResourceError`` when the number of candidate maps
    exceeds ``guard``.
    """
    xs = sorted(d.support)
    options = []
    total = 1
    for x in xs:
        ys = sorted(enumerate_stable_set(x, cfg))
        options.append(ys)
        total *= len(ys)
        if total > guard:
            raise ResourceError(f"more than {guard} candidate policies; refusing to enumerate")
    probs = [d.support[x] for x in xs]

    best = math.inf
    best_choice = None
    for choice in itertools.product(*options):
        py: Dict[Tuple[int, ...], float] = defaultdict(float)
        for y, p in zip(choice, probs):
            py[y] += p
        h = entropy(py.values())
        if h < best - 1e-15:
            best, best_choice = h, choice
    return best / d.n, dict(zip(xs, best_choice))
