"""Property suites behind ``meterprivacy verify``.

Each suite returns a JSON-serializable dict with at least ``suite``,
``passed``, ``checks`` and ``failures`` (capped list of counterexamples).
"""
from __future__ import annotations

import itertools
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .leakage import (RATE_TOL, binary_entropy, brute_force_min_leakage, exact_leakage,
                      mean_interval_bound, theorem1_bound, theorem2_rate, theorem3_bound,
                      theorem4_rate, verify_disjointness)
from .model import EmsConfig, enumerate_stable_set, is_stable
from .policy import BlockAlphabet, PolicyTable, apply_policy, echo_policy, greedy_charge_policy, max_block_length
from .processes import (SequenceDistribution, iid_process, markov_process, mean_block_process,
                        uniform_block_process)
from .trapdoor import TrapdoorBox, ems_to_trapdoor, trapdoor_stable

MAX_FAILURES = 20

# (beta, alpha) pairs used by the tightness suites
TIGHT_CONFIGS = ((1, 1), (2, 1), (3, 2))
MEAN_FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)


class _Tally:
    def __init__(self, suite: str):
        self.suite = suite
        self.checks = 0
        self.failures: List[dict] = []
        self.n_failed = 0
        self.extra: Dict[str, object] = {}

    def check(self, ok: bool, **detail) -> bool:
        self.checks += 1
        if not ok:
            self.n_failed += 1
            if len(self.failures) < MAX_FAILURES:
                self.failures.append(detail)
        return ok

    def report(self) -> dict:
        out = {"suite": self.suite, "passed": self.n_failed == 0, "checks": self.checks,
               "failed": self.n_failed, "failures": self.failures}
        out.update(self.extra)
        return out


def random_law(rng: np.random.Generator, alpha: int, n: int) -> SequenceDistribution:
    """A random i.i.d. or first-order Markov law over ``[0, alpha]^n`` (coin flip)."""
    k = alpha + 1
    if rng.random() < 0.5:
        return iid_process(_normalize(rng.dirichlet(np.ones(k))), n)
    P = np.array([_normalize(rng.dirichlet(np.ones(k))) for _ in range(k)])
    return markov_process(P, _normalize(rng.dirichlet(np.ones(k))), n)


def _normalize(p: np.ndarray) -> np.ndarray:
    return p / math.fsum(p)


def random_stable_pair(rng: np.random.Generator, cfg: EmsConfig, n: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Uniform random consumption, then a request drawn step by step among stable choices."""
    x = tuple(int(v) for v in rng.integers(0, cfg.alpha + 1, size=n))
    s = cfg.s0
    y = []
    for xi in x:
        lo, hi = max(0, xi - s), min(cfg.gamma, cfg.beta - s + xi)
        yi = int(rng.integers(lo, hi + 1))
        s += yi - xi
        y.append(yi)
    return x, tuple(y)


def _policies(cfg: EmsConfig, l: int) -> Dict[str, Callable]:
    return {
        "block": PolicyTable(cfg, l),
        "echo": echo_policy(cfg),
        "greedy-charge": greedy_charge_policy(cfg),
    }


def suite_theorem1(seed: int = 0, alpha_max: int = 2, beta_max: int = 4, laws: int = 50) -> dict:
    """Block policy existence (exhaustive) and leakage <= 1/floor((beta+1)/alpha)."""
    t = _Tally("theorem1")
    rng = np.random.default_rng(seed)
    skipped = []
    for alpha in range(1, alpha_max + 1):
        for beta in range(beta_max + 1):
            base = EmsConfig(alpha=alpha, beta=beta)
            l = max_block_length(base)
            if l == 0:
                skipped.append({"alpha": alpha, "beta": beta, "reason": "floor((beta+1)/alpha) = 0"})
                continue
            n = 2 * l
            alphabet = BlockAlphabet(l, 2, alpha)
            tables = {}
            for s0 in range(beta + 1):
                cfg = base.with_s0(s0)
                table = {}
                for x in itertools.product(range(alpha + 1), repeat=n):
                    y = apply_policy(x, cfg, l)
                    t.check(is_stable(x, y, cfg) and y in alphabet,
                            alpha=alpha, beta=beta, s0=s0, x=list(x), y=list(y))
                    table[x] = y
                tables[s0] = table
            bound = theorem1_bound(base)
            for _ in range(laws):
                s0 = int(rng.integers(0, beta + 1))
                d = random_law(rng, alpha, n)
                table = tables[s0]
                rep = exact_leakage(d, table.__getitem__, base.with_s0(s0))
                t.check(rep.leakage_rate <= bound + RATE_TOL,
                        alpha=alpha, beta=beta, s0=s0, leakage=rep.leakage_rate, bound=bound)
    t.extra["skipped"] = skipped
    return t.report()


def _ceil_len(beta: int, alpha: int) -> int:
    return -(-(beta + 1) // alpha)


def suite_theorem2(m_values: Sequence[int] = (1, 2, 3)) -> dict:
    """Uniform block input: leakage is 1/l for every tested policy, zero equivocation."""
    t = _Tally("theorem2")
    for beta, alpha in TIGHT_CONFIGS:
        l = _ceil_len(beta, alpha)
        for m in m_values:
            for s0 in range(beta + 1):
                cfg = EmsConfig(alpha=alpha, beta=beta, s0=s0)
                d = uniform_block_process(cfg, l, m)
                target = theorem2_rate(cfg)
                for name, pol in _policies(cfg, max_block_length(cfg)).items():
                    rep = exact_leakage(d, pol, cfg, bound="theorem2")
                    t.check(abs(rep.leakage_rate - target) <= RATE_TOL and rep.equivocation_rate <= 1e-12,
                            beta=beta, alpha=alpha, m=m, s0=s0, policy=name,
                            leakage=rep.leakage_rate, target=target,
                            equivocation=rep.equivocation_rate)
            dis = verify_disjointness(EmsConfig(alpha=alpha, beta=beta), l, m)
            t.check(dis.disjoint, beta=beta, alpha=alpha, l=l, m=m, witness=dis.witness)
    return t.report()


def _mean_grid():
    for beta, alpha in TIGHT_CONFIGS:
        l = _ceil_len(beta, alpha)
        for m in (1, 2, 3):
            for frac in MEAN_FRACTIONS:
                yield beta, alpha, l, m, frac * alpha


def suite_theorem3() -> dict:
    """Mean-constrained bound under the block policy.

    Checks the endpoint bound as stated and, separately, the bound maximized
    over the whole feasible request-mean interval. ``passed`` reflects the
    stated bound only.
    """
    t = _Tally("theorem3")
    interval_failures = 0
    asymptote_failures = 0
    for beta, alpha, l, m, mu in _mean_grid():
        n = l * m
        for s0 in range(beta + 1):
            cfg = EmsConfig(alpha=alpha, beta=beta, s0=s0)
            d = mean_block_process(cfg, l, m, mu)
            rep = exact_leakage(d, PolicyTable(cfg), cfg, bound="theorem3")
            stated = theorem3_bound(cfg, mu, n)
            t.check(rep.leakage_rate <= stated + RATE_TOL,
                    beta=beta, alpha=alpha, m=m, n=n, s0=s0, mu=mu,
                    leakage=rep.leakage_rate, bound=stated)
            if rep.leakage_rate > mean_interval_bound(cfg, mu, n) + RATE_TOL:
                interval_failures += 1
        cfg = EmsConfig(alpha=alpha, beta=beta)
        limit = binary_entropy(mu / alpha) / max_block_length(cfg)
        if theorem3_bound(cfg, mu, None) != limit:
            asymptote_failures += 1
    t.extra["interval_bound_failures"] = interval_failures
    t.extra["asymptote_failures"] = asymptote_failures
    return t.report()


def suite_theorem4() -> dict:
    """Mean-constrained block input: leakage equals H2(mu/alpha)/l for every tested policy."""
    t = _Tally("theorem4")
    for beta, alpha, l, m, mu in _mean_grid():
        for s0 in range(beta + 1):
            cfg = EmsConfig(alpha=alpha, beta=beta, s0=s0)
            d = mean_block_process(cfg, l, m, mu)
            target = theorem4_rate(cfg, mu)
            for name, pol in _policies(cfg, max_block_length(cfg)).items():
                rep = exact_leakage(d, pol, cfg, bound="theorem4")
                t.check(abs(rep.leakage_rate - target) <= RATE_TOL,
                        beta=beta, alpha=alpha, m=m, s0=s0, mu=mu, policy=name,
                        leakage=rep.leakage_rate, target=target)
    return t.report()


def suite_trapdoor_equivalence(beta_max: int = 3, n_max: int = 4) -> dict:
    """EMS stability and trapdoor stability agree on every binary pair."""
    t = _Tally("trapdoor-equivalence")
    for beta in range(beta_max + 1):
        for s0 in range(beta + 1):
            cfg = EmsConfig(alpha=1, gamma=1, beta=beta, s0=s0)
            for n in range(1, n_max + 1):
                seqs = list(itertools.product((0, 1), repeat=n))
                for x in seqs:
                    for y in seqs:
                        balls_in, balls_out, r0 = ems_to_trapdoor(x, y, cfg)
                        ems = is_stable(x, y, cfg)
                        box = trapdoor_stable(balls_in, balls_out, TrapdoorBox(beta, r0))
                        t.check(ems == box, beta=beta, s0=s0, x=list(x), y=list(y), ems=ems, trapdoor=box)
    return t.report()


def suite_disjointness(points: Optional[Sequence[Tuple[int, int, int, int]]] = None) -> dict:
    """Disjoint stable sets on the block alphabet; ``points`` are (beta, alpha, l, m)."""
    t = _Tally("disjointness")
    if points is None:
        points = [(b, a, _ceil_len(b, a), m) for b, a in TIGHT_CONFIGS for m in (1, 2, 3)]
    witnesses = []
    for beta, alpha, l, m in points:
        rep = verify_disjointness(EmsConfig(alpha=alpha, beta=beta), l, m)
        if rep.witness is not None:
            witnesses.append({"beta": beta, "alpha": alpha, "l": l, "m": m, **rep.witness})
        t.check(rep.disjoint, beta=beta, alpha=alpha, l=l, m=m, witness=rep.witness)
    t.extra["witnesses"] = witnesses
    return t.report()


def naive_stable_set(x: Sequence[int], cfg: EmsConfig) -> set:
    return {y for y in itertools.product(range(cfg.gamma + 1), repeat=len(x)) if is_stable(x, y, cfg)}


def suite_oracle(n_max: int = 4, beta_max: int = 2) -> dict:
    """Brute-force minimum on the uniform two-block input, and pruned vs naive enumeration."""
    t = _Tally("oracle")
    cfg = EmsConfig(alpha=1, gamma=1, beta=1)
    d = uniform_block_process(cfg, 2, 1)
    best, _ = brute_force_min_leakage(d, cfg)
    t.check(abs(best - theorem2_rate(cfg)) <= RATE_TOL, what="brute_force_min_leakage", got=best,
            expected=theorem2_rate(cfg))
    for alpha in (1, 2):
        for gamma in (alpha, alpha + 1):
            for beta in range(beta_max + 1):
                for s0 in range(beta + 1):
                    c = EmsConfig(alpha=alpha, gamma=gamma, beta=beta, s0=s0)
                    for n in range(1, n_max + 1):
                        for x in itertools.product(range(alpha + 1), repeat=n):
                            fast = enumerate_stable_set(x, c)
                            t.check(fast == naive_stable_set(x, c), alpha=alpha, gamma=gamma,
                                    beta=beta, s0=s0, x=list(x))
    return t.report()


SUITES = {
    "theorem1": suite_theorem1,
    "theorem2": suite_theorem2,
    "theorem3": suite_theorem3,
    "theorem4": suite_theorem4,
    "trapdoor-equivalence": suite_trapdoor_equivalence,
    "disjointness": suite_disjointness,
    "oracle": suite_oracle,
}
