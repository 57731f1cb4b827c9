import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meterprivacy import (DomainError, EmsConfig, InvariantViolation, PolicyTable, ResourceError,
                          binary_entropy, brute_force_min_leakage, exact_leakage, iid_process,
                          mean_block_process, mean_interval_bound, point_mass, theorem1_bound,
                          theorem2_rate, theorem3_bound, theorem4_rate, uniform_block_process,
                          verify_disjointness)
from meterprivacy.leakage import LeakageReport, theorem3_terms
from meterprivacy.policy import echo_policy, greedy_charge_policy
from meterprivacy.processes import SequenceDistribution, mean_of
from meterprivacy.verify import random_law

from conftest import joint_mutual_information

mpmath.mp.dps = 40


def h2_mp(p):
    p = mpmath.mpf(p)
    if p in (0, 1):
        return mpmath.mpf(0)
    return -p * mpmath.log(p, 2) - (1 - p) * mpmath.log(1 - p, 2)


H2_QUARTER = float(h2_mp("0.25"))  # 0.8112781244591328...


def test_binary_entropy():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.25) == pytest.approx(H2_QUARTER, abs=1e-15)
    assert H2_QUARTER == pytest.approx(0.811278124459, abs=1e-12)
    for bad in (-0.1, 1.1):
        with pytest.raises(DomainError):
            binary_entropy(bad)


@given(st.floats(0, 1))
def test_binary_entropy_matches_mpmath(p):
    assert binary_entropy(p) == pytest.approx(float(h2_mp(p)), abs=1e-12)
    assert binary_entropy(p) == pytest.approx(binary_entropy(1 - p), abs=1e-12)


@pytest.mark.parametrize("beta,alpha,expected", [(3, 1, 0.25), (0, 1, 1.0), (7, 2, 0.25)])
def test_theorem1_bound(beta, alpha, expected):
    assert theorem1_bound(EmsConfig(alpha=alpha, beta=beta)) == expected


def test_theorem1_bound_no_policy():
    assert theorem1_bound(EmsConfig(alpha=2, beta=0)) == math.inf


def test_theorem2_and_4_rates():
    assert theorem2_rate(EmsConfig(alpha=1, beta=1)) == 0.5
    assert theorem4_rate(EmsConfig(alpha=1, beta=1), 0.5) == 0.5
    assert theorem2_rate(EmsConfig(alpha=2, beta=3)) == 0.5
    # ceil vs floor differ when alpha does not divide beta + 1
    assert theorem2_rate(EmsConfig(alpha=2, beta=2)) == 0.5
    assert theorem1_bound(EmsConfig(alpha=2, beta=2)) == 1.0


def test_theorem3_bound():
    c = EmsConfig(alpha=1, beta=1)
    assert theorem3_bound(c, 0.5, None) == theorem1_bound(c)
    assert theorem3_bound(c, 0.0, None) == 0.0
    assert theorem3_bound(c, 0.5, 4) == pytest.approx(H2_QUARTER / 2, abs=1e-12)
    assert theorem3_bound(c, 0.5, 4) == pytest.approx(0.405639062, abs=1e-9)
    with pytest.raises(DomainError):
        theorem3_bound(c, 1.5, 4)


def test_theorem3_clamps():
    c = EmsConfig(alpha=1, beta=1)
    value, clamped = theorem3_terms(c, 0.75, 2)
    assert clamped
    # (0.75 - 0.5, 0.75 + 0.5 -> 1.0)
    assert value == pytest.approx(H2_QUARTER / 2, abs=1e-12)
    assert not theorem3_terms(c, 0.5, 4)[1]


def test_theorem3_stated_bound_misses_half_mean():
    # The endpoint maximum ignores the H2 peak between the endpoints; the
    # tight rate at mu = alpha/2 exceeds it for every finite n.
    c = EmsConfig(alpha=1, beta=1)
    for n in (2, 4, 6, 100):
        assert theorem3_bound(c, 0.5, n) < theorem4_rate(c, 0.5)
        assert mean_interval_bound(c, 0.5, n) == theorem4_rate(c, 0.5)


def test_mean_interval_bound():
    c = EmsConfig(alpha=1, beta=1)
    assert mean_interval_bound(c, 0.0, 4) == pytest.approx(H2_QUARTER / 2, abs=1e-12)
    assert mean_interval_bound(c, 0.0, None) == 0.0
    assert mean_interval_bound(c, 0.9, 100) == pytest.approx(float(h2_mp("0.89")) / 2, abs=1e-12)


class TestExactLeakage:
    def test_theorem2_example(self, mi_oracle):
        c = EmsConfig(alpha=1, beta=1)
        d = uniform_block_process(c, 2, 1)
        pol = PolicyTable(c, 2)
        rep = exact_leakage(d, pol, c)
        assert rep.leakage_rate == pytest.approx(0.5, abs=1e-9)
        assert mi_oracle(d.support, pol) / d.n == pytest.approx(0.5, abs=1e-12)
        assert rep.equivocation_rate == 0.0
        assert rep.satisfied and rep.bound_tag == "theorem1"

    def test_point_mass(self):
        c = EmsConfig(alpha=1, beta=2, s0=1)
        for x in [(0, 1, 1), (1, 1, 1)]:
            for pol in (echo_policy(c), greedy_charge_policy(c), PolicyTable(c, 3)):
                assert exact_leakage(point_mass(x, 1), pol, c).leakage_rate == 0.0

    def test_theorem4_example(self, mi_oracle):
        c = EmsConfig(alpha=1, beta=1)
        d = mean_block_process(c, 2, 2, 0.25)
        expected = float(h2_mp("0.25") / 2)
        for pol in (PolicyTable(c), echo_policy(c), greedy_charge_policy(c)):
            rep = exact_leakage(d, pol, c, bound="theorem4")
            assert rep.leakage_rate == pytest.approx(expected, abs=1e-9)
            assert mi_oracle(d.support, pol) / d.n == pytest.approx(expected, abs=1e-12)
            assert rep.satisfied

    @pytest.mark.parametrize("beta,alpha", [(1, 1), (2, 1), (3, 2), (2, 2), (4, 3)])
    def test_zero_equivocation_on_block_inputs(self, beta, alpha):
        c = EmsConfig(alpha=alpha, beta=beta)
        l = -(-(beta + 1) // alpha)
        d = uniform_block_process(c, l, 2)
        rep = exact_leakage(d, echo_policy(c), c)
        assert rep.equivocation_rate == 0.0

    def test_unstable_policy_rejected(self):
        c = EmsConfig(alpha=1, beta=1)
        d = uniform_block_process(c, 2, 1)
        with pytest.raises(InvariantViolation):
            exact_leakage(d, lambda x: (0,) * len(x), c)

    def test_report_json(self):
        c = EmsConfig(alpha=1, beta=1)
        rep = exact_leakage(uniform_block_process(c, 2, 1), PolicyTable(c), c)
        doc = json.loads(rep.to_json())
        assert set(doc) == {"n", "leakage_rate", "entropy_x_rate", "entropy_y_rate",
                            "equivocation_rate", "bound", "bound_tag", "satisfied", "clamped"}

    def test_unknown_bound(self):
        c = EmsConfig(alpha=1, beta=1)
        with pytest.raises(DomainError):
            exact_leakage(uniform_block_process(c, 2, 1), PolicyTable(c), c, bound="theorem9")


@st.composite
def law_and_channel(draw):
    alpha = draw(st.integers(1, 2))
    beta = draw(st.integers(alpha - 1, 4))
    c = EmsConfig(alpha=alpha, beta=beta, s0=draw(st.integers(0, beta)))
    l = (beta + 1) // alpha
    m = draw(st.integers(1, max(1, 8 // l)))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    d = random_law(np.random.default_rng(seed), alpha, l * m)
    return c, l, d


@settings(max_examples=60, deadline=None)
@given(law_and_channel())
def test_block_policy_leakage_properties(case):
    c, l, d = case
    pol = PolicyTable(c, l)
    rep = exact_leakage(d, pol, c)
    assert rep.leakage_rate <= theorem1_bound(c) + 1e-9
    assert rep.leakage_rate == pytest.approx(joint_mutual_information(d.support, pol) / d.n, abs=1e-9)
    assert rep.leakage_rate + rep.equivocation_rate == pytest.approx(rep.entropy_x_rate, abs=1e-9)
    assert -1e-12 <= rep.leakage_rate <= min(rep.entropy_x_rate, rep.entropy_y_rate) + 1e-9
    mu = mean_of(d)
    assert rep.leakage_rate <= mean_interval_bound(c, mu, d.n) + 1e-9

    # request-mean shift is at most beta/n, and the chain-rule entropy bound holds
    mean_y = sum(p * sum(pol(x)) for x, p in d.support.items()) / d.n
    assert abs(mean_y - mu) <= c.beta / d.n + 1e-12
    assert rep.entropy_y_rate <= binary_entropy(min(max(mean_y / c.alpha, 0), 1)) / l + 1e-9


@pytest.mark.parametrize("beta,alpha,l,m,disjoint", [
    (1, 1, 2, 1, True),
    (1, 1, 1, 1, False),
    (2, 1, 3, 2, True),
    (3, 2, 2, 3, True),
    (2, 2, 1, 2, False),
])
def test_verify_disjointness(beta, alpha, l, m, disjoint):
    rep = verify_disjointness(EmsConfig(alpha=alpha, beta=beta), l, m)
    assert rep.disjoint is disjoint
    assert (rep.witness is None) is disjoint


def test_disjointness_witness_content():
    rep = verify_disjointness(EmsConfig(alpha=1, beta=1), 1, 1)
    w = rep.witness
    assert w["s0"] == 0 and w["y"] == [1]
    assert {tuple(w["x"]), tuple(w["x_other"])} == {(0,), (1,)}


class TestBruteForce:
    def test_point_mass(self):
        c = EmsConfig(alpha=1, beta=2, s0=1)
        best, pol = brute_force_min_leakage(point_mass((1, 0, 1), 1), c)
        assert best == 0.0 and set(pol) == {(1, 0, 1)}

    def test_two_inputs_against_hand_enumeration(self):
        c = EmsConfig(alpha=1, beta=1, s0=1)
        d = SequenceDistribution(1, 1, {(0,): 0.5, (1,): 0.5})
        # x=0 admits y=0 only (y=1 overfills); x=1 admits y in {0, 1}
        # maps: {0->0, 1->0}: H(Y)=0 ; {0->0, 1->1}: H(Y)=1
        best, pol = brute_force_min_leakage(d, c)
        assert best == 0.0
        assert pol == {(0,): (0,), (1,): (0,)}

    def test_uniform_two_blocks(self):
        c = EmsConfig(alpha=1, beta=1)
        best, _ = brute_force_min_leakage(uniform_block_process(c, 2, 1), c)
        assert best == pytest.approx(theorem2_rate(c), abs=1e-12)

    def test_block_policy_not_below_optimum(self):
        c = EmsConfig(alpha=1, beta=1)
        d = iid_process([0.6, 0.4], 2)
        best, _ = brute_force_min_leakage(d, c)
        assert exact_leakage(d, PolicyTable(c), c).leakage_rate >= best - 1e-12

    def test_guard(self):
        c = EmsConfig(alpha=1, beta=2)
        with pytest.raises(ResourceError):
            brute_force_min_leakage(iid_process([0.5, 0.5], 4), c, guard=1000)


def test_interval_bound_holds_on_mean_block_grid():
    for beta, alpha in [(1, 1), (2, 1), (3, 2)]:
        l = -(-(beta + 1) // alpha)
        for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
            for m in (1, 2, 3):
                for s0 in range(beta + 1):
                    c = EmsConfig(alpha=alpha, beta=beta, s0=s0)
                    d = mean_block_process(c, l, m, frac * alpha)
                    rate = exact_leakage(d, PolicyTable(c), c).leakage_rate
                    assert rate <= mean_interval_bound(c, frac * alpha, l * m) + 1e-9
