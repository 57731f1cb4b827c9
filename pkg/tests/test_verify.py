import pytest

from meterprivacy import verify


@pytest.mark.parametrize("name", ["theorem2", "theorem4", "trapdoor-equivalence", "disjointness", "oracle"])
def test_suite_passes(name):
    rep = verify.SUITES[name]()
    assert rep["passed"] and rep["checks"] > 0 and rep["failures"] == []


def test_theorem1_suite_seeded():
    a = verify.suite_theorem1(seed=3, laws=5)
    b = verify.suite_theorem1(seed=3, laws=5)
    assert a == b and a["passed"]
    assert a["skipped"] == [{"alpha": 2, "beta": 0, "reason": "floor((beta+1)/alpha) = 0"}]


def test_theorem3_suite_reports_endpoint_defect():
    rep = verify.suite_theorem3()
    assert not rep["passed"]
    assert rep["interval_bound_failures"] == 0
    assert rep["asymptote_failures"] == 0
    # every counterexample sits where the mean interval contains alpha/2
    for f in rep["failures"]:
        lo = (f["mu"] - f["beta"] / f["n"]) / f["alpha"]
        hi = (f["mu"] + f["beta"] / f["n"]) / f["alpha"]
        assert lo <= 0.5 <= hi


def test_disjointness_custom_point():
    rep = verify.suite_disjointness([(1, 1, 1, 1)])
    assert not rep["passed"] and rep["witnesses"][0]["s0"] == 0
