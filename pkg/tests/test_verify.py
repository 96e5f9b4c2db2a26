import pytest

from zerosum.errors import BadParameters
from zerosum.groupspec import parse_group_spec
from zerosum.search import Budget
from zerosum.verify import verify_theorem


def V(tag, spec, **kw):
    return verify_theorem(tag, parse_group_spec(spec), **kw)


def test_t11_s3():
    r = V("T1.1", "dsd(3)", use_caps=False)
    assert r.status == "pass"
    assert (r.quantities["d(A)"], r.quantities["d(G)"], r.quantities["Do(G)"]) == (2, 3, 4)
    assert r.quantities["beta(G)"]["value"] == 4


def test_t11_non_p_group():
    r = V("T1.1", "dsd(6)", use_caps=False)
    assert r.status == "pass" and r.quantities["Do(G)"] == 7


def test_t14_g2():
    r = V("T1.4", "G2(2,2,1)", raw=True, use_caps=False)
    assert r.status == "pass"
    assert r.quantities["witness length"] == 6
    assert r.quantities["Do(G)"] == r.quantities["Do(G) search"] == 7


def test_t14_ineligible_is_undetermined():
    r = V("T1.4", "G1(2,2,2)")
    assert r.status == "undetermined"
    assert r.claim("Do(G) = L(G)").status == "undetermined"


def test_c15():
    r = V("C1.5", "G2(2,2,1)")
    assert r.status == "pass" and r.quantities["d(G)"] == 6


def test_t15_d8():
    r = V("T1.5", "dsd(4)", use_caps=False)
    assert r.status == "pass"
    assert r.quantities["cyclic index-p subgroup"] is True
    assert r.quantities["d(G)"] + 1 == r.quantities["Do(G)"] == r.quantities["L"] == 5


def test_t15_other_direction():
    # no cyclic subgroup of index 2, and the equality chain breaks
    r = V("T1.5", "abelian(2,2,2)", use_caps=False)
    assert r.status == "pass" and r.quantities["cyclic index-p subgroup"] is False


def test_t15_cyclic_skipped():
    assert V("T1.5", "cyclic(4)").status == "skipped"


def test_t12_small_and_sandwich():
    r = V("T1.2", "dsd(3)")
    assert r.status == "pass" and r.quantities["E(G)"] == 9
    big = V("T1.2", "dsd(8)")
    assert big.status == "undetermined"
    assert big.quantities["E sandwich"] == [24, 24.0]


def test_l4x_and_p234():
    assert V("L4.x", "G3(3,2,2,1)").status == "pass"
    assert V("P2.34", "G1(2,2,1)").status == "pass"
    assert V("P2.34", "abelian(2,4)").status == "skipped"


def test_budget_downgrades():
    r = V("T1.1", "dsd(3,3)", budget=Budget(nodes=20), use_caps=False)
    assert r.status == "undetermined" and r.budget_exhausted


def test_wrong_family():
    with pytest.raises(BadParameters):
        V("T1.4", "dsd(4)")
    with pytest.raises(BadParameters):
        V("T9.9", "dsd(4)")
