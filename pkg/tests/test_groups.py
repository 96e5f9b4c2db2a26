import numpy as np
import pytest

from zerosum.errors import CapExceeded, InconsistentPresentation, NotPGroup
from zerosum.groups import (
    GroupTable,
    PcPresentation,
    build_from_pc,
    closure,
    commutator_subgroup,
    element_order,
    element_orders,
    power_subgroup,
    structure_profile,
    whole_group,
)


def cyclic_pres(n):
    return PcPresentation(("g",), (n,), ((0,),), {}, n, f"C{n}")


def test_cyclic_table_orders():
    t = build_from_pc(cyclic_pres(6))
    assert t.order == 6
    for x in range(6):
        assert element_order(t, x) == 6 // np.gcd(x, 6)


def test_s3_from_presentation():
    # h^2 = 1, g^3 = 1, g^h = g^2
    pres = PcPresentation(("h", "g"), (2, 3), ((0, 0), (0, 0)), {(0, 1): (0, 2)}, 6)
    t = build_from_pc(pres)
    assert not t.is_abelian
    assert int(np.sum(element_orders(t) == 2)) == 3


def test_q8_has_one_involution(grp):
    t = grp("G4(1)")
    assert t.order == 8
    assert int(np.sum(element_orders(t) == 2)) == 1


def test_inconsistent_presentation_rejected():
    # g^h = g^2 with g of order 5 is not an automorphism of order dividing 2
    pres = PcPresentation(("h", "g"), (2, 5), ((0, 0), (0, 0)), {(0, 1): (0, 2)}, 10)
    with pytest.raises(InconsistentPresentation):
        build_from_pc(pres)


def test_cap_exceeded():
    with pytest.raises(CapExceeded):
        build_from_pc(cyclic_pres(64), cap=32)


def test_table_invariants(grp):
    t = grp("G2(2,2,1)")
    n = t.order
    assert np.array_equal(t.mul[0], np.arange(n)) and np.array_equal(t.mul[:, 0], np.arange(n))
    assert np.all(t.mul[np.arange(n), t.inv] == 0)
    for row in t.mul:
        assert sorted(row.tolist()) == list(range(n))


def test_bad_table_rejected():
    mul = np.array([[0, 1, 2], [1, 1, 0], [2, 0, 1]])
    with pytest.raises(InconsistentPresentation):
        GroupTable(mul)


def test_closure_examples(grp):
    t = grp("cyclic(6)")
    assert closure(t, []).order == 1
    g2 = t.power(t.named["g"], 2)
    assert closure(t, [g2]).order == 3
    s3 = grp("dsd(3)")
    inv = [x for x in range(6) if element_order(s3, x) == 2]
    assert closure(s3, inv[:2]).order == 6


def test_commutator_subgroups(grp):
    a = grp("abelian(2,4)")
    G = whole_group(a)
    assert commutator_subgroup(a, G, G).is_trivial()
    s3 = grp("dsd(3)")
    G = whole_group(s3)
    assert commutator_subgroup(s3, G, G).order == 3


@pytest.mark.parametrize("spec", ["G1(1,1,1)", "G2(2,2,1)", "G2(4,2,2)", "G3(3,2,2,1)", "G4(1)", "G4(2)", "G1(2,2,1)"])
def test_class_two_families(grp, spec):
    t = grp(spec)
    G = whole_group(t)
    D = commutator_subgroup(t, G, G)
    assert not D.is_trivial()
    assert commutator_subgroup(t, D, G).is_trivial()
    # [G,G] is inside G^2 for a 2-group
    assert D <= power_subgroup(t, G, 2)


def test_power_subgroups(grp):
    t = grp("cyclic(8)")
    G = whole_group(t)
    assert power_subgroup(t, G, 1).members == G.members
    assert power_subgroup(t, G, 2).order == 4
    u = grp("G2(2,2,1)")
    U = whole_group(u)
    for i in range(3):
        for j in range(3):
            lhs = power_subgroup(u, power_subgroup(u, U, 2 ** i), 2 ** j)
            assert lhs.members == power_subgroup(u, U, 2 ** (i + j)).members
    # n | m implies G^m inside G^n
    assert power_subgroup(u, U, 4) <= power_subgroup(u, U, 2)


def test_element_orders(grp):
    t = grp("cyclic(12)")
    assert element_order(t, 0) == 1
    assert element_order(t, t.named["g"]) == 12
    u = grp("G2(2,2,1)")
    assert element_order(u, u.named["a"]) == 4


def test_structure_profiles(grp):
    p = structure_profile(grp("cyclic(8)"), 2)
    assert p.is_cyclic and p.min_generators == 1 and p.has_cyclic_subgroup_of_index_p
    p = structure_profile(grp("dsd(4)"), 2)
    assert p.min_generators == 2 and p.has_cyclic_subgroup_of_index_p
    p = structure_profile(grp("G1(1,1,1)"), 2)
    assert p.center_size == 2 and p.min_generators == 2
    with pytest.raises(NotPGroup):
        structure_profile(grp("dsd(3)"), 2)
