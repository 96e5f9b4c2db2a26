import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zerosum.elemset import ElemSet
from zerosum.errors import BadLength, EmptySequence, NotAbelian
from zerosum.props import brute_big_pi, brute_ordered_reach, brute_pi, brute_pi_r
from zerosum.sequences import (
    SeqMulti,
    big_pi,
    find_disjoint_equal_product,
    is_ordered_free,
    ordered_reach,
    ordered_reach_prefixes,
    pi_r,
    pi_set,
    product_of,
    set_product,
)

from conftest import build

SMALL = ["cyclic(5)", "abelian(2,2)", "dsd(3)", "dsd(4)", "G4(1)", "dsd(2,2)", "dsd(5)", "dsd(6)", "abelian(2,4)"]


def test_pi_set_examples(grp):
    s3 = grp("dsd(3)")
    a, h = s3.named["g1"], s3.named["h"]
    assert set(pi_set(s3, [a, a])) == {s3.op(a, a)}
    assert set(pi_set(s3, [h, a])) == {s3.op(h, a), s3.op(a, h)}
    assert len(pi_set(s3, [h, a])) == 2
    c = grp("abelian(2,4)")
    assert len(pi_set(c, [1, 4, 5, 5])) == 1
    with pytest.raises(EmptySequence):
        pi_set(c, [])


def test_big_pi_examples(grp):
    t = grp("cyclic(7)")
    g = t.named["g"]
    assert set(big_pi(t, [g] * 6)) == set(range(1, 7))
    s3 = grp("dsd(3)")
    a, h = s3.named["g1"], s3.named["h"]
    assert set(big_pi(s3, [a, h])) == {a, h, s3.op(a, h), s3.op(h, a)}


def test_pi_r_examples(grp):
    t = grp("cyclic(3)")
    g = t.named["g"]
    assert set(pi_r(t, [g] * 5, 3)) == {0}
    s3 = grp("dsd(3)")
    s = [1, 1, 3, 4]
    assert pi_r(s3, s, 4) == pi_set(s3, s)
    assert set(pi_r(s3, s, 1)) == {1, 3, 4}
    with pytest.raises(BadLength):
        pi_r(s3, s, 5)


def test_ordered_reach_examples(grp):
    t = grp("cyclic(4)")
    g = t.named["g"]
    assert set(ordered_reach(t, [g] * 3)) == {1, 2, 3}
    u = grp("G2(2,2,1)")
    a, b = u.named["a"], u.named["b"]
    assert is_ordered_free(u, [a] * 3 + [b] * 3)
    with pytest.raises(EmptySequence):
        ordered_reach(u, [])


def test_set_product_examples(grp):
    t = grp("cyclic(3)")
    g = t.named["g"]
    B = ElemSet.of(3, [1, 2])
    assert set_product(t, ElemSet.of(3, [0]), B) == B
    assert set_product(t, ElemSet.of(3, [0, g]), ElemSet.of(3, [0, g])).is_full()
    c4 = grp("cyclic(4)")
    g2 = c4.power(c4.named["g"], 2)
    A = ElemSet.of(4, [0, g2])
    assert set(set_product(c4, A, A)) == {0, g2}


def test_disjoint_equal_product_examples(grp):
    c2 = grp("cyclic(2)")
    g = c2.named["g"]
    U, V = find_disjoint_equal_product(c2, [g, g], 2)
    assert U.elements() == [g] and V.elements() == [g]
    U, V = find_disjoint_equal_product(c2, [g], 2)
    assert len(U) == len(V) == 0
    with pytest.raises(NotAbelian):
        find_disjoint_equal_product(grp("dsd(3)"), [1, 2], 3)


def test_disjoint_equal_product_c8_random():
    t = build("cyclic(8)")
    rng = np.random.default_rng(7)
    for _ in range(100):
        s = rng.integers(0, 8, size=12).tolist()
        U, V = find_disjoint_equal_product(t, s, 4)
        whole = SeqMulti.from_elements(8, s)
        assert (U + V).divides(whole)
        assert product_of(t, U.elements()) == product_of(t, V.elements())
        assert len(whole) - len(U) - len(V) <= 3


def test_disjoint_equal_product_deterministic():
    t = build("abelian(2,4)")
    s = [1, 3, 5, 6, 6, 7]
    assert find_disjoint_equal_product(t, s, 4) == find_disjoint_equal_product(t, s, 4)


@st.composite
def group_and_terms(draw, max_len=6):
    spec = draw(st.sampled_from(SMALL))
    t = build(spec)
    terms = draw(st.lists(st.integers(0, t.order - 1), min_size=1, max_size=max_len))
    return t, terms


@settings(max_examples=60, deadline=None)
@given(group_and_terms())
def test_pi_set_matches_permutation_oracle(gt):
    t, terms = gt
    assert set(pi_set(t, terms)) == brute_pi(t, terms)


@settings(max_examples=60, deadline=None)
@given(group_and_terms())
def test_big_pi_matches_oracle(gt):
    t, terms = gt
    assert set(big_pi(t, terms)) == brute_big_pi(t, terms)


@settings(max_examples=60, deadline=None)
@given(group_and_terms(), st.integers(1, 6))
def test_pi_r_matches_oracle(gt, r):
    t, terms = gt
    r = min(r, len(terms))
    assert set(pi_r(t, terms, r)) == brute_pi_r(t, terms, r)


@settings(max_examples=60, deadline=None)
@given(group_and_terms(max_len=14))
def test_ordered_reach_matches_subsequence_oracle(gt):
    t, terms = gt
    assert set(ordered_reach(t, terms)) == brute_ordered_reach(t, terms)


@settings(max_examples=40, deadline=None)
@given(group_and_terms(max_len=10))
def test_ordered_reach_prefixes_grow(gt):
    t, terms = gt
    ps = ordered_reach_prefixes(t, terms)
    assert all(a <= b for a, b in zip(ps, ps[1:]))


@settings(max_examples=40, deadline=None)
@given(group_and_terms(max_len=5), st.integers(0, 15))
def test_big_pi_monotone(gt, g):
    t, terms = gt
    g %= t.order
    assert big_pi(t, terms) <= big_pi(t, terms + [g])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["cyclic(6)", "abelian(2,4)", "abelian(3,3)"]), st.lists(st.integers(0, 100), min_size=1, max_size=6))
def test_abelian_pi_singleton(spec, raw):
    t = build(spec)
    terms = [x % t.order for x in raw]
    assert len(pi_set(t, terms)) == 1
    assert len(big_pi(t, terms)) <= t.order


def test_seqmulti_algebra():
    a = SeqMulti.from_elements(4, [1, 1, 2])
    b = SeqMulti.from_elements(4, [1])
    assert b.divides(a) and len(a) == 3
    assert (a - b).elements() == [1, 2]
    assert (a + b).counts == (0, 3, 1, 0)
    with pytest.raises(ValueError):
        b - a
