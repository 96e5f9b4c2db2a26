"""Sequences over a group and their product sets.

For an unordered sequence (a multiset) the product set of a sub-multiset
ranges over *every* arrangement of its terms; for an ordered sequence only
the order-preserving subsequences count. Both are computed exactly with bit
vectors (see :mod:`zerosum.elemset`).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .elemset import ElemSet, translate
from .errors import BadLength, EmptySequence, NotAbelian, SearchExhausted
from .groups import GroupTable


@dataclass(frozen=True)
class SeqMulti:
    """Unordered sequence as an exponent vector: ``counts[g]`` = multiplicity of g."""

    counts: tuple[int, ...]

    @classmethod
    def from_elements(cls, order: int, elements: Iterable[int]) -> "SeqMulti":
        c = [0] * order
        for x in elements:
            c[int(x)] += 1
        return cls(tuple(c))

    @classmethod
    def empty(cls, order: int) -> "SeqMulti":
        return cls((0,) * order)

    def __len__(self) -> int:
        return sum(self.counts)

    @property
    def order(self) -> int:
        return len(self.counts)

    def elements(self) -> list[int]:
        """Terms in non-decreasing index order."""
        return [g for g, v in enumerate(self.counts) for _ in range(v)]

    def support(self) -> list[int]:
        return [g for g, v in enumerate(self.counts) if v]

    def divides(self, other: "SeqMulti") -> bool:
        return all(a <= b for a, b in zip(self.counts, other.counts))

    def __add__(self, other: "SeqMulti") -> "SeqMulti":
        return SeqMulti(tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __sub__(self, other: "SeqMulti") -> "SeqMulti":
        if not other.divides(self):
            raise ValueError("subtrahend is not a subsequence")
        return SeqMulti(tuple(a - b for a, b in zip(self.counts, other.counts)))

    def __repr__(self) -> str:
        return f"SeqMulti({self.elements()})"


@dataclass(frozen=True)
class SeqOrdered:
    terms: tuple[int, ...]

    @classmethod
    def of(cls, terms: Iterable[int]) -> "SeqOrdered":
        return cls(tuple(int(x) for x in terms))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def restrict(self, allowed: ElemSet) -> "SeqOrdered":
        """Terms lying in ``allowed``, order preserved."""
        return SeqOrdered(tuple(x for x in self.terms if x in allowed))

    def unordered(self, order: int) -> SeqMulti:
        return SeqMulti.from_elements(order, self.terms)


def _as_multi(t: GroupTable, s: SeqMulti | Sequence[int]) -> SeqMulti:
    if isinstance(s, SeqMulti):
        if s.order != t.order:
            raise ValueError("sequence belongs to a group of different order")
        return s
    return SeqMulti.from_elements(t.order, s)


class SubProducts:
    """π(T) for every sub-multiset T of a growing multiset.

    Sub-multisets are indexed in mixed radix with the most recently added
    support element as the most significant digit, so appending a term only
    appends a contiguous block of new entries and ``pop`` truncates it.
    Entries of size above ``max_size`` are left empty: they are never needed
    to compute smaller ones.
    """

    def __init__(self, t: GroupTable, max_size: int | None = None):
        self.t = t
        self.max_size = max_size
        self.pis: list[int] = [1]  # π(empty) = {identity}
        self.sizes: list[int] = [0]
        self.elems: list[int] = []
        self.radix: list[int] = []
        self.strides: list[int] = []
        self.tabs: list[list[list[int]]] = []
        self._stack: list[tuple[int, bool]] = []

    def __len__(self) -> int:
        return sum(r - 1 for r in self.radix)

    def push(self, g: int) -> tuple[int, int]:
        """Append one term ``g`` (must be >= every current term).

        Returns (union of new products, union of new products of size max_size).
        """
        pis, sizes = self.pis, self.sizes
        if self.elems and self.elems[-1] == g:
            top = len(self.elems) - 1
            stride = self.strides[top]
            self.radix[top] += 1
            fresh = False
        else:
            if self.elems and g < self.elems[-1]:
                raise ValueError("terms must be pushed in non-decreasing order")
            stride = len(pis)
            self.elems.append(g)
            self.radix.append(2)
            self.strides.append(stride)
            self.tabs.append(self.t.left_tables(g))
            top = len(self.elems) - 1
            fresh = True
        start = len(pis)
        self._stack.append((start, fresh))
        cap = self.max_size
        tabs_all, strides, radix = self.tabs, self.strides, self.radix
        earlier = [(tabs_all[i], strides[i], radix[i]) for i in range(top)]
        gtabs = tabs_all[top]
        new_union = 0
        new_top = 0
        for low in range(stride):
            idx = start + low
            size = sizes[idx - stride] + 1
            sizes.append(size)
            if cap is not None and size > cap:
                pis.append(0)
                continue
            x = pis[idx - stride]
            r = 0
            c = 0
            while x:
                r |= gtabs[c][x & 255]
                x >>= 8
                c += 1
            for tabs, st, rd in earlier:
                if (low // st) % rd:
                    x = pis[idx - st]
                    c = 0
                    while x:
                        r |= tabs[c][x & 255]
                        x >>= 8
                        c += 1
            pis.append(r)
            new_union |= r
            if size == cap:
                new_top |= r
        return new_union, new_top

    def pop(self) -> None:
        start, fresh = self._stack.pop()
        del self.pis[start:]
        del self.sizes[start:]
        if fresh:
            self.elems.pop()
            self.radix.pop()
            self.strides.pop()
            self.tabs.pop()
        else:
            self.radix[-1] -= 1

    def full(self) -> int:
        """π of the whole multiset."""
        return self.pis[-1]

    def union(self, size: int | None = None) -> int:
        if size is None:
            r = 0
            for x in self.pis[1:]:
                r |= x
            return r
        r = 0
        for x, s in zip(self.pis, self.sizes):
            if s == size:
                r |= x
        return r


def _subproducts(t: GroupTable, s: SeqMulti, max_size: int | None = None) -> SubProducts:
    sp = SubProducts(t, max_size)
    for g in s.elements():
        sp.push(g)
    return sp


def pi_set(t: GroupTable, s: SeqMulti | Sequence[int]) -> ElemSet:
    """Products of all arrangements of ``s``."""
    s = _as_multi(t, s)
    if len(s) == 0:
        raise EmptySequence("π is only defined for non-empty sequences")
    return ElemSet(t.order, _subproducts(t, s).full())


def big_pi(t: GroupTable, s: SeqMulti | Sequence[int]) -> ElemSet:
    """Union of π(T) over all non-empty sub-multisets T of ``s``."""
    s = _as_multi(t, s)
    if len(s) == 0:
        raise EmptySequence("Π is only defined for non-empty sequences")
    return ElemSet(t.order, _subproducts(t, s).union())


def pi_r(t: GroupTable, s: SeqMulti | Sequence[int], r: int) -> ElemSet:
    """Union of π(T) over sub-multisets of size exactly ``r``."""
    s = _as_multi(t, s)
    if not 1 <= r <= len(s):
        raise BadLength(f"r={r} outside [1, {len(s)}]")
    return ElemSet(t.order, _subproducts(t, s, max_size=r).union(r))


def is_product_one_free(t: GroupTable, s: SeqMulti | Sequence[int]) -> bool:
    return 0 not in big_pi(t, s)


def ordered_reach(t: GroupTable, s: SeqOrdered | Sequence[int]) -> ElemSet:
    """Products of all non-empty ordered subsequences, by a left-to-right scan."""
    terms = s.terms if isinstance(s, SeqOrdered) else tuple(s)
    if not terms:
        raise EmptySequence("Π(S*) is only defined for non-empty sequences")
    P = 0
    for g in terms:
        P = P | translate(t.right_tables(g), P) | (1 << g)
    return ElemSet(t.order, P)


def ordered_reach_prefixes(t: GroupTable, s: SeqOrdered | Sequence[int]) -> list[ElemSet]:
    """P_1, ..., P_l of the scan, for monotonicity checks."""
    terms = s.terms if isinstance(s, SeqOrdered) else tuple(s)
    out = []
    P = 0
    for g in terms:
        P = P | translate(t.right_tables(g), P) | (1 << g)
        out.append(ElemSet(t.order, P))
    return out


def is_ordered_free(t: GroupTable, s: SeqOrdered | Sequence[int]) -> bool:
    return 0 not in ordered_reach(t, s)


def set_product(t: GroupTable, A: ElemSet, B: ElemSet) -> ElemSet:
    """{a*b : a in A, b in B}."""
    r = 0
    for b in B:
        r |= translate(t.right_tables(b), A.bits)
    return ElemSet(t.order, r)


def find_disjoint_equal_product(t: GroupTable, s: SeqMulti | Sequence[int], k: int) -> tuple[SeqMulti, SeqMulti]:
    """Disjoint U, V dividing ``s`` with π(U) = π(V) and at most k-1 terms left over.

    Each term is assigned to U, to V or to the leftover. A backward DP over the
    terms (in non-decreasing index order), with state (π(U) π(V)^-1, |U| - |V|),
    minimises the leftover first and the imbalance ||U| - |V|| second; the
    forward pass then prefers U, then V, then leftover, which makes the answer
    unique. The empty sequence has product 1.
    """
    if not t.is_abelian:
        raise NotAbelian("disjoint equal-product subsequences need an abelian group")
    if 2 ** k <= t.order:
        raise ValueError(f"need 2^k > |G|, got k={k}, |G|={t.order}")
    s = _as_multi(t, s)
    n = t.order
    if len(s) <= k - 1:
        return SeqMulti.empty(n), SeqMulti.empty(n)
    terms = s.elements()
    m = len(terms)
    mul, inv = t.mul, t.inv
    big = (m + 1) * (2 * m + 2)
    w = 2 * m + 1  # cost = leftover * w + imbalance
    off = m  # column index of imbalance 0
    # cost[i][x, j]: least cost over terms[i:] from state x with imbalance j - off
    cost = np.full((m + 1, n, 2 * m + 1), big, dtype=np.int64)
    cost[m, 0, :] = np.abs(np.arange(2 * m + 1) - off)
    for i in range(m - 1, -1, -1):
        g = terms[i]
        nxt = cost[i + 1]
        up = np.full_like(nxt, big)
        dn = np.full_like(nxt, big)
        up[:, :-1] = nxt[mul[:, g]][:, 1:]
        dn[:, 1:] = nxt[mul[:, inv[g]]][:, :-1]
        cost[i] = np.minimum(np.minimum(up, dn), nxt + w)
    best = int(cost[0, 0, off])
    if best // w > k - 1:
        raise SearchExhausted(f"no disjoint equal-product pair with leftover <= {k - 1} (best {best // w})")
    U, V = [], []
    x, j = 0, off
    for i, g in enumerate(terms):
        rem = int(cost[i, x, j])
        nxt = cost[i + 1]
        xu, xv = int(mul[x, g]), int(mul[x, inv[g]])
        if j + 1 <= 2 * m and nxt[xu, j + 1] == rem:
            U.append(g)
            x, j = xu, j + 1
        elif j - 1 >= 0 and nxt[xv, j - 1] == rem:
            V.append(g)
            x, j = xv, j - 1
        # otherwise the term is left over
    return SeqMulti.from_elements(n, U), SeqMulti.from_elements(n, V)


def product_of(t: GroupTable, terms: Iterable[int]) -> int:
    r = 0
    for g in terms:
        r = int(t.mul[r, g])
    return r


def multiset_count(s: SeqMulti) -> int:
    """Number of sub-multisets, including the empty one."""
    return math.prod(v + 1 for v in s.counts)


def counter_of(s: SeqMulti) -> Counter:
    return Counter({g: v for g, v in enumerate(s.counts) if v})
