"""Finite groups as dense multiplication tables.

Tables are produced from polycyclic-style presentations by collection from
the left. Element 0 is always the identity, and elements are numbered by the
lexicographic order of their collected exponent vectors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .elemset import ElemSet, byte_tables, translate
from .errors import CapExceeded, InconsistentPresentation, NotPGroup

DEFAULT_CAP = 4096
ASSOC_FULL_CAP = 256
ASSOC_SPOT_TRIPLES = 100_000


class GroupTable:
    """A finite group given by its Cayley table.

    ``mul[x, y]`` is the index of ``x*y``. ``named`` maps designated generator
    names (``a``, ``b``, ``h``, ...) to element indices.
    """

    def __init__(
        self,
        mul,
        labels: Sequence[str] | None = None,
        named: Mapping[str, int] | None = None,
        name: str = "",
        validate: bool = True,
    ):
        mul = np.array(mul, dtype=np.int32)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise InconsistentPresentation("multiplication table must be a non-empty square array")
        n = mul.shape[0]
        self.order = n
        self.mul = mul
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        self.named = dict(named or {})
        self.name = name
        if validate:
            self.validate()
        inv = np.argmin(mul != 0, axis=1).astype(np.int32)
        self.inv = inv
        mul.flags.writeable = False
        inv.flags.writeable = False

    identity = 0

    def validate(self, assoc_cap: int = ASSOC_FULL_CAP, spot_triples: int = ASSOC_SPOT_TRIPLES, seed: int = 0) -> None:
        mul = self.mul
        n = self.order
        idx = np.arange(n)
        if mul.min() < 0 or mul.max() >= n:
            raise InconsistentPresentation("table entries out of range")
        if not (np.array_equal(mul[0], idx) and np.array_equal(mul[:, 0], idx)):
            raise InconsistentPresentation("element 0 is not a two-sided identity")
        srt = np.sort(mul, axis=1)
        if not np.all(srt == idx):
            raise InconsistentPresentation("a row of the table is not a permutation")
        srt = np.sort(mul, axis=0)
        if not np.all(srt == idx[:, None]):
            raise InconsistentPresentation("a column of the table is not a permutation")
        inv = np.argmin(mul != 0, axis=1)
        if not np.all(mul[inv, idx] == 0):
            raise InconsistentPresentation("left and right inverses differ")
        if n <= assoc_cap:
            for x in range(n):
                # (x*y)*z versus x*(y*z) over all y, z
                if not np.array_equal(mul[mul[x]], mul[x][mul]):
                    raise InconsistentPresentation(f"associativity fails for x={self.labels[x]}")
        else:
            rng = np.random.default_rng(seed)
            x, y, z = rng.integers(0, n, size=(3, spot_triples))
            if not np.array_equal(mul[mul[x, y], z], mul[x, mul[y, z]]):
                raise InconsistentPresentation("associativity fails on a sampled triple")

    # -- element arithmetic -------------------------------------------------

    def op(self, *xs: int) -> int:
        r = 0
        for x in xs:
            r = int(self.mul[r, x])
        return r

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = int(self.inv[x]), -k
        r, base = 0, int(x)
        while k:
            if k & 1:
                r = int(self.mul[r, base])
            base = int(self.mul[base, base])
            k >>= 1
        return r

    def commutator(self, x: int, y: int) -> int:
        """[x, y] = x^-1 y^-1 x y."""
        return self.op(int(self.inv[x]), int(self.inv[y]), x, y)

    def power_map(self, k: int) -> np.ndarray:
        """Array whose entry x is x**k."""
        if k < 0:
            return self.power_map(-k)[self.inv]
        result = np.zeros(self.order, dtype=np.int32)
        base = np.arange(self.order, dtype=np.int32)
        while k:
            if k & 1:
                result = self.mul[result, base]
            base = self.mul[base, base]
            k >>= 1
        return result

    def element(self, name: str) -> int:
        """Index of a designated generator, or of an element label."""
        if name in self.named:
            return self.named[name]
        try:
            return self.labels.index(name)
        except ValueError:
            raise KeyError(name) from None

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    # -- bit-vector translates ----------------------------------------------

    @cached_property
    def _ltabs(self) -> dict[int, list[list[int]]]:
        return {}

    @cached_property
    def _rtabs(self) -> dict[int, list[list[int]]]:
        return {}

    def left_tables(self, g: int) -> list[list[int]]:
        tabs = self._ltabs.get(g)
        if tabs is None:
            tabs = self._ltabs[g] = byte_tables(self.mul[g, :])
        return tabs

    def right_tables(self, g: int) -> list[list[int]]:
        tabs = self._rtabs.get(g)
        if tabs is None:
            tabs = self._rtabs[g] = byte_tables(self.mul[:, g])
        return tabs

    def lmul_bits(self, g: int, bits: int) -> int:
        """Bit vector of g*X."""
        return translate(self.left_tables(g), bits)

    def rmul_bits(self, g: int, bits: int) -> int:
        """Bit vector of X*g."""
        return translate(self.right_tables(g), bits)

    def __getstate__(self):
        state = self.__dict__.copy()
        for key in ("_ltabs", "_rtabs"):
            state.pop(key, None)
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)

    def __repr__(self) -> str:
        return f"GroupTable({self.name or '?'}, order={self.order})"


# -- presentations -----------------------------------------------------------


@dataclass(frozen=True)
class PcPresentation:
    """Polycyclic-style presentation with exponent-vector words.

    ``power_words[i]`` is the normal form of ``gens[i] ** rel_orders[i]`` and
    ``conj_words[(i, j)]`` (``i < j``) the normal form of ``gens[j] ** gens[i]``,
    i.e. ``gens[i]^-1 * gens[j] * gens[i]``. Both may only involve generators
    after position ``i``. Missing conjugation entries mean the two generators
    commute.
    """

    gens: tuple[str, ...]
    rel_orders: tuple[int, ...]
    power_words: tuple[tuple[int, ...], ...] = ()
    conj_words: Mapping[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    declared_order: int | None = None
    name: str = ""

    def word(self, **exps: int) -> tuple[int, ...]:
        """Exponent vector from keyword exponents, e.g. ``word(a=3, c=1)``."""
        unknown = set(exps) - set(self.gens)
        if unknown:
            raise KeyError(sorted(unknown))
        return tuple(exps.get(g, 0) % m for g, m in zip(self.gens, self.rel_orders))

    @property
    def order(self) -> int:
        return math.prod(self.rel_orders)


class _Collector:
    """Collection from the left on exponent vectors, memoised per (word, generator)."""

    def __init__(self, pres: PcPresentation):
        k = len(pres.gens)
        self.k = k
        self.m = pres.rel_orders
        zero = (0,) * k
        self.power = [tuple(w) if w else zero for w in pres.power_words] or [zero] * k
        self.conj = {}
        for i in range(k):
            for j in range(i + 1, k):
                self.conj[i, j] = tuple(pres.conj_words.get((i, j), _unit(k, j)))
        self.memo: dict[tuple[tuple[int, ...], int], tuple[int, ...]] = {}

    def mul_gen(self, e: tuple[int, ...], j: int) -> tuple[int, ...]:
        key = (e, j)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        head = list(e[: j + 1]) + [0] * (self.k - j - 1)
        head[j] += 1
        res: tuple[int, ...]
        if head[j] == self.m[j]:
            head[j] = 0
            res = self.mul_word(tuple(head), self.power[j])
        else:
            res = tuple(head)
        # w * g_j = g_j * (w ** g_j) for the tail w after position j
        for kk in range(j + 1, self.k):
            w = self.conj[j, kk]
            for _ in range(e[kk]):
                res = self.mul_word(res, w)
        self.memo[key] = res
        return res

    def mul_word(self, e: tuple[int, ...], w: tuple[int, ...]) -> tuple[int, ...]:
        for i, wi in enumerate(w):
            for _ in range(wi):
                e = self.mul_gen(e, i)
        return e


def _unit(k: int, j: int) -> tuple[int, ...]:
    v = [0] * k
    v[j] = 1
    return tuple(v)


def _label(gens: Sequence[str], e: Sequence[int]) -> str:
    parts = [g if x == 1 else f"{g}^{x}" for g, x in zip(gens, e) if x]
    return "*".join(parts) if parts else "1"


def _check_shape(pres: PcPresentation) -> None:
    k = len(pres.gens)
    if len(set(pres.gens)) != k:
        raise InconsistentPresentation("duplicate generator names")
    if len(pres.rel_orders) != k or any(m < 2 for m in pres.rel_orders):
        raise InconsistentPresentation("every generator needs a relative order >= 2")
    if pres.power_words and len(pres.power_words) != k:
        raise InconsistentPresentation("one power word per generator is required")

    def check_word(w, after: int, what: str) -> None:
        if len(w) != k:
            raise InconsistentPresentation(f"{what}: word has wrong length")
        for pos, (x, m) in enumerate(zip(w, pres.rel_orders)):
            if not 0 <= x < m:
                raise InconsistentPresentation(f"{what}: exponent out of range")
            if x and pos <= after:
                raise InconsistentPresentation(f"{what}: word must only use later generators")

    for i, w in enumerate(pres.power_words):
        if w:
            check_word(w, i, f"power word of {pres.gens[i]}")
    for (i, j), w in pres.conj_words.items():
        if not 0 <= i < j < k:
            raise InconsistentPresentation(f"bad conjugation key {(i, j)}")
        check_word(w, i, f"{pres.gens[j]}^{pres.gens[i]}")


def build_from_pc(pres: PcPresentation, cap: int = DEFAULT_CAP) -> GroupTable:
    """Realise a presentation as a validated table.

    Raises ``CapExceeded`` when the order is above ``cap`` and
    ``InconsistentPresentation`` when collection does not yield a group of the
    declared order satisfying every defining relation.
    """
    _check_shape(pres)
    n = pres.order
    if n > cap:
        raise CapExceeded(f"order {n} exceeds cap {cap}")
    if pres.declared_order is not None and pres.declared_order != n:
        raise InconsistentPresentation(
            f"declared order {pres.declared_order} differs from enumerated order {n}"
        )
    k = len(pres.gens)
    coll = _Collector(pres)
    normal_forms = list(itertools.product(*(range(m) for m in pres.rel_orders)))
    radix = [math.prod(pres.rel_orders[i + 1:]) for i in range(k)]

    def index(e: Sequence[int]) -> int:
        return sum(x * r for x, r in zip(e, radix))

    right_gen = np.empty((k, n), dtype=np.int32)
    for x, e in enumerate(normal_forms):
        for j in range(k):
            right_gen[j, x] = index(coll.mul_gen(e, j))

    mul = np.empty((n, n), dtype=np.int32)
    mul[:, 0] = np.arange(n)
    for y in range(1, n):
        e = normal_forms[y]
        last = max(i for i in range(k) if e[i])
        mul[:, y] = right_gen[last][mul[:, y - radix[last]]]

    labels = [_label(pres.gens, e) for e in normal_forms]
    named = {g: radix[i] for i, g in enumerate(pres.gens)}
    t = GroupTable(mul, labels=labels, named=named, name=pres.name)
    failed = presentation_failures(t, pres)
    if failed:
        raise InconsistentPresentation("relations fail in the built table: " + "; ".join(failed))
    return t


def presentation_failures(t: GroupTable, pres: PcPresentation) -> list[str]:
    """Defining relations of ``pres`` that do not hold in ``t``."""
    gens = [t.named[g] for g in pres.gens]

    def word_elem(w) -> int:
        r = 0
        for g, x in zip(gens, w):
            r = t.op(r, t.power(g, x))
        return r

    bad = []
    k = len(gens)
    for i in range(k):
        target = word_elem(pres.power_words[i]) if pres.power_words and pres.power_words[i] else 0
        if t.power(gens[i], pres.rel_orders[i]) != target:
            bad.append(f"{pres.gens[i]}^{pres.rel_orders[i]}")
        for j in range(i + 1, k):
            w = pres.conj_words.get((i, j), _unit(k, j))
            if t.op(int(t.inv[gens[i]]), gens[j], gens[i]) != word_elem(w):
                bad.append(f"{pres.gens[j]}^{pres.gens[i]}")
    return bad


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """Member set plus the generator list it was closed from."""

    table: GroupTable = field(repr=False, compare=False)
    members: ElemSet
    gens: tuple[int, ...] = ()

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def elements(self) -> list[int]:
        return self.members.to_list()

    def is_trivial(self) -> bool:
        return self.members.bits == 1

    def __le__(self, other: "Subgroup") -> bool:
        return self.members <= other.members


def _extend(t: GroupTable, members: list[int], mask: np.ndarray, gens: list[int]) -> None:
    """Close ``members`` (a subgroup) under right multiplication by ``gens``."""
    i = 0
    while i < len(members):
        x = members[i]
        row = t.mul[x]
        for g in gens:
            y = int(row[g])
            if not mask[y]:
                mask[y] = True
                members.append(y)
        i += 1


def closure(t: GroupTable, gens: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``gens``."""
    gens = [int(g) for g in gens]
    for g in gens:
        if not 0 <= g < t.order:
            raise IndexError(f"element {g} out of range")
    members = [0]
    mask = np.zeros(t.order, dtype=bool)
    mask[0] = True
    used: list[int] = []
    for g in dict.fromkeys(gens):
        if mask[g]:
            continue
        used.append(g)
        # <H, g>: one pass over the whole member list with every generator so far
        _extend(t, members, mask, used)
    return Subgroup(t, ElemSet.of(t.order, members), tuple(gens))


def whole_group(t: GroupTable) -> Subgroup:
    return Subgroup(t, ElemSet.full(t.order), tuple(range(t.order)))


def commutator_subgroup(t: GroupTable, H: Subgroup, K: Subgroup) -> Subgroup:
    """[H, K] = < [h, k] : h in H, k in K >."""
    h = np.array(H.elements(), dtype=np.int64)
    k = np.array(K.elements(), dtype=np.int64)
    mul, inv = t.mul, t.inv
    left = mul[inv[h][:, None], inv[k][None, :]]
    right = mul[h[:, None], k[None, :]]
    comms = np.unique(mul[left, right])
    return closure(t, comms.tolist())


def power_subgroup(t: GroupTable, H: Subgroup, n: int) -> Subgroup:
    """H^n = < x^n : x in H >."""
    if n < 1:
        raise ValueError("power must be positive")
    pm = t.power_map(n)
    return closure(t, np.unique(pm[H.elements()]).tolist())


def product_subgroup(t: GroupTable, H: Subgroup, K: Subgroup) -> Subgroup:
    """< H, K >."""
    return closure(t, H.elements() + K.elements())


def element_order(t: GroupTable, x: int) -> int:
    if not 0 <= x < t.order:
        raise IndexError(f"element {x} out of range")
    k, y = 1, int(x)
    while y != 0:
        y = int(t.mul[y, x])
        k += 1
    return k


def element_orders(t: GroupTable) -> np.ndarray:
    orders = np.zeros(t.order, dtype=np.int64)
    cur = np.arange(t.order, dtype=np.int32)
    idx = np.arange(t.order, dtype=np.int32)
    for k in range(1, t.order + 1):
        hit = (cur == 0) & (orders == 0)
        orders[hit] = k
        if orders.all():
            break
        cur = t.mul[cur, idx]
    return orders


def prime_power(n: int) -> tuple[int, int] | None:
    """(p, k) with n = p**k, or None. n = 1 gives None."""
    if n < 2:
        return None
    p = next(q for q in range(2, n + 1) if n % q == 0)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def smallest_prime_divisor(n: int) -> int:
    return next(q for q in range(2, n + 1) if n % q == 0)


@dataclass(frozen=True)
class StructureProfile:
    order: int
    is_cyclic: bool
    is_abelian: bool
    center_size: int
    exponent: int
    p: int | None = None
    min_generators: int | None = None
    has_cyclic_subgroup_of_index_p: bool | None = None


def center(t: GroupTable) -> Subgroup:
    commuting = np.all(t.mul == t.mul.T, axis=1)
    return Subgroup(t, ElemSet.of(t.order, np.flatnonzero(commuting).tolist()))


def frattini_p(t: GroupTable, p: int) -> Subgroup:
    """G^p [G, G], the Frattini subgroup of a p-group."""
    G = whole_group(t)
    return product_subgroup(t, power_subgroup(t, G, p), commutator_subgroup(t, G, G))


def structure_profile(t: GroupTable, p: int | None = None) -> StructureProfile:
    """Basic structural data; the p-group fields need ``p``."""
    orders = element_orders(t)
    n = t.order
    base = dict(
        order=n,
        is_cyclic=bool(orders.max() == n),
        is_abelian=t.is_abelian,
        center_size=center(t).order,
        exponent=math.lcm(*orders.tolist()),
    )
    if p is None:
        return StructureProfile(**base)
    pp = prime_power(n)
    if n != 1 and (pp is None or pp[0] != p):
        raise NotPGroup(f"order {n} is not a power of {p}")
    quotient = n // frattini_p(t, p).order
    r = round(math.log(quotient, p)) if quotient > 1 else 0
    return StructureProfile(
        **base,
        p=p,
        min_generators=r,
        has_cyclic_subgroup_of_index_p=bool(np.any(orders == n // p)),
    )


def generating_set(t: GroupTable) -> list[int]:
    """A short generating set, greedy over elements by decreasing order."""
    orders = element_orders(t)
    cand = sorted(range(1, t.order), key=lambda x: (-orders[x], x))
    gens: list[int] = []
    sub = closure(t, [])
    for x in cand:
        if sub.order == t.order:
            break
        if x not in sub:
            gens.append(x)
            sub = closure(t, gens)
    return gens
