"""Loewy length of F_p[G] for a p-group G, computed two independent ways.

``loewy_jennings`` evaluates ``1 + (p-1) * sum(i * e_i)`` from the
Brauer-Jennings-Zassenhaus series, where ``p^e_i = |M_i / M_(i+1)|``.
``loewy_direct`` instead builds the powers of the augmentation ideal as
subspaces of F_p^|G| and reads off the first power that vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceeded, NotPGroup, PreconditionFailed
from .groups import (
    GroupTable,
    Subgroup,
    closure,
    commutator_subgroup,
    generating_set,
    power_subgroup,
    prime_power,
    product_subgroup,
    whole_group,
)

LINALG_CAP = 512


def _require_p_group(t: GroupTable, p: int) -> None:
    if t.order == 1:
        return
    pp = prime_power(t.order)
    if pp is None or pp[0] != p:
        raise NotPGroup(f"order {t.order} is not a power of {p}")


@dataclass(frozen=True)
class MSeries:
    terms: tuple[Subgroup, ...] = field(repr=False)  # M_1, ..., M_(d+1)
    orders: tuple[int, ...]
    e: tuple[int, ...]  # e_1, ..., e_d
    p: int

    @property
    def d(self) -> int:
        return len(self.e)


def m_series(t: GroupTable, p: int) -> MSeries:
    """M_1 = G, M_i = [M_(i-1), G] * M_ceil(i/p)^p, until the trivial group."""
    _require_p_group(t, p)
    G = whole_group(t)
    terms = [G]
    while not terms[-1].is_trivial():
        i = len(terms) + 1
        comm = commutator_subgroup(t, terms[-1], G)
        pw = power_subgroup(t, terms[-(-i // p) - 1], p)
        terms.append(product_subgroup(t, comm, pw))
    orders = tuple(m.order for m in terms)
    e = tuple(round(math.log(a // b, p)) for a, b in zip(orders, orders[1:]))
    ms = MSeries(tuple(terms), orders, e, p)
    _check_m_series(t, ms)
    return ms


def _check_m_series(t: GroupTable, ms: MSeries) -> None:
    """Decreasing chain with elementary abelian layers."""
    p = ms.p
    pm = t.power_map(p)
    for upper, lower in zip(ms.terms, ms.terms[1:]):
        if not lower <= upper:
            raise AssertionError("M-series is not decreasing")
        xs = np.array(upper.elements())
        low = lower.members.to_array()
        if not low[pm[xs]].all():
            raise AssertionError("x^p escapes the next M-series term")
        comm = t.mul[t.mul[t.inv[xs][:, None], t.inv[xs][None, :]], t.mul[xs[:, None], xs[None, :]]]
        if not low[comm].all():
            raise AssertionError("M-series layer is not abelian")


def loewy_jennings(ms: MSeries, p: int | None = None) -> int:
    p = ms.p if p is None else p
    return 1 + (p - 1) * sum(i * ei for i, ei in enumerate(ms.e, start=1))


# -- direct computation ---------------------------------------------------------


def row_reduce_mod_p(m: np.ndarray, p: int) -> np.ndarray:
    """Reduced row echelon basis of the row space of ``m`` over F_p.

    Pivots are taken in the lowest available column, from the lowest-index
    row holding a non-zero entry there.
    """
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = a[r] * inv % p
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        r += 1
    return a[:r]


def rank_mod_p(m: np.ndarray, p: int) -> int:
    return row_reduce_mod_p(m, p).shape[0]


@dataclass(frozen=True)
class RadicalProfile:
    dims: tuple[int, ...]  # dims[k] = dim J^k, ending with 0

    @property
    def nilpotency_index(self) -> int:
        return self.dims.index(0)


def loewy_direct(t: GroupTable, p: int, cap: int = LINALG_CAP) -> RadicalProfile:
    """Dimensions of J^k, J the augmentation ideal, down to zero.

    J^(k+1) = J^k * J is spanned by v*(x - 1) for v in a basis of J^k and x in
    a generating set of G, because J is generated as a left ideal by those
    x - 1 and J^k * F_p[G] = J^k.
    """
    _require_p_group(t, p)
    n = t.order
    if n > cap:
        raise CapExceeded(f"order {n} exceeds linear-algebra cap {cap}")
    # right multiplication by x permutes coordinates: (v x)[y] = v[y x^-1]
    perms = [t.mul[:, t.inv[x]] for x in generating_set(t)]
    basis = np.zeros((n - 1, n), dtype=np.int64)
    basis[np.arange(n - 1), np.arange(1, n)] = 1
    basis[:, 0] = p - 1  # g - 1 for every g != 1
    basis = row_reduce_mod_p(basis, p)
    dims = [n, basis.shape[0]]
    while basis.shape[0]:
        cand = np.concatenate([basis[:, perm] - basis for perm in perms]) % p
        nxt = row_reduce_mod_p(cand, p)
        if nxt.shape[0] >= basis.shape[0]:
            raise AssertionError("power of the augmentation ideal failed to shrink")
        basis = nxt
        dims.append(basis.shape[0])
    return RadicalProfile(tuple(dims))


# -- power structure ---------------------------------------------------------------


@dataclass(frozen=True)
class PowerStep:
    s: int
    power_order: int  # |G^(2^s)|
    m_series_ok: bool  # M_j = G^(2^s) for j in [2^(s-1)+1, 2^s]
    generators_ok: bool  # G^(2^s) = <a^(2^s), b^(2^s), [a,b]^(2^(s-1))>

    @property
    def ok(self) -> bool:
        return self.m_series_ok and self.generators_ok


def satisfies_class_two(t: GroupTable) -> bool:
    """[G,G] != 1 and [[G,G],G] = 1."""
    G = whole_group(t)
    D = commutator_subgroup(t, G, G)
    return not D.is_trivial() and commutator_subgroup(t, D, G).is_trivial()


def verify_power_structure(t: GroupTable, a: int | None = None, b: int | None = None) -> list[PowerStep]:
    """Check the M-series / power-subgroup identities of a 2-generator 2-group of class two."""
    a = t.named["a"] if a is None else a
    b = t.named["b"] if b is None else b
    _require_p_group(t, 2)
    if not satisfies_class_two(t):
        raise PreconditionFailed("need [G,G] != 1 and [[G,G],G] = 1")
    if closure(t, [a, b]).order != t.order:
        raise PreconditionFailed("designated elements do not generate G")
    ms = m_series(t, 2)
    G = whole_group(t)
    ab = t.commutator(a, b)

    def M(j: int) -> Subgroup:
        return ms.terms[j - 1] if j <= len(ms.terms) else ms.terms[-1]

    steps = []
    s = 1
    while True:
        Gs = power_subgroup(t, G, 2 ** s)
        m_ok = all(M(j).members == Gs.members for j in range(2 ** (s - 1) + 1, 2 ** s + 1))
        gen = closure(t, [t.power(a, 2 ** s), t.power(b, 2 ** s), t.power(ab, 2 ** (s - 1))])
        steps.append(PowerStep(s, Gs.order, m_ok, gen.members == Gs.members))
        if Gs.is_trivial():
            break
        s += 1
    return steps
