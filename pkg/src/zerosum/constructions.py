"""The concrete groups, sequences and closed forms studied here.

Group families (commutators are ``[x, y] = x^-1 y^-1 x y``):

* ``G1(α,β,γ)``: ``(<c> x <a>) ⋊ <b>`` with ``[a,b] = c`` central,
  ``o(a), o(b), o(c) = 2^α, 2^β, 2^γ``.
* ``G2(α,β,γ)``: ``<a> ⋊ <b>`` with ``[a,b] = a^(2^(α-γ))``.
* ``G3(α,β,γ,σ)``: ``(<c> x <a>) ⋊ <b>`` with ``[a,b] = a^(2^(α-γ)) c`` and
  ``[c,b] = a^(-2^(2(α-γ))) c^(-2^(α-γ))``, ``o(c) = 2^σ``.
* ``G4(γ)``: ``(<c> x <a>)<b>`` with ``[a,b] = a^2 c``, ``[c,b] = a^-4 c^-2``,
  ``a^(2^γ) = b^(2^γ)``, ``o(a) = o(b) = 2^(γ+1)``, ``o(c) = 2^(γ-1)``.
* ``dsd(A)``: ``A ⋊ C2`` with the involution ``h`` inverting A.

All presentations use the generator order ``b, a, c`` (``h, g1, ...`` for
dsd) so that every conjugate only involves later generators.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import BadParameters, InconsistentPresentation, WrongFamily
from .groups import DEFAULT_CAP, GroupTable, PcPresentation, build_from_pc, closure, element_order, prime_power
from .groupspec import PaperGroupSpec, check_parameters
from .sequences import SeqMulti, SeqOrdered


def _pres(gens, orders, power=None, conj=None, order=None, name="") -> PcPresentation:
    k = len(gens)
    zero = (0,) * k
    pw = tuple(tuple(power.get(g, zero)) if power else zero for g in gens)

    return PcPresentation(
        gens=tuple(gens),
        rel_orders=tuple(orders),
        power_words=pw,
        conj_words=dict(conj or {}),
        declared_order=order,
        name=name,
    )


def _word(gens, orders, **exps) -> tuple[int, ...]:
    return tuple(exps.get(g, 0) % m for g, m in zip(gens, orders))


def presentation(spec: PaperGroupSpec) -> PcPresentation:
    check_parameters(spec)
    f, p = spec.family, spec.params
    name = str(spec)
    if f == "cyclic":
        return _pres(["g"], [p[0]], order=spec.order, name=name)
    if f == "abelian":
        gens = [f"g{i + 1}" for i in range(len(p))]
        return _pres(gens, list(p), order=spec.order, name=name)
    if f == "dsd":
        gens = ["h"] + [f"g{i + 1}" for i in range(len(p))]
        orders = [2] + list(p)
        conj = {(0, i + 1): _word(gens, orders, **{gens[i + 1]: n - 1}) for i, n in enumerate(p)}
        return _pres(gens, orders, conj=conj, order=spec.order, name=name)
    if f == "G1":
        al, be, ga = p
        gens, orders = ["b", "a", "c"], [2 ** be, 2 ** al, 2 ** ga]
        conj = {(0, 1): _word(gens, orders, a=1, c=1)}
        return _pres(gens, orders, conj=conj, order=spec.order, name=name)
    if f == "G2":
        al, be, ga = p
        gens, orders = ["b", "a"], [2 ** be, 2 ** al]
        conj = {(0, 1): _word(gens, orders, a=1 + 2 ** (al - ga))}
        return _pres(gens, orders, conj=conj, order=spec.order, name=name)
    if f == "G3":
        al, be, ga, si = p
        m = 2 ** (al - ga)
        gens, orders = ["b", "a", "c"], [2 ** be, 2 ** al, 2 ** si]
        conj = {
            (0, 1): _word(gens, orders, a=1 + m, c=1),
            (0, 2): _word(gens, orders, a=-m * m, c=1 - m),
        }
        return _pres(gens, orders, conj=conj, order=spec.order, name=name)
    if f == "G4":
        (ga,) = p
        if ga == 1:
            # o(c) = 1: drop c; then a^b = a^3 and b^2 = a^2
            gens, orders = ["b", "a"], [2, 4]
            return _pres(gens, orders, power={"b": _word(gens, orders, a=2)},
                         conj={(0, 1): _word(gens, orders, a=3)}, order=spec.order, name=name)
        gens, orders = ["b", "a", "c"], [2 ** ga, 2 ** (ga + 1), 2 ** (ga - 1)]
        conj = {
            (0, 1): _word(gens, orders, a=3, c=1),
            (0, 2): _word(gens, orders, a=-4, c=-1),
        }
        return _pres(gens, orders, power={"b": _word(gens, orders, a=2 ** ga)},
                     conj=conj, order=spec.order, name=name)
    if f == "direct":
        return _direct(presentation(spec.parts[0]), presentation(spec.parts[1]), name)
    raise BadParameters(f"unknown family {f!r}")


def _direct(left: PcPresentation, right: PcPresentation, name: str) -> PcPresentation:
    taken = set(left.gens)
    rnames = []
    for g in right.gens:
        new = g
        while new in taken:
            new += "'"
        taken.add(new)
        rnames.append(new)
    kl, kr = len(left.gens), len(right.gens)
    zl, zr = (0,) * kl, (0,) * kr

    def lift_l(w):
        return tuple(w) + zr if any(w) else zl + zr

    def lift_r(w):
        return zl + tuple(w) if any(w) else zl + zr

    power = tuple(lift_l(w) for w in (left.power_words or [zl] * kl)) + tuple(
        lift_r(w) for w in (right.power_words or [zr] * kr))
    conj = {k: lift_l(w) for k, w in left.conj_words.items()}
    conj.update({(i + kl, j + kl): lift_r(w) for (i, j), w in right.conj_words.items()})
    return PcPresentation(
        gens=left.gens + tuple(rnames),
        rel_orders=left.rel_orders + right.rel_orders,
        power_words=power,
        conj_words=conj,
        declared_order=left.order * right.order,
        name=name,
    )


def relation_checks(spec: PaperGroupSpec, t: GroupTable) -> list[tuple[str, bool]]:
    """Defining relations of the family, evaluated in the built table."""
    f, p = spec.family, spec.params
    o = lambda x: element_order(t, x)  # noqa: E731
    comm, pw, op = t.commutator, t.power, t.op
    out: list[tuple[str, bool]] = [("|G|", t.order == spec.order)]
    if f in ("cyclic", "abelian"):
        gens = [t.named[g] for g in presentation(spec).gens]
        out += [(f"o(g{i + 1}) = {n}", o(g) == n) for i, (g, n) in enumerate(zip(gens, p))]
        out.append(("abelian", t.is_abelian))
        return out
    if f == "dsd":
        h = t.named["h"]
        gs = [t.named[f"g{i + 1}"] for i in range(len(p))]
        A = closure(t, gs)
        out.append(("h^2 = 1", pw(h, 2) == 0))
        out.append(("h != 1", h != 0))
        for i, (g, n) in enumerate(zip(gs, p)):
            out.append((f"o(g{i + 1}) = {n}", o(g) == n))
            out.append((f"h g{i + 1} h = g{i + 1}^-1", op(h, g, h) == int(t.inv[g])))
        out.append(("A abelian", all(op(x, y) == op(y, x) for x in gs for y in gs)))
        out.append(("|G| = 2|A|", t.order == 2 * A.order))
        out.append(("every element of G \\ A has order 2",
                    all(pw(x, 2) == 0 for x in range(t.order) if x not in A)))
        return out
    if f == "direct":
        return out
    a, b = t.named["a"], t.named["b"]
    c = t.named.get("c", 0)
    ab = comm(a, b)
    if f == "G1":
        al, be, ga = p
        out += [
            (f"o(a) = 2^{al}", o(a) == 2 ** al),
            (f"o(b) = 2^{be}", o(b) == 2 ** be),
            (f"o(c) = 2^{ga}", o(c) == 2 ** ga),
            ("[a,b] = c", ab == c),
            ("[a,c] = 1", comm(a, c) == 0),
            ("[b,c] = 1", comm(b, c) == 0),
        ]
    elif f == "G2":
        al, be, ga = p
        out += [
            (f"o(a) = 2^{al}", o(a) == 2 ** al),
            (f"o(b) = 2^{be}", o(b) == 2 ** be),
            (f"o([a,b]) = 2^{ga}", o(ab) == 2 ** ga),
            (f"[a,b] = a^(2^{al - ga})", ab == pw(a, 2 ** (al - ga))),
        ]
    elif f == "G3":
        al, be, ga, si = p
        m = 2 ** (al - ga)
        out += [
            (f"o(a) = 2^{al}", o(a) == 2 ** al),
            (f"o(b) = 2^{be}", o(b) == 2 ** be),
            (f"o(c) = 2^{si}", o(c) == 2 ** si),
            (f"o([a,b]) = 2^{ga}", o(ab) == 2 ** ga),
            ("[a,c] = 1", comm(a, c) == 0),
            ("[a,b] = a^(2^(α-γ)) c", ab == op(pw(a, m), c)),
            ("[c,b] = a^(-2^(2(α-γ))) c^(-2^(α-γ))", comm(c, b) == op(pw(a, -m * m), pw(c, -m))),
        ]
    elif f == "G4":
        (ga,) = p
        out += [
            (f"o(a) = 2^{ga + 1}", o(a) == 2 ** (ga + 1)),
            (f"o(b) = 2^{ga + 1}", o(b) == 2 ** (ga + 1)),
            (f"o([a,b]) = 2^{ga}", o(ab) == 2 ** ga),
            (f"o(c) = 2^{ga - 1}", o(c) == 2 ** (ga - 1)),
            ("[a,c] = 1", comm(a, c) == 0),
            ("[a,b] = a^2 c", ab == op(pw(a, 2), c)),
            ("[c,b] = a^-4 c^-2", comm(c, b) == op(pw(a, -4), pw(c, -2))),
            (f"a^(2^{ga}) = b^(2^{ga})", pw(a, 2 ** ga) == pw(b, 2 ** ga)),
            (f"|G| = 2^(3γ)", t.order == 2 ** (3 * ga)),
        ]
    return out


@lru_cache(maxsize=256)
def _build_cached(spec: PaperGroupSpec, cap: int) -> GroupTable:
    if spec.order > cap:
        from .errors import CapExceeded
        raise CapExceeded(f"{spec} has order {spec.order} > cap {cap}")
    t = build_from_pc(presentation(spec), cap=cap)
    failed = [name for name, ok in relation_checks(spec, t) if not ok]
    if failed:
        raise InconsistentPresentation(f"{spec}: relations fail in table: {', '.join(failed)}")
    return t


def build_paper_group(spec: PaperGroupSpec, cap: int = DEFAULT_CAP) -> GroupTable:
    """Validated table for ``spec``; every family relation is checked in-table."""
    check_parameters(spec)
    return _build_cached(spec, cap)


def abelian_part(spec: PaperGroupSpec, t: GroupTable):
    """The subgroup A of dsd(A)."""
    if spec.family != "dsd":
        raise WrongFamily(f"{spec} is not of the form dsd(A)")
    return closure(t, [t.named[f"g{i + 1}"] for i in range(len(spec.params))])


def abelian_spec(factors: tuple[int, ...]) -> PaperGroupSpec:
    return PaperGroupSpec("cyclic", factors) if len(factors) == 1 else PaperGroupSpec("abelian", factors)


# -- Loewy closed forms ------------------------------------------------------


def closed_form_L(spec: PaperGroupSpec) -> int:
    """Loewy length of F_2[G] for the four families."""
    check_parameters(spec)
    f, p = spec.family, spec.params
    if f == "G1":
        al, be, ga = p
        return 2 ** al + 2 ** be + 2 ** (ga + 1) - 3
    if f == "G2":
        al, be, _ = p
        return 2 ** al + 2 ** be - 1
    if f == "G3":
        al, be, _, si = p
        return 2 ** al + 2 ** be + 2 ** (si + 1) - 3
    if f == "G4":
        (ga,) = p
        return 2 ** (ga + 2) - 3
    raise WrongFamily(f"no closed-form Loewy length for family {f}")


# -- extremal sequences ------------------------------------------------------

EXTREMAL_TAGS = ("thm1.1", "thm1.4-G1", "thm1.4-G2", "thm1.4-G3", "thm1.4-G4", "cor1.5", "egz-lower")


@dataclass(frozen=True)
class Extremal:
    tag: str
    seq: SeqMulti | SeqOrdered
    expected_length: int
    freeness_proven: bool


def t14_eligible(spec: PaperGroupSpec) -> bool:
    """Parameter ranges where the ordered witness is proven product-one free."""
    f, p = spec.family, spec.params
    return (
        (f == "G1" and p[2] == 1)
        or f == "G2"
        or (f == "G3" and p[3] == 1)
        or (f == "G4" and p[0] in (1, 2))
    )


def basis_sequence(spec: PaperGroupSpec, t: GroupTable) -> list[int]:
    """g1^[n1-1] ... gr^[nr-1] over the abelian generators of ``spec``."""
    if spec.family == "cyclic":
        return [t.named["g"]] * (spec.params[0] - 1)
    if spec.family in ("abelian", "dsd"):
        out: list[int] = []
        for i, n in enumerate(spec.params):
            out += [t.named[f"g{i + 1}"]] * (n - 1)
        return out
    raise WrongFamily(f"{spec} has no basis sequence")


def _t14_terms(spec: PaperGroupSpec, t: GroupTable) -> tuple[list[int], int]:
    f, p = spec.family, spec.params
    a, b = t.named["a"], t.named["b"]
    if f == "G2":
        al, be, _ = p
        return [a] * (2 ** al - 1) + [b] * (2 ** be - 1), 2 ** al + 2 ** be - 2
    if f == "G1":
        na, nb, nw = 2 ** p[0], 2 ** p[1], 2 ** p[2]
    elif f == "G3":
        na, nb, nw = 2 ** p[0], 2 ** p[1], 2 ** p[3]
    else:
        ga = p[0]
        na, nb, nw = 2 ** (ga + 1), 2 ** ga, 2 ** (ga - 1)
    ab = t.commutator(a, b)
    x_a, x_b = int(t.inv[a]), int(t.inv[b])
    x_c, x_d = t.op(a, ab), t.op(b, ab)
    terms = [x_a] * (na - 1) + [x_b] * (nb - 1) + [x_c] * (nw - 1) + [x_d] * (nw - 1)
    return terms, na + nb + 2 * nw - 4


def extremal_sequences(spec: PaperGroupSpec, which: str, t: GroupTable | None = None) -> Extremal:
    """Witness sequences for the lower bounds, built for every valid parameter tuple."""
    check_parameters(spec)
    if which not in EXTREMAL_TAGS:
        raise BadParameters(f"unknown sequence tag {which!r}")
    t = t if t is not None else build_paper_group(spec)
    f = spec.family
    if which == "thm1.1":
        if f != "dsd":
            raise BadParameters("thm1.1 sequences live in dsd(A)")
        terms = basis_sequence(spec, t) + [t.named["h"]]
        return Extremal(which, SeqMulti.from_elements(t.order, terms), len(terms), _basis_is_extremal(spec.params))
    if which.startswith("thm1.4-"):
        fam = which.split("-")[1]
        if f != fam:
            raise BadParameters(f"{which} needs a {fam} spec, got {spec}")
        terms, length = _t14_terms(spec, t)
        return Extremal(which, SeqOrdered.of(terms), length, t14_eligible(spec))
    if which == "cor1.5":
        if f != "G2":
            raise BadParameters("cor1.5 needs a G2 spec")
        terms, length = _t14_terms(spec, t)
        return Extremal(which, SeqMulti.from_elements(t.order, terms), length, True)
    # egz-lower: S * 1^[|G|-1] with S a product-one free sequence of the family
    base = _default_free_sequence(spec, t)
    terms = base + [0] * (t.order - 1)
    return Extremal(which, SeqMulti.from_elements(t.order, terms), len(terms), True)


def _basis_is_extremal(factors: tuple[int, ...]) -> bool:
    # basis sequences reach d(A) for p-groups and for rank <= 2
    return prime_power(math.prod(factors)) is not None or len(factors) <= 2


def _default_free_sequence(spec: PaperGroupSpec, t: GroupTable) -> list[int]:
    f = spec.family
    if f in ("cyclic", "abelian"):
        return basis_sequence(spec, t)
    if f == "dsd":
        return basis_sequence(spec, t) + [t.named["h"]]
    if f == "G2":
        return _t14_terms(spec, t)[0]
    raise BadParameters(f"no default product-one free sequence for {spec}")


# -- catalog -----------------------------------------------------------------


def _primes_upto(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if all(q % r for r in range(2, int(q ** 0.5) + 1))]


def _partitions(k: int, largest: int | None = None):
    largest = k if largest is None else largest
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def invariant_factor_chains(order: int) -> list[tuple[int, ...]]:
    """All chains n1 | ... | nr (ni >= 2) with product ``order``."""
    out = []

    def rec(remaining: int, prev: int, acc: tuple[int, ...]):
        if remaining == 1:
            if acc:
                out.append(acc)
            return
        for d in range(2, remaining + 1):
            if remaining % d == 0 and (not acc or d % prev == 0):
                # the remaining product must be built from multiples of d
                rest = remaining // d
                if rest == 1 or rest % d == 0:
                    rec(rest, d, acc + (d,))

    rec(order, 1, ())
    return sorted(set(out))


def catalog(max_order: int) -> list[PaperGroupSpec]:
    """Deterministic list of the groups swept by the verification suites."""
    if max_order < 2:
        raise BadParameters("max_order must be at least 2")
    specs: list[PaperGroupSpec] = []
    for p in _primes_upto(max_order):
        k = 1
        while p ** k <= max_order:
            for part in _partitions(k):
                specs.append(abelian_spec(tuple(sorted(p ** e for e in part))))
            k += 1
    for m in range(2, max_order // 2 + 1):
        for chain in invariant_factor_chains(m):
            specs.append(PaperGroupSpec("dsd", chain))
    lg = max_order.bit_length() - 1
    for al, be, ga in itertools.product(range(1, lg + 1), repeat=3):
        if al + be + ga <= lg and al >= be >= ga >= 1:
            specs.append(PaperGroupSpec("G1", (al, be, ga)))
    for al, be, ga in itertools.product(range(1, lg + 1), repeat=3):
        if al + be <= lg and al >= 2 * ga and be >= ga >= 1 and al + be > 3:
            specs.append(PaperGroupSpec("G2", (al, be, ga)))
    for al, be, ga, si in itertools.product(range(1, lg + 1), repeat=4):
        if al + be + si <= lg and be >= ga > si >= 1 and al + si >= 2 * ga:
            specs.append(PaperGroupSpec("G3", (al, be, ga, si)))
    for ga in range(1, lg // 3 + 1):
        specs.append(PaperGroupSpec("G4", (ga,)))
    seen = set()
    out = []
    for s in specs:
        key = str(s)
        if key not in seen:
            seen.add(key)
            out.append(s)
    fam_rank = {f: i for i, f in enumerate(("cyclic", "abelian", "dsd", "G1", "G2", "G3", "G4"))}
    out.sort(key=lambda s: (s.order, fam_rank[s.family], s.params))
    return out


def is_p_group_spec(spec: PaperGroupSpec) -> int | None:
    """The prime p if ``spec`` describes a p-group."""
    pp = prime_power(spec.order)
    return pp[0] if pp else None
