"""Seeded randomized property suites with brute-force oracles.

Every suite returns a :class:`SuiteResult`; a failing trial records its
input so it can be replayed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .constructions import build_paper_group, catalog
from .elemset import ElemSet
from .errors import SearchExhausted
from .groups import GroupTable
from .groupspec import PaperGroupSpec
from .sequences import (
    SeqMulti,
    big_pi,
    find_disjoint_equal_product,
    ordered_reach,
    pi_r,
    pi_set,
    product_of,
    set_product,
)

DEFAULT_SEED = 20240601
SUITES = ("oracles", "lemma2.10", "lemma2.11", "lemma2.12")


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.trials > 0 and not self.failures


def _groups(max_order: int, abelian_only: bool = False) -> list[tuple[PaperGroupSpec, GroupTable]]:
    out = []
    for spec in catalog(max_order):
        t = build_paper_group(spec)
        if abelian_only and not t.is_abelian:
            continue
        out.append((spec, t))
    return out


# -- brute-force oracles -------------------------------------------------------------


def brute_pi(t: GroupTable, terms: list[int]) -> set[int]:
    return {product_of(t, perm) for perm in itertools.permutations(terms)}


def brute_big_pi(t: GroupTable, terms: list[int]) -> set[int]:
    out: set[int] = set()
    for k in range(1, len(terms) + 1):
        for idx in itertools.combinations(range(len(terms)), k):
            out |= brute_pi(t, [terms[i] for i in idx])
    return out


def brute_pi_r(t: GroupTable, terms: list[int], r: int) -> set[int]:
    out: set[int] = set()
    for idx in itertools.combinations(range(len(terms)), r):
        out |= brute_pi(t, [terms[i] for i in idx])
    return out


def brute_ordered_reach(t: GroupTable, terms: list[int]) -> set[int]:
    """Products of all 2^l - 1 ordered subsequences, indexed by bit mask."""
    prods = np.zeros(1, dtype=np.int64)
    for g in terms:
        prods = np.concatenate([prods, t.mul[prods, g]])
    return set(np.unique(prods[1:]).tolist())


def brute_min_leftover(t: GroupTable, terms: list[int]) -> int:
    """Least leftover over all 3^l assignments to U, V or neither with π(U) = π(V)."""
    best = len(terms)
    for assign in itertools.product((0, 1, 2), repeat=len(terms)):
        u = product_of(t, [g for g, a in zip(terms, assign) if a == 0])
        v = product_of(t, [g for g, a in zip(terms, assign) if a == 1])
        if u == v:
            best = min(best, sum(1 for a in assign if a == 2))
    return best


# -- suites ----------------------------------------------------------------------------


def suite_oracles(seed: int = DEFAULT_SEED, trials: int = 100) -> SuiteResult:
    """pi_set, big_pi, pi_r and ordered_reach against the brute-force oracles."""
    rng = np.random.default_rng(seed)
    groups = _groups(12)
    res = SuiteResult("oracles")
    for _ in range(trials):
        spec, t = groups[rng.integers(len(groups))]
        m = int(rng.integers(1, 7))
        terms = rng.integers(0, t.order, size=m).tolist()
        r = int(rng.integers(1, m + 1))
        lo = int(rng.integers(1, 15))
        oterms = rng.integers(0, t.order, size=lo).tolist()
        checks = [
            ("pi_set", set(pi_set(t, terms)), brute_pi(t, terms)),
            ("big_pi", set(big_pi(t, terms)), brute_big_pi(t, terms)),
            ("pi_r", set(pi_r(t, terms, r)), brute_pi_r(t, terms, r)),
            ("ordered_reach", set(ordered_reach(t, oterms)), brute_ordered_reach(t, oterms)),
        ]
        res.trials += 1
        for name, got, want in checks:
            if got != want:
                res.failures.append({"check": name, "spec": str(spec), "terms": terms, "ordered": oterms, "r": r})
    return res


def _random_free(t: GroupTable, rng: np.random.Generator, length: int) -> list[int] | None:
    """Random product-one free sequence by rejection of terms."""
    seq: list[int] = []
    for _ in range(8 * (length + 1)):
        if len(seq) == length:
            return seq
        g = int(rng.integers(1, t.order))
        if 0 not in big_pi(t, seq + [g]):
            seq.append(g)
    return seq if len(seq) == length else None


def suite_lemma210(seed: int = DEFAULT_SEED, trials: int = 100) -> SuiteResult:
    """Abelian G of order n, |S| = n + r - 2, 1 not in Π_n(S) => |Π_(n-2)(S)| = |Π_r(S)| >= r - 1.

    Instances are g^[n-1] * (g T) for a random product-one free T of length r - 1,
    which avoid 1 in Π_n; half the trials instead draw S at random and keep it
    only if it conforms.
    """
    rng = np.random.default_rng(seed)
    groups = [(s, t) for s, t in _groups(16, abelian_only=True) if t.order >= 3]
    res = SuiteResult("lemma2.10")
    attempts = 0
    while res.trials < trials and attempts < 50 * trials:
        attempts += 1
        spec, t = groups[rng.integers(len(groups))]
        n = t.order
        if res.trials % 2 == 0:
            r = int(rng.integers(2, n // 2 + 2))
            T = _random_free(t, rng, r - 1)
            if T is None:
                continue
            g = int(rng.integers(0, n))
            S = [g] * (n - 1) + [int(t.mul[g, x]) for x in T]
        else:
            r = int(rng.integers(2, 5))
            S = rng.integers(0, n, size=n + r - 2).tolist()
        if r > n or 0 in pi_r(t, S, n):
            continue
        res.trials += 1
        a = len(pi_r(t, S, n - 2)) if n - 2 >= 1 else 1
        b = len(pi_r(t, S, r))
        if not (a == b and b >= r - 1):
            res.failures.append({"spec": str(spec), "S": S, "r": r, "|Pi_n-2|": a, "|Pi_r|": b})
    return res


def suite_lemma211(seed: int = DEFAULT_SEED, trials: int = 100) -> SuiteResult:
    """Disjoint U, V | S with π(U) = π(V) and |S| - |U| - |V| <= k - 1, 2^k > n."""
    rng = np.random.default_rng(seed)
    groups = [(s, t) for s, t in _groups(16, abelian_only=True)]
    res = SuiteResult("lemma2.11")
    for _ in range(trials):
        spec, t = groups[rng.integers(len(groups))]
        n = t.order
        k = n.bit_length() + int(rng.integers(0, 2))
        m = int(rng.integers(0, 13))
        S = rng.integers(0, n, size=m).tolist()
        res.trials += 1
        try:
            U, V = find_disjoint_equal_product(t, S, k)
        except SearchExhausted:
            res.failures.append({"spec": str(spec), "S": S, "k": k, "error": "no pair found"})
            continue
        whole = SeqMulti.from_elements(n, S)
        ok = (U + V).divides(whole)
        ok = ok and product_of(t, U.elements()) == product_of(t, V.elements())
        ok = ok and len(whole) - len(U) - len(V) <= k - 1
        if ok and m <= 7:
            ok = brute_min_leftover(t, S) <= k - 1
        if not ok:
            res.failures.append({"spec": str(spec), "S": S, "k": k, "U": U.elements(), "V": V.elements()})
    return res


def suite_lemma212(max_n: int = 8) -> SuiteResult:
    """|A| + |B| > |G| => AB = G, exhaustively over all subset pairs of C_n, n <= max_n."""
    res = SuiteResult("lemma2.12")
    for n in range(2, max_n + 1):
        t = build_paper_group(PaperGroupSpec("cyclic", (n,)))
        full = (1 << n) - 1
        for A in range(1, full + 1):
            a = A.bit_count()
            for B in range(1, full + 1):
                if a + B.bit_count() <= n:
                    continue
                res.trials += 1
                if not set_product(t, ElemSet(n, A), ElemSet(n, B)).is_full():
                    res.failures.append({"n": n, "A": A, "B": B})
    return res


def run_suite(name: str, seed: int = DEFAULT_SEED, trials: int = 100) -> SuiteResult:
    if name == "oracles":
        return suite_oracles(seed, trials)
    if name == "lemma2.10":
        return suite_lemma210(seed, trials)
    if name == "lemma2.11":
        return suite_lemma211(seed, trials)
    if name == "lemma2.12":
        return suite_lemma212()
    raise ValueError(f"unknown suite {name!r}")
