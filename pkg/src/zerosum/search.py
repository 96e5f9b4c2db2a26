"""Exhaustive branch-and-bound search for d(G), D_o(G) and E(G).

Each invariant is found by decision rounds: a round at target T asks whether a
free sequence of length T exists. Rounds start at a known lower bound and go
up until one exhausts; freeness is closed under taking subsequences, so the
last successful round gives the maximum.

A round splits its tree into tasks, one per length-2 prefix in lexicographic
order. Every task runs a depth-first search in lexicographic order and stops
at its first hit. The fold takes the first task (in task order) that hit, so
the witness is the lexicographically least free sequence of length T, and the
reported node count is the sum over tasks up to and including that one. None
of this depends on the number of workers or on completion order.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .elemset import translate
from .errors import BadFactors
from .groups import GroupTable, element_orders, prime_power, structure_profile
from .sequences import SubProducts

INVARIANTS = ("d", "Do", "E", "L_jennings", "L_direct")
UNDETERMINED = "undetermined"
_TIME_CHECK = 4096


@dataclass(frozen=True)
class Budget:
    nodes: int | None = 10_000_000
    seconds: float | None = None

    def __post_init__(self):
        if self.nodes is not None and self.nodes <= 0:
            raise ValueError("node budget must be positive")
        if self.seconds is not None and self.seconds <= 0:
            raise ValueError("time budget must be positive")


@dataclass
class InvariantReport:
    spec: str
    invariant: str
    value: int | str
    certificate: dict
    method: dict = field(default_factory=dict)
    nodes: int = 0
    elapsed_ms: float = 0.0
    budget_exhausted: bool = False

    @property
    def determined(self) -> bool:
        return self.value != UNDETERMINED

    @property
    def witness(self) -> list[int]:
        return list(self.certificate.get("witness", []))


# -- per-task depth-first searches -----------------------------------------------
#
# Each returns (witness or None, nodes, over_budget). ``limit`` caps the nodes of
# the task; ``deadline`` is a time.monotonic() value or None.


class _Stop(Exception):
    pass


class _Counter:
    __slots__ = ("nodes", "limit", "deadline")

    def __init__(self, limit: int | None, deadline: float | None):
        self.nodes = 0
        self.limit = limit
        self.deadline = deadline

    def tick(self) -> None:
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise _Stop
        if self.deadline is not None and self.nodes % _TIME_CHECK == 0 and time.monotonic() > self.deadline:
            raise _Stop


def _ordered_task(t: GroupTable, prefix: tuple[int, ...], target: int, limit, deadline):
    """Ordered sequences: P_i = P_(i-1) | P_(i-1) g | {g}, free iff 1 not in P."""
    n = t.order
    inv = t.inv.tolist()
    rtabs = [t.right_tables(g) if g else None for g in range(n)]
    cnt = _Counter(limit, deadline)
    P = 0
    for g in prefix:
        P = P | translate(rtabs[g], P) | (1 << g)
    if P & 1:
        return None, 0, False
    seq = list(prefix)
    cands = range(1, n)

    def dfs(P: int, depth: int) -> bool:
        if depth == target:
            return True
        for g in cands:
            if (P >> inv[g]) & 1:
                continue
            cnt.tick()
            Q = P | translate(rtabs[g], P) | (1 << g)
            if Q & 1:
                continue
            # every further term enlarges P by at least one element
            if depth + 1 + (n - 1 - Q.bit_count()) < target:
                continue
            seq.append(g)
            if dfs(Q, depth + 1):
                return True
            seq.pop()
        return False

    try:
        found = dfs(P, len(prefix))
    except _Stop:
        return None, cnt.nodes, True
    return (tuple(seq) if found else None), cnt.nodes, False


def _unordered_task(t: GroupTable, prefix: tuple[int, ...], target: int, limit, deadline):
    """Multisets with non-decreasing indices, identity excluded, free iff 1 not in Π."""
    n = t.order
    inv = t.inv.tolist()
    cnt = _Counter(limit, deadline)
    sp = SubProducts(t)
    Pi = 0
    for g in prefix:
        new, _ = sp.push(g)
        Pi |= new
    if Pi & 1:
        return None, 0, False
    seq = list(prefix)

    def dfs(Pi: int, depth: int, last: int) -> bool:
        if depth == target:
            return True
        for g in range(last, n):
            if (Pi >> inv[g]) & 1:
                continue
            cnt.tick()
            new, _ = sp.push(g)
            Q = Pi | new
            if not (new & 1) and depth + 1 + (n - 1 - Q.bit_count()) >= target:
                seq.append(g)
                if dfs(Q, depth + 1, g):
                    return True
                seq.pop()
            sp.pop()
        return False

    try:
        found = dfs(Pi, len(prefix), prefix[-1] if prefix else 1)
    except _Stop:
        return None, cnt.nodes, True
    return (tuple(seq) if found else None), cnt.nodes, False


def _gao_task(t: GroupTable, prefix: tuple[int, ...], target: int, limit, deadline):
    """Multisets (identity allowed) with 1 not in Π_|G|."""
    n = t.order
    cnt = _Counter(limit, deadline)
    sp = SubProducts(t, max_size=n)
    for g in prefix:
        _, top = sp.push(g)
        if top & 1:
            return None, 0, False
    seq = list(prefix)

    def dfs(depth: int, last: int) -> bool:
        if depth == target:
            return True
        for g in range(last, n):
            cnt.tick()
            _, top = sp.push(g)
            if not top & 1:
                seq.append(g)
                if dfs(depth + 1, g):
                    return True
                seq.pop()
            sp.pop()
        return False

    try:
        found = dfs(len(prefix), prefix[-1] if prefix else 0)
    except _Stop:
        return None, cnt.nodes, True
    return (tuple(seq) if found else None), cnt.nodes, False


_TASKS: dict[str, Callable] = {"Do": _ordered_task, "d": _unordered_task, "E": _gao_task}


def _prefixes(kind: str, n: int, length: int) -> list[tuple[int, ...]]:
    if length == 0:
        return [()]
    lo = 0 if kind == "E" else 1
    if kind == "Do":
        out = [(g,) for g in range(lo, n)]
        return out if length == 1 else [(g, h) for g in range(lo, n) for h in range(lo, n)]
    out = [(g,) for g in range(lo, n)]
    return out if length == 1 else [(g, h) for g in range(lo, n) for h in range(g, n)]


# -- worker pool plumbing -----------------------------------------------------------

_worker_table: GroupTable | None = None


def _init_worker(t: GroupTable) -> None:
    global _worker_table
    _worker_table = t


def _run_in_worker(kind, prefix, target, limit, deadline):
    return _TASKS[kind](_worker_table, prefix, target, limit, deadline)


@dataclass
class _Round:
    witness: tuple[int, ...] | None
    nodes: int
    exhausted_budget: bool


def _decide(t: GroupTable, kind: str, target: int, limit: int | None, deadline, pool) -> _Round:
    prefixes = _prefixes(kind, t.order, min(2, target))
    task = _TASKS[kind]
    if pool is None:
        results = []
        for pre in prefixes:
            r = task(t, pre, target, limit, deadline)
            results.append(r)
            if r[0] is not None or r[2]:
                break
    else:
        futs = [pool.submit(_run_in_worker, kind, pre, target, limit, deadline) for pre in prefixes]
        results = []
        for f in futs:
            r = f.result()
            results.append(r)
            if r[0] is not None or r[2]:
                break
        for f in futs:
            f.cancel()
    nodes = 0
    for witness, k, over in results:
        nodes += k
        if over:
            return _Round(None, nodes, True)
        if witness is not None:
            return _Round(witness, nodes, limit is not None and nodes > limit)
    return _Round(None, nodes, limit is not None and nodes > limit)


def _search(
    t: GroupTable,
    kind: str,
    start: int,
    cap: int | None,
    hint: Sequence[int] | None,
    budget: Budget,
    workers: int,
) -> tuple[int, tuple[int, ...] | None, int, bool, str]:
    """Largest T with a free sequence of length T.

    Returns (best length, witness, nodes, budget exhausted, how the top was closed).
    """
    t0 = time.monotonic()
    deadline = t0 + budget.seconds if budget.seconds is not None else None
    best = len(hint) if hint is not None else 0
    best_witness = tuple(hint) if hint is not None else ()
    total = 0
    pool = None
    if workers > 1:
        pool = ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(t,))
    try:
        T = max(start, 1)
        while True:
            if cap is not None and T > cap:
                return best, best_witness, total, False, "cap"
            limit = None if budget.nodes is None else budget.nodes - total
            if limit is not None and limit <= 0:
                return best, best_witness, total, True, "budget"
            r = _decide(t, kind, T, limit, deadline, pool)
            total += r.nodes
            if r.exhausted_budget:
                return best, best_witness, total, True, "budget"
            if r.witness is None:
                return best, best_witness, total, False, "exhausted"
            best, best_witness = T, r.witness
            T += 1
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)


def _report(spec, t, invariant, kind, start, cap, cap_name, hint, budget, workers, offset):
    t0 = time.perf_counter()
    best, witness, nodes, over, closed = _search(t, kind, start, cap, hint, budget, workers)
    elapsed = (time.perf_counter() - t0) * 1000.0
    method = {
        "search": {"Do": "ordered-dfs", "d": "canonical-multiset-dfs", "E": "canonical-multiset-dfs-pi_n"}[kind],
        "rounds_from": start,
        "depth_cap": cap,
        "depth_cap_source": cap_name,
        "closed_by": closed,
        "workers": workers,
        "budget_nodes": budget.nodes,
        "budget_seconds": budget.seconds,
    }
    if over:
        cert = {"kind": "lower_bound", "witness": list(witness), "lower_bound": best + offset}
        return InvariantReport(spec, invariant, UNDETERMINED, cert, method, nodes, elapsed, True)
    kind_name = "witness+exhausted" if closed == "exhausted" else f"witness+bound({cap_name})"
    cert = {"kind": kind_name, "witness": list(witness)}
    return InvariantReport(spec, invariant, best + offset, cert, method, nodes, elapsed, False)


def _lower_start(hint: Sequence[int] | None) -> int:
    # rerun the hint length so that the reported witness is lexicographically least
    return max(len(hint), 1) if hint else 1


def small_davenport(
    t: GroupTable,
    budget: Budget = Budget(),
    workers: int = 1,
    hint: Sequence[int] | None = None,
    use_caps: bool = True,
    spec: str = "",
) -> InvariantReport:
    """d(G): maximal length of a product-one free sequence."""
    n = t.order
    if n == 1:
        return InvariantReport(spec, "d", 0, {"kind": "trivial-group", "witness": []}, {}, 0, 0.0, False)
    cap, cap_name = None, None
    if use_caps:
        if structure_profile(t).is_cyclic:
            cap, cap_name = n - 1, "cyclic"
        else:
            cap, cap_name = n // 2, "non-cyclic d <= |G|/2"
    return _report(spec, t, "d", "d", _lower_start(hint), cap, cap_name, hint, budget, workers, 0)


def ordered_davenport(
    t: GroupTable,
    budget: Budget = Budget(),
    workers: int = 1,
    hint: Sequence[int] | None = None,
    use_caps: bool = True,
    spec: str = "",
) -> InvariantReport:
    """D_o(G): one more than the maximal length of an ordered product-one free sequence."""
    n = t.order
    if n == 1:
        return InvariantReport(spec, "Do", 1, {"kind": "trivial-group", "witness": []}, {}, 0, 0.0, False)
    cap, cap_name = None, None
    if use_caps:
        if structure_profile(t).is_cyclic:
            cap, cap_name = n - 1, "cyclic"
        else:
            cap, cap_name = -(-(n + 1) // 2) - 1, "olson-white"
    return _report(spec, t, "Do", "Do", _lower_start(hint), cap, cap_name, hint, budget, workers, 1)


def gao_constant(
    t: GroupTable,
    budget: Budget = Budget(),
    workers: int = 1,
    hint: Sequence[int] | None = None,
    spec: str = "",
) -> InvariantReport:
    """E(G): one more than the maximal length of a sequence with 1 not in Π_|G|."""
    n = t.order
    if n == 1:
        return InvariantReport(spec, "E", 1, {"kind": "trivial-group", "witness": []}, {}, 0, 0.0, False)
    return _report(spec, t, "E", "E", _lower_start(hint), None, None, hint, budget, workers, 1)


# -- closed forms -----------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianClosedForm:
    d_value: int
    E_value: int | None
    applicable: bool


def abelian_closed_forms(factors: Sequence[int], p: int | None = None) -> AbelianClosedForm:
    """Olson's values for abelian p-groups; only a lower bound for d otherwise."""
    fs = tuple(int(x) for x in factors)
    if not fs or any(x < 1 for x in fs) or any(b % a for a, b in zip(fs, fs[1:])):
        raise BadFactors(f"{fs} is not a chain n1 | n2 | ... | nr of positive integers")
    fs = tuple(x for x in fs if x > 1)
    n = math.prod(fs)
    d = sum(x - 1 for x in fs)
    if not fs:
        return AbelianClosedForm(0, 1, True)
    pp = prime_power(n)
    if p is not None and (pp is None or pp[0] != p):
        raise BadFactors(f"{fs} are not all powers of {p}")
    if pp is None:
        return AbelianClosedForm(d, None, False)
    return AbelianClosedForm(d, n + d, True)


# -- bound checks -------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: str
    rhs: str
    status: str  # pass | fail | skipped
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _val(reports: dict, key: str):
    r = reports.get(key)
    if r is None:
        return None
    v = r.value if isinstance(r, InvariantReport) else r
    return None if v == UNDETERMINED else int(v)


def _chk(name: str, ok: bool, lhs, rhs) -> BoundCheck:
    return BoundCheck(name, str(lhs), str(rhs), "pass" if ok else "fail")


def _skip(name: str, reason: str) -> BoundCheck:
    return BoundCheck(name, "", "", "skipped", reason)


def bound_check(t: GroupTable, reports: dict) -> list[BoundCheck]:
    """Evaluate every applicable inequality among determined invariants.

    ``reports`` maps invariant names (d, Do, E, L) to InvariantReports or ints.
    """
    n = t.order
    prof = structure_profile(t)
    d, Do, E = _val(reports, "d"), _val(reports, "Do"), _val(reports, "E")
    L = _val(reports, "L")
    if L is None:
        L = _val(reports, "L_jennings")
    if L is None:
        L = _val(reports, "L_direct")
    out = []

    if d is not None and Do is not None:
        out.append(_chk("lemma2.7 d+1 <= Do <= |G|", d + 1 <= Do <= n, f"{d}+1 <= {Do}", f"{Do} <= {n}"))
    else:
        out.append(_skip("lemma2.7 d+1 <= Do <= |G|", "d or Do undetermined"))
    if Do is not None:
        out.append(_chk("lemma2.7 Do = |G| iff cyclic", (Do == n) == prof.is_cyclic, f"Do={Do}, |G|={n}", f"cyclic={prof.is_cyclic}"))
    else:
        out.append(_skip("lemma2.7 Do = |G| iff cyclic", "Do undetermined"))

    ow = -(-(n + 1) // 2)
    if prof.is_cyclic:
        out.append(_skip("olson-white Do <= ceil((|G|+1)/2)", "cyclic"))
    elif Do is None:
        out.append(_skip("olson-white Do <= ceil((|G|+1)/2)", "Do undetermined"))
    else:
        out.append(_chk("olson-white Do <= ceil((|G|+1)/2)", Do <= ow, Do, ow))

    pp = prime_power(n)
    if pp is None:
        out.append(_skip("dimitrov Do <= L", "not a p-group"))
    elif Do is None or L is None:
        out.append(_skip("dimitrov Do <= L", "Do or L undetermined"))
    else:
        out.append(_chk("dimitrov Do <= L", Do <= L, Do, L))

    if prof.is_cyclic or n == 1:
        out.append(_skip("qu-li d <= |G|/p + p - 2", "cyclic"))
    elif d is None:
        out.append(_skip("qu-li d <= |G|/p + p - 2", "d undetermined"))
    else:
        p = min(q for q in range(2, n + 1) if n % q == 0)
        bound = n // p + p - 2
        out.append(_chk("qu-li d <= |G|/p + p - 2", d <= bound, d, bound))
        if np.any(element_orders(t) == n // p):
            out.append(_chk("qu-li equality with cyclic index-p subgroup", d == bound, d, bound))
        else:
            out.append(_skip("qu-li equality with cyclic index-p subgroup", "no cyclic subgroup of index p"))

    if E is None:
        out.append(_skip("E <= 3|G|/2", "E undetermined"))
        out.append(_skip("E >= d + |G|", "E undetermined"))
    else:
        if prof.is_cyclic:
            out.append(_skip("E <= 3|G|/2", "cyclic"))
        else:
            out.append(_chk("E <= 3|G|/2", 2 * E <= 3 * n, E, f"{3 * n}/2"))
        if d is None:
            out.append(_skip("E >= d + |G|", "d undetermined"))
        else:
            out.append(_chk("E >= d + |G|", E >= d + n, E, d + n))
    return out
