"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import itertools
import json
import time

import pytest

from zerosum.constructions import build_paper_group, catalog, closed_form_L, is_p_group_spec, t14_eligible
from zerosum.errors import PreconditionFailed
from zerosum.groups import closure, structure_profile
from zerosum.groupspec import PaperGroupSpec, parse_group_spec
from zerosum.modular import loewy_direct, loewy_jennings, m_series, satisfies_class_two, verify_power_structure
from zerosum.props import SUITES, run_suite
from zerosum.search import Budget, abelian_closed_forms, bound_check, gao_constant, ordered_davenport, small_davenport
from zerosum.verify import verify_theorem

# sweeps beyond these orders are too slow for an exhaustive search
BOUND_SEARCH_MAX_ORDER = 16
BOUND_GAO_MAX_ORDER = 8


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, summary: str) -> None:
        with capsys.disabled():
            print(f"\nAC{n} {'PASS' if ok else 'FAIL'}: {summary}")

    return emit


def _loewy_pair(t, p):
    return loewy_jennings(m_series(t, p)), loewy_direct(t, p).nilpotency_index


def test_ac1_loewy_cross_check(report):
    t0 = time.perf_counter()
    bad, count = [], 0
    for spec in catalog(64):
        p = is_p_group_spec(spec)
        if p is None:
            continue
        lj, ld = _loewy_pair(build_paper_group(spec), p)
        count += 1
        if lj != ld:
            bad.append((str(spec), lj, ld))
    secs = time.perf_counter() - t0
    ok = not bad and count > 0 and secs < 60
    report(1, ok, f"jennings = direct on {count} catalog p-groups of order <= 64 in {secs:.1f}s; mismatches {bad}")
    assert ok


def test_ac2_closed_forms(report):
    specs = [s for s in catalog(64) if s.family in ("G1", "G2", "G4")]
    specs.append(PaperGroupSpec("G3", (3, 2, 2, 1)))
    bad, got = [], {}
    for spec in specs:
        t = build_paper_group(spec)
        L = closed_form_L(spec)
        lj, ld = _loewy_pair(t, 2)
        got[str(spec)] = L
        if not L == lj == ld:
            bad.append((str(spec), L, lj, ld))
    listed = {"G1(1,1,1)": 5, "G1(2,1,1)": 7, "G2(2,2,1)": 7, "G4(1)": 5, "G3(3,2,2,1)": 13}
    wrong = {k: got.get(k) for k, v in listed.items() if got.get(k) != v}
    ok = not bad and not wrong
    report(2, ok, f"closed form = jennings = direct on {len(specs)} tuples; listed values {listed}; mismatches {bad} {wrong}")
    assert ok


AC3_GROUPS = [(2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (3, 3)]


def test_ac3_dihedral_sandwich(report):
    t0 = time.perf_counter()
    rows, bad = [], []
    for params in AC3_GROUPS:
        r = verify_theorem("T1.1", PaperGroupSpec("dsd", params), workers=4, use_caps=False)
        q = r.quantities
        rows.append(f"{r.spec}:{q['d(A)']},{q['d(G)']},{q['Do(G)']}")
        exact = all(x is not None and isinstance(x, int) for x in (q["d(A)"], q["d(G)"], q["Do(G)"]))
        if r.status != "pass" or not exact or not q["Do(G)"] == q["d(G)"] + 1 == q["d(A)"] + 2:
            bad.append(r.spec)
    secs = time.perf_counter() - t0
    ok = not bad and secs < 600
    report(3, ok, f"Do = d+1 = d(A)+2 (d(A),d,Do) {' '.join(rows)} in {secs:.1f}s; failing {bad}")
    assert ok


def test_ac4_ordered_sandwich(report):
    eligible = [s for s in catalog(64) if s.family in ("G1", "G2", "G3", "G4") and t14_eligible(s)]
    bad = []
    for spec in eligible:
        r = verify_theorem("T1.4", spec)
        if r.status != "pass" or r.claim("Do(G) = L(G)").status != "pass":
            bad.append(str(spec))
    t0 = time.perf_counter()
    raw = verify_theorem("T1.4", parse_group_spec("G2(2,2,1)"), raw=True, use_caps=False)
    secs = time.perf_counter() - t0
    raw_ok = raw.status == "pass" and raw.quantities.get("Do(G) search") == 7
    ok = not bad and len(eligible) > 0 and raw_ok and secs < 300
    report(
        4,
        ok,
        f"Do = L certified on {len(eligible)} eligible tuples (failing {bad}); "
        f"raw Do(G2(2,2,1)) = {raw.quantities.get('Do(G) search')} in {secs:.1f}s",
    )
    assert ok


def test_ac5_gao_constant(report):
    t0 = time.perf_counter()
    want = {"dsd(3)": 9, "dsd(4)": 12, "cyclic(3)": 5, "abelian(2,2)": 6}
    got = {k: gao_constant(build_paper_group(parse_group_spec(k))).value for k in want}
    closed = {
        "cyclic(3)": abelian_closed_forms((3,)).E_value,
        "abelian(2,2)": abelian_closed_forms((2, 2)).E_value,
    }
    secs = time.perf_counter() - t0
    ok = got == want and all(got[k] == v for k, v in closed.items()) and secs < 600
    report(5, ok, f"E values {got} (expected {want}, closed forms {closed}) in {secs:.1f}s")
    assert ok


def test_ac6_index_p_biconditional(report):
    specs = [s for s in catalog(16) if is_p_group_spec(s) is not None]
    bad, directions, cyclic = [], set(), 0
    for spec in specs:
        r = verify_theorem("T1.5", spec, use_caps=False)
        name = "index-p iff d+1 = Do = L = |G|/p+p-1"
        c = r.claim(name)
        if structure_profile(build_paper_group(spec)).is_cyclic:
            cyclic += 1
            if c.status != "skipped":
                bad.append(str(spec))
            continue
        directions.add(r.quantities["cyclic index-p subgroup"])
        if r.status != "pass" or c.status != "pass":
            bad.append(str(spec))
    ok = not bad and directions == {True, False}
    report(
        6,
        ok,
        f"{len(specs) - cyclic} non-cyclic p-groups of order <= 16, both directions seen: {directions == {True, False}}; "
        f"{cyclic} cyclic skipped; failing {bad}",
    )
    assert ok


def test_ac7_bound_suite(report):
    fails, evaluated, checks = [], set(), 0
    for spec in catalog(64):
        t = build_paper_group(spec)
        p = is_p_group_spec(spec)
        reports: dict = {}
        if p is not None:
            reports["L"] = loewy_jennings(m_series(t, p))
        if t.order <= BOUND_SEARCH_MAX_ORDER:
            rd = small_davenport(t, use_caps=False)
            reports["d"] = rd
            reports["Do"] = ordered_davenport(t, hint=rd.witness or None, use_caps=False)
        if t.order <= BOUND_GAO_MAX_ORDER:
            reports["E"] = gao_constant(t)
        if not reports:
            continue
        for b in bound_check(t, reports):
            if b.status == "skipped":
                continue
            checks += 1
            evaluated.add(b.name)
            if not b.passed:
                fails.append((str(spec), b.name, b.status, b.lhs, b.rhs))
    expected = {
        "lemma2.7 d+1 <= Do <= |G|",
        "lemma2.7 Do = |G| iff cyclic",
        "olson-white Do <= ceil((|G|+1)/2)",
        "dimitrov Do <= L",
        "qu-li d <= |G|/p + p - 2",
        "qu-li equality with cyclic index-p subgroup",
        "E <= 3|G|/2",
        "E >= d + |G|",
    }
    ok = not fails and expected <= evaluated
    report(7, ok, f"{checks} bound checks over the catalog, kinds exercised {len(evaluated)}/{len(expected)}; fails {fails}")
    assert ok


def _generators(spec, t):
    if spec.family == "dsd" and len(spec.params) == 1:
        return t.named["g1"], t.named["h"]
    if spec.is_paper_family:
        return t.named["a"], t.named["b"]
    for a, b in itertools.combinations(range(1, t.order), 2):
        if closure(t, [a, b]).order == t.order:
            return a, b
    return None


def test_ac8_power_structure(report):
    checked, bad = [], []
    for spec in catalog(64):
        if is_p_group_spec(spec) != 2:
            continue
        t = build_paper_group(spec)
        if structure_profile(t, 2).min_generators != 2 or not satisfies_class_two(t):
            continue
        gens = _generators(spec, t)
        try:
            steps = verify_power_structure(t, *gens)
        except PreconditionFailed as e:
            bad.append((str(spec), str(e)))
            continue
        checked.append(str(spec))
        if not all(s.ok for s in steps):
            bad.append((str(spec), [s for s in steps if not s.ok]))
    ok = not bad and len(checked) > 0
    report(8, ok, f"power structure holds on {len(checked)} two-generator class-two 2-groups; failing {bad}")
    assert ok


def test_ac9_property_suites(report):
    t0 = time.perf_counter()
    results = [run_suite(name, trials=100) for name in SUITES]
    secs = time.perf_counter() - t0
    ok = all(r.passed for r in results) and all(r.trials >= 100 for r in results) and secs < 300
    summary = ", ".join(f"{r.name} {r.trials} trials {len(r.failures)} failures" for r in results)
    report(9, ok, f"{summary} in {secs:.1f}s")
    assert ok


def _fingerprint(r) -> str:
    return json.dumps([r.value, r.certificate, r.nodes, r.budget_exhausted])


def test_ac10_determinism(report):
    runs = []
    for text in ("dsd(4)", "G1(1,1,1)", "abelian(2,2,2)", "dsd(6)", "abelian(3,3)"):
        t = build_paper_group(parse_group_spec(text))
        runs.append((f"d {text}", lambda w, t=t: small_davenport(t, workers=w, use_caps=False)))
        runs.append((f"Do {text}", lambda w, t=t: ordered_davenport(t, workers=w, use_caps=False)))
    d8 = build_paper_group(parse_group_spec("dsd(4)"))
    runs.append(("E dsd(4)", lambda w: gao_constant(d8, workers=w)))
    g = build_paper_group(parse_group_spec("G3(3,2,2,1)"))
    runs.append(("Do G3(3,2,2,1) exhausted", lambda w: ordered_davenport(g, Budget(nodes=5000), workers=w)))
    diff = [name for name, fn in runs if _fingerprint(fn(1)) != _fingerprint(fn(4))]
    v1 = verify_theorem("T1.1", PaperGroupSpec("dsd", (2, 4)), workers=1, use_caps=False)
    v4 = verify_theorem("T1.1", PaperGroupSpec("dsd", (2, 4)), workers=4, use_caps=False)
    if [_fingerprint(r) for r in v1.reports] != [_fingerprint(r) for r in v4.reports]:
        diff.append("T1.1 dsd(2,4)")
    ok = not diff
    report(10, ok, f"{len(runs) + 1} runs identical across 1 and 4 workers (value, certificate, nodes); differing {diff}")
    assert ok
