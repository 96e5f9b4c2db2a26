"""Command-line front end.

    zerosum group info SPEC
    zerosum invariant SPEC --which d,do,e,loewy-jennings,loewy-direct
    zerosum verify TAG SPEC [SPEC ...]
    zerosum catalog --max-order N [--suite full]
    zerosum props [--seed S]

Every result is one JSON object per line. Exit codes: 0 all passed or
determined, 1 a mathematical check failed, 2 something is undetermined
(budget exhausted), 3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .constructions import (
    build_paper_group,
    catalog,
    extremal_sequences,
    relation_checks,
)
from .errors import CapExceeded, NotPGroup, ZeroSumError
from .groups import GroupTable, prime_power, structure_profile
from .groupspec import PaperGroupSpec, parse_group_spec
from .modular import loewy_direct, loewy_jennings, m_series
from .props import DEFAULT_SEED, SUITES, run_suite
from .search import (
    UNDETERMINED,
    Budget,
    InvariantReport,
    gao_constant,
    ordered_davenport,
    small_davenport,
)
from .sequences import is_ordered_free, is_product_one_free, pi_r
from .verify import TAGS, verify_theorem

EXIT_OK, EXIT_FAIL, EXIT_UNDETERMINED, EXIT_INVALID = 0, 1, 2, 3
WHICH = {"d": "d", "do": "Do", "e": "E", "loewy-jennings": "L_jennings", "loewy-direct": "L_direct"}
DEFAULT_BUDGET_NODES = 10_000_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which means "undetermined" here
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    specs: list[str] = field(default_factory=list)
    which: list[str] = field(default_factory=lambda: ["d", "do"])
    tag: str | None = None
    budget_nodes: int | None = DEFAULT_BUDGET_NODES
    budget_seconds: float | None = None
    workers: int = 1
    output: str | None = None
    cache: str | None = None
    seed: int = DEFAULT_SEED
    trials: int = 100
    max_order: int = 16
    suite: str | None = None
    search_max_order: int = 16
    use_caps: bool = True
    raw: bool = False
    timing: bool = True

    def __post_init__(self):
        if self.budget_nodes is not None and self.budget_nodes <= 0:
            raise UsageError("--budget-nodes must be positive")
        if self.budget_seconds is not None and self.budget_seconds <= 0:
            raise UsageError("--budget-seconds must be positive")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")

    @property
    def budget(self) -> Budget:
        return Budget(self.budget_nodes, self.budget_seconds)


def budget_class(nodes: int | None) -> str:
    if nodes is not None and nodes <= 100_000:
        return "small"
    if nodes is not None and nodes <= 10_000_000:
        return "medium"
    return "large"


# -- output ----------------------------------------------------------------------------


class Emitter:
    def __init__(self, cfg: RunConfig, stream):
        self.cfg = cfg
        self.stream = stream
        self.codes: list[int] = []

    def emit(self, record: dict, code: int) -> None:
        if not self.cfg.timing:
            record["elapsed_ms"] = 0
        else:
            record["elapsed_ms"] = round(float(record.get("elapsed_ms", 0.0)), 3)
        self.stream.write(json.dumps(record, ensure_ascii=False) + "\n")
        self.stream.flush()
        self.codes.append(code)

    def exit_code(self) -> int:
        if EXIT_FAIL in self.codes:
            return EXIT_FAIL
        if EXIT_UNDETERMINED in self.codes:
            return EXIT_UNDETERMINED
        return EXIT_OK


def _labels(t: GroupTable, xs: Iterable[int]) -> list[str]:
    return [t.labels[int(x)] for x in xs]


def _indices(t: GroupTable, labels: Iterable[str]) -> list[int]:
    index = {lab: i for i, lab in enumerate(t.labels)}
    return [index[lab] for lab in labels]


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return int(x) if hasattr(x, "__int__") else str(x)


# -- cache -------------------------------------------------------------------------------


class Cache:
    def __init__(self, path: str | None):
        self.path = Path(path) if path else None
        self.data: dict = {}
        if self.path is not None and self.path.exists():
            try:
                self.data = json.loads(self.path.read_text())
            except json.JSONDecodeError:
                self.data = {}

    def get(self, key: str):
        return self.data.get(key)

    def put(self, key: str, record: dict) -> None:
        if self.path is None:
            return
        self.data[key] = record
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        tmp.write_text(json.dumps(self.data, indent=1))
        tmp.replace(self.path)


def recheck_record(t: GroupTable, rec: dict) -> bool:
    """Re-verify a cached invariant record against the table."""
    inv, value = rec["invariant"], rec["value"]
    cert = rec.get("certificate", {})
    if inv in ("L_jennings", "L_direct"):
        return loewy_jennings(m_series(t, prime_power(t.order)[0])) == value
    try:
        w = _indices(t, cert.get("witness", []))
    except KeyError:
        return False
    n = t.order
    if value == UNDETERMINED:
        length = len(w)
    else:
        length = value if inv == "d" else value - 1
        if len(w) != length:
            return False
    if not w:
        return length == 0
    if inv == "d":
        return is_product_one_free(t, w)
    if inv == "Do":
        return is_ordered_free(t, w)
    if inv == "E":
        return len(w) < n or 0 not in pi_r(t, w, n)
    return False


# -- commands ---------------------------------------------------------------------------


def _hint(spec: PaperGroupSpec, t: GroupTable, inv: str) -> list[int] | None:
    """A verified free sequence from the explicit constructions, if there is one."""
    try:
        if inv == "Do":
            if spec.is_paper_family:
                terms = list(extremal_sequences(spec, f"thm1.4-{spec.family}", t).seq.terms)
                return terms if is_ordered_free(t, terms) else None
            if spec.family == "dsd":
                terms = extremal_sequences(spec, "thm1.1", t).seq.elements()
                return terms if is_ordered_free(t, terms) else None
        if inv == "d":
            if spec.family == "G2":
                terms = extremal_sequences(spec, "cor1.5", t).seq.elements()
                return terms if is_product_one_free(t, terms) else None
            if spec.family == "dsd":
                terms = extremal_sequences(spec, "thm1.1", t).seq.elements()
                return terms if is_product_one_free(t, terms) else None
        if inv == "E" and t.order <= 16:
            terms = extremal_sequences(spec, "egz-lower", t).seq.elements()
            return terms if 0 not in pi_r(t, terms, t.order) else None
    except ZeroSumError:
        return None
    return None


def _invariant_record(cfg: RunConfig, spec: PaperGroupSpec, t: GroupTable, key: str) -> tuple[dict, int]:
    inv = WHICH[key]
    base = {"spec": str(spec), "order": t.order, "invariant": inv}
    if inv in ("L_jennings", "L_direct"):
        pp = prime_power(t.order)
        if pp is None:
            raise NotPGroup(f"{spec} is not a p-group; the Loewy length is defined here for p-groups only")
        t0 = time.perf_counter()
        if inv == "L_jennings":
            ms = m_series(t, pp[0])
            value = loewy_jennings(ms)
            cert = {"kind": "m-series", "e": list(ms.e), "orders": list(ms.orders)}
        else:
            prof = loewy_direct(t, pp[0])
            value = prof.nilpotency_index
            cert = {"kind": "radical-dims", "dims": list(prof.dims)}
        rec = base | {
            "value": value,
            "certificate": cert,
            "method": {"p": pp[0]},
            "nodes": 0,
            "elapsed_ms": (time.perf_counter() - t0) * 1000.0,
            "budget_exhausted": False,
        }
        return rec, EXIT_OK
    hint = _hint(spec, t, inv)
    if inv == "d":
        r = small_davenport(t, cfg.budget, cfg.workers, hint=hint, use_caps=cfg.use_caps, spec=str(spec))
    elif inv == "Do":
        r = ordered_davenport(t, cfg.budget, cfg.workers, hint=hint, use_caps=cfg.use_caps, spec=str(spec))
    else:
        r = gao_constant(t, cfg.budget, cfg.workers, hint=hint, spec=str(spec))
    return report_record(r, t), (EXIT_OK if r.determined else EXIT_UNDETERMINED)


def report_record(r: InvariantReport, t: GroupTable) -> dict:
    cert = dict(r.certificate)
    cert["witness"] = _labels(t, cert.get("witness", []))
    cert["witness_length"] = len(cert["witness"])
    return {
        "spec": r.spec,
        "order": t.order,
        "invariant": r.invariant,
        "value": r.value,
        "certificate": _jsonable(cert),
        "method": _jsonable(r.method),
        "nodes": r.nodes,
        "elapsed_ms": r.elapsed_ms,
        "budget_exhausted": r.budget_exhausted,
    }


def cmd_invariant(cfg: RunConfig, out: Emitter) -> None:
    cache = Cache(cfg.cache)
    for spec in [parse_group_spec(s) for s in cfg.specs]:
        t = build_paper_group(spec)
        for key in cfg.which:
            inv = WHICH[key]
            ckey = f"{spec}|{inv}{'' if cfg.use_caps else ':nocaps'}|{budget_class(cfg.budget_nodes)}"
            hit = cache.get(ckey)
            if hit is not None:
                if recheck_record(t, hit):
                    rec = dict(hit)
                    rec["method"] = dict(rec.get("method", {})) | {"cache": "hit, witness re-verified"}
                    out.emit(rec, EXIT_OK if rec["value"] != UNDETERMINED else EXIT_UNDETERMINED)
                else:
                    out.emit(
                        {
                            "spec": str(spec),
                            "order": t.order,
                            "invariant": inv,
                            "value": hit.get("value"),
                            "certificate": {"kind": "cache-rejected", "reason": "cached witness failed re-verification"},
                            "method": {"cache": "rejected"},
                            "nodes": 0,
                            "elapsed_ms": 0,
                            "budget_exhausted": False,
                        },
                        EXIT_FAIL,
                    )
                continue
            rec, code = _invariant_record(cfg, spec, t, key)
            out.emit(rec, code)
            cache.put(ckey, rec | {"elapsed_ms": 0})


def verification_record(rep, t: GroupTable | None = None) -> dict:
    return {
        "spec": rep.spec,
        "order": rep.order,
        "claim": rep.tag,
        "status": rep.status,
        "certificate": _jsonable({"claims": [c.as_dict() for c in rep.claims], "quantities": rep.quantities}),
        "method": _jsonable({"searches": [{"invariant": r.invariant, "value": r.value, "certificate": r.certificate["kind"]} for r in rep.reports]}),
        "nodes": rep.nodes,
        "elapsed_ms": rep.elapsed_ms,
        "budget_exhausted": rep.budget_exhausted,
    }


_STATUS_CODE = {"pass": EXIT_OK, "skipped": EXIT_OK, "fail": EXIT_FAIL, "undetermined": EXIT_UNDETERMINED}


def cmd_verify(cfg: RunConfig, out: Emitter) -> None:
    if cfg.tag not in TAGS:
        raise UsageError(f"unknown tag {cfg.tag!r}; expected one of {', '.join(TAGS)}")
    specs = [parse_group_spec(s) for s in cfg.specs]
    for spec in specs:
        rep = verify_theorem(cfg.tag, spec, cfg.budget, cfg.workers, use_caps=cfg.use_caps, raw=cfg.raw)
        out.emit(verification_record(rep), _STATUS_CODE[rep.status])


def group_info_record(spec: PaperGroupSpec) -> tuple[dict, int]:
    t0 = time.perf_counter()
    t = build_paper_group(spec)
    pp = prime_power(t.order)
    prof = structure_profile(t, pp[0] if pp else None)
    checks = relation_checks(spec, t)
    ok = all(v for _, v in checks)
    rec = {
        "spec": str(spec),
        "order": t.order,
        "claim": "relations",
        "status": "pass" if ok else "fail",
        "certificate": _jsonable(
            {
                "profile": {
                    "is_cyclic": prof.is_cyclic,
                    "is_abelian": prof.is_abelian,
                    "center_size": prof.center_size,
                    "exponent": prof.exponent,
                    "p": prof.p,
                    "min_generators": prof.min_generators,
                    "has_cyclic_subgroup_of_index_p": prof.has_cyclic_subgroup_of_index_p,
                },
                "generators": {k: t.labels[v] for k, v in t.named.items()},
                "relation_checks": [{"relation": name, "holds": bool(v)} for name, v in checks],
            }
        ),
        "method": {"table": "pc-collection"},
        "nodes": 0,
        "elapsed_ms": (time.perf_counter() - t0) * 1000.0,
        "budget_exhausted": False,
    }
    return rec, EXIT_OK if ok else EXIT_FAIL


def cmd_group(cfg: RunConfig, out: Emitter) -> None:
    for spec in [parse_group_spec(s) for s in cfg.specs]:
        rec, code = group_info_record(spec)
        out.emit(rec, code)


def _suite_tags(spec: PaperGroupSpec, order: int, search_max: int) -> list[str]:
    tags = []
    pp = prime_power(order)
    if spec.is_paper_family:
        tags += ["L4.x", "T1.4"]
        if spec.family == "G2":
            tags.append("C1.5")
    if pp is not None and pp[0] == 2 and (spec.is_paper_family or (spec.family == "dsd" and len(spec.params) == 1)):
        tags.append("P2.34")
    if order <= search_max:
        if spec.family == "dsd":
            tags.append("T1.1")
        if pp is not None:
            tags.append("T1.5")
    return tags


def cmd_catalog(cfg: RunConfig, out: Emitter) -> None:
    if cfg.max_order < 2:
        raise UsageError("--max-order must be at least 2")
    for spec in catalog(cfg.max_order):
        if cfg.suite is None:
            out.emit(
                {
                    "spec": str(spec),
                    "order": spec.order,
                    "claim": "catalog-entry",
                    "status": "pass",
                    "certificate": {},
                    "method": {},
                    "nodes": 0,
                    "elapsed_ms": 0,
                    "budget_exhausted": False,
                },
                EXIT_OK,
            )
            continue
        rec, code = group_info_record(spec)
        out.emit(rec, code)
        t = build_paper_group(spec)
        pp = prime_power(t.order)
        if pp is not None:
            t0 = time.perf_counter()
            lj = loewy_jennings(m_series(t, pp[0]))
            ld = loewy_direct(t, pp[0]).nilpotency_index
            out.emit(
                {
                    "spec": str(spec),
                    "order": t.order,
                    "claim": "loewy-cross-check",
                    "status": "pass" if lj == ld else "fail",
                    "certificate": {"L_jennings": lj, "L_direct": ld},
                    "method": {"p": pp[0]},
                    "nodes": 0,
                    "elapsed_ms": (time.perf_counter() - t0) * 1000.0,
                    "budget_exhausted": False,
                },
                EXIT_OK if lj == ld else EXIT_FAIL,
            )
        for tag in _suite_tags(spec, t.order, cfg.search_max_order):
            rep = verify_theorem(tag, spec, cfg.budget, cfg.workers, use_caps=cfg.use_caps)
            out.emit(verification_record(rep), _STATUS_CODE[rep.status])


def cmd_props(cfg: RunConfig, out: Emitter) -> None:
    names = [cfg.suite] if cfg.suite else list(SUITES)
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
        t0 = time.perf_counter()
        res = run_suite(name, cfg.seed, cfg.trials)
        out.emit(
            {
                "spec": "",
                "order": 0,
                "claim": name,
                "status": "pass" if res.passed else "fail",
                "certificate": _jsonable({"trials": res.trials, "failures": res.failures[:10]}),
                "method": {"seed": cfg.seed},
                "nodes": 0,
                "elapsed_ms": (time.perf_counter() - t0) * 1000.0,
                "budget_exhausted": False,
            },
            EXIT_OK if res.passed else EXIT_FAIL,
        )


COMMANDS = {"group": cmd_group, "invariant": cmd_invariant, "verify": cmd_verify, "catalog": cmd_catalog, "props": cmd_props}


def run(cfg: RunConfig, stream=None) -> int:
    """Execute one command; returns the exit code."""
    if cfg.output:
        with open(cfg.output, "w") as fh:
            return run(RunConfig(**{**cfg.__dict__, "output": None}), fh)
    out = Emitter(cfg, stream if stream is not None else sys.stdout)
    COMMANDS[cfg.command](cfg, out)
    return out.exit_code()


# -- argument parsing --------------------------------------------------------------------


def _env_int(name: str, default):
    v = os.environ.get(name)
    return int(v) if v else default


def _env_float(name: str, default):
    v = os.environ.get(name)
    return float(v) if v else default


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--budget-nodes", type=int, default=_env_int("ZEROSUM_BUDGET_NODES", DEFAULT_BUDGET_NODES))
    common.add_argument("--budget-seconds", type=float, default=_env_float("ZEROSUM_BUDGET_SECONDS", None))
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--output", "-o", default=None, help="write JSON lines here instead of stdout")
    common.add_argument("--cache", default=os.environ.get("ZEROSUM_CACHE"), help="JSON cache file")
    common.add_argument("--no-caps", action="store_true", help="search without the Olson-White style depth caps")
    common.add_argument("--no-timing", action="store_true", help="write elapsed_ms as 0 for byte-stable output")

    p = _Parser(prog="zerosum", description="Zero-sum invariants and Loewy lengths of small groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("group", parents=[common], help="group structure and relation checks")
    g.add_argument("action", choices=["info"])
    g.add_argument("specs", nargs="+")

    i = sub.add_parser("invariant", parents=[common], help="compute invariants")
    i.add_argument("specs", nargs="+")
    i.add_argument("--which", default="d,do", help="comma list of " + ",".join(WHICH))

    v = sub.add_parser("verify", parents=[common], help="verify a theorem on given groups")
    v.add_argument("tag", help="one of " + ", ".join(TAGS))
    v.add_argument("specs", nargs="+")
    v.add_argument("--raw", action="store_true", help="T1.4: also confirm by exhaustive ordered search")

    c = sub.add_parser("catalog", parents=[common], help="list or check the group catalog")
    c.add_argument("--max-order", type=int, default=16)
    c.add_argument("--suite", choices=["full"], default=None)
    c.add_argument("--search-max-order", type=int, default=16, help="largest order for search-based checks")

    pr = sub.add_parser("props", parents=[common], help="seeded randomized lemma suites")
    pr.add_argument("--seed", type=int, default=DEFAULT_SEED)
    pr.add_argument("--trials", type=int, default=100)
    pr.add_argument("--suite", default=None, help="one of " + ", ".join(SUITES))
    return p


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    a = build_parser().parse_args(argv)
    which = ["d", "do"]
    if a.command == "invariant":
        which = [w.strip().lower() for w in a.which.split(",") if w.strip()]
        bad = [w for w in which if w not in WHICH]
        if bad or not which:
            raise UsageError(f"unknown invariant(s) {bad}; expected a subset of {','.join(WHICH)}")
    return RunConfig(
        command=a.command,
        specs=list(getattr(a, "specs", [])),
        which=which,
        tag=getattr(a, "tag", None),
        budget_nodes=a.budget_nodes,
        budget_seconds=a.budget_seconds,
        workers=a.workers,
        output=a.output,
        cache=a.cache,
        seed=getattr(a, "seed", DEFAULT_SEED),
        trials=getattr(a, "trials", 100),
        max_order=getattr(a, "max_order", 16),
        suite=getattr(a, "suite", None),
        search_max_order=getattr(a, "search_max_order", 16),
        use_caps=not a.no_caps,
        raw=getattr(a, "raw", False),
        timing=not a.no_timing,
    )


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
        return run(cfg)
    except UsageError as e:
        print(f"zerosum: error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (ZeroSumError, CapExceeded, NotPGroup) as e:
        # ParseError, BadParameters, NotPGroup and friends: the input was not acceptable
        print(f"zerosum: error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
