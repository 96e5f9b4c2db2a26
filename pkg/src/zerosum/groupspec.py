"""Group specifications and their textual grammar.

    cyclic(n) | abelian(n1,...,nr) | dsd(n1,...,nr) | G1(a,b,c) | G2(a,b,c)
    | G3(a,b,g,s) | G4(g) | direct(spec,spec)

``dsd(A)`` is the generalized dihedral group of the abelian group A with
invariant factors n1 | n2 | ... | nr. Whitespace is ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadParameters, ParseError

FAMILIES = ("cyclic", "abelian", "dsd", "G1", "G2", "G3", "G4", "direct")
_ARITY = {"cyclic": 1, "G1": 3, "G2": 3, "G3": 4, "G4": 1, "direct": 2}


@dataclass(frozen=True)
class PaperGroupSpec:
    family: str
    params: tuple[int, ...] = ()
    parts: tuple["PaperGroupSpec", ...] = ()

    def __str__(self) -> str:
        if self.family == "direct":
            return f"direct({','.join(str(p) for p in self.parts)})"
        return f"{self.family}({','.join(str(x) for x in self.params)})"

    def validate(self) -> "PaperGroupSpec":
        check_parameters(self)
        return self

    @property
    def order(self) -> int:
        f, p = self.family, self.params
        if f == "cyclic" or f == "abelian":
            return math.prod(p)
        if f == "dsd":
            return 2 * math.prod(p)
        if f == "G1":
            return 2 ** (p[0] + p[1] + p[2])
        if f == "G2":
            return 2 ** (p[0] + p[1])
        if f == "G3":
            return 2 ** (p[0] + p[1] + p[3])
        if f == "G4":
            return 2 ** (3 * p[0])
        if f == "direct":
            return self.parts[0].order * self.parts[1].order
        raise BadParameters(f"unknown family {f!r}")

    @property
    def is_paper_family(self) -> bool:
        return self.family in ("G1", "G2", "G3", "G4")


def _chain_ok(factors: tuple[int, ...]) -> bool:
    return all(n >= 2 for n in factors) and all(b % a == 0 for a, b in zip(factors, factors[1:]))


def check_parameters(spec: PaperGroupSpec) -> None:
    """Raise BadParameters naming the violated constraint."""
    f, p = spec.family, spec.params
    if f not in FAMILIES:
        raise BadParameters(f"unknown family {f!r}")
    if f == "direct":
        if len(spec.parts) != 2:
            raise BadParameters("direct takes exactly two group specs")
        for part in spec.parts:
            check_parameters(part)
        return
    if f in _ARITY and len(p) != _ARITY[f]:
        raise BadParameters(f"{f} takes {_ARITY[f]} parameters, got {len(p)}")
    if f in ("abelian", "dsd") and not p:
        raise BadParameters(f"{f} needs at least one invariant factor")
    if f in ("cyclic", "abelian", "dsd"):
        if not _chain_ok(p):
            raise BadParameters(f"{f}{p}: invariant factors must satisfy n1 | n2 | ... | nr with every ni >= 2")
        return
    violated = [name for name, ok in _family_constraints(f, p) if not ok]
    if violated:
        raise BadParameters(f"{spec}: violates " + "; ".join(violated))
    if any(x < 1 for x in p):
        raise BadParameters(f"{spec}: parameters must be positive integers")


def _family_constraints(f: str, p: tuple[int, ...]) -> list[tuple[str, bool]]:
    if f == "G1":
        a, b, c = p
        return [("α ≥ β ≥ γ ≥ 1", a >= b >= c >= 1)]
    if f == "G2":
        a, b, c = p
        return [("α ≥ 2γ", a >= 2 * c), ("β ≥ γ ≥ 1", b >= c >= 1), ("α+β>3", a + b > 3)]
    if f == "G3":
        a, b, g, s = p
        return [("β ≥ γ > σ ≥ 1", b >= g > s >= 1), ("α+σ ≥ 2γ", a + s >= 2 * g)]
    if f == "G4":
        return [("γ ∈ ℕ", p[0] >= 1)]
    return []


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str) -> None:
        self.skip()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            got = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise ParseError(self.text, self.pos, f"expected {ch!r}, got {got!r}")
        self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def name(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalnum():
            self.pos += 1
        word = self.text[start:self.pos]
        if word not in FAMILIES:
            raise ParseError(self.text, start, f"unknown family {word!r}")
        return word

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError(self.text, start, "expected a decimal integer")
        return int(self.text[start:self.pos])

    def spec(self) -> PaperGroupSpec:
        fam = self.name()
        self.expect("(")
        if fam == "direct":
            parts = [self.spec()]
            while self.peek() == ",":
                self.pos += 1
                parts.append(self.spec())
            self.expect(")")
            return PaperGroupSpec("direct", (), tuple(parts))
        params = [self.integer()]
        while self.peek() == ",":
            self.pos += 1
            params.append(self.integer())
        self.expect(")")
        return PaperGroupSpec(fam, tuple(params))


def parse_group_spec(text: str) -> PaperGroupSpec:
    """Parse and validate a group spec string."""
    p = _Parser(text)
    spec = p.spec()
    p.skip()
    if p.pos != len(text):
        raise ParseError(text, p.pos, "trailing characters")
    check_parameters(spec)
    return spec
