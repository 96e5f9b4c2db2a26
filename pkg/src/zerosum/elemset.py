"""Dense membership sets over the elements of a fixed group table.

Sets are stored as Python integers used as bit vectors: bit ``x`` is set when
element ``x`` belongs to the set. Unions and membership tests are then single
integer operations, which is what the search and DP code leans on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np


def bits_of(elements: Iterable[int]) -> int:
    b = 0
    for x in elements:
        b |= 1 << int(x)
    return b


def iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def bits_to_array(bits: int, n: int) -> np.ndarray:
    """Boolean membership vector of length ``n``."""
    raw = bits.to_bytes((n + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n].astype(bool)


def array_to_bits(mask: np.ndarray) -> int:
    packed = np.packbits(np.asarray(mask, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def byte_tables(perm: np.ndarray) -> list[list[int]]:
    """Lookup tables mapping each byte of a bit vector through ``perm``.

    ``tabs[c][v]`` is the image bit vector of the elements ``8c + i`` for the
    bits ``i`` set in ``v``.
    """
    n = len(perm)
    tabs = []
    for c in range((n + 7) // 8):
        single = [1 << int(perm[8 * c + i]) if 8 * c + i < n else 0 for i in range(8)]
        tab = [0] * 256
        for v in range(1, 256):
            low = v & -v
            tab[v] = tab[v ^ low] | single[low.bit_length() - 1]
        tabs.append(tab)
    return tabs


def translate(tabs: list[list[int]], bits: int) -> int:
    r = 0
    c = 0
    while bits:
        r |= tabs[c][bits & 255]
        bits >>= 8
        c += 1
    return r


@dataclass(frozen=True)
class ElemSet:
    """Subset of ``range(order)``; immutable and hashable."""

    order: int
    bits: int = 0

    @classmethod
    def of(cls, order: int, elements: Iterable[int]) -> "ElemSet":
        b = bits_of(elements)
        if b >> order:
            raise IndexError(f"element index out of range for order {order}")
        return cls(order, b)

    @classmethod
    def full(cls, order: int) -> "ElemSet":
        return cls(order, (1 << order) - 1)

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> x & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __or__(self, other: "ElemSet") -> "ElemSet":
        return ElemSet(self.order, self.bits | other.bits)

    def __and__(self, other: "ElemSet") -> "ElemSet":
        return ElemSet(self.order, self.bits & other.bits)

    def __sub__(self, other: "ElemSet") -> "ElemSet":
        return ElemSet(self.order, self.bits & ~other.bits)

    def __le__(self, other: "ElemSet") -> bool:
        return self.bits & ~other.bits == 0

    def __ge__(self, other: "ElemSet") -> bool:
        return other <= self

    def is_full(self) -> bool:
        return self.bits == (1 << self.order) - 1

    def to_list(self) -> list[int]:
        return list(iter_bits(self.bits))

    def to_array(self) -> np.ndarray:
        return bits_to_array(self.bits, self.order)

    def __repr__(self) -> str:
        return f"ElemSet({self.to_list()})"
