# grammar/types.py
"""
Pregroup types.

A simple type is a basic type with an adjoint order: ``0`` plain, ``-1`` for
``⁻¹x``, ``+1`` for ``x⁻¹``, and further orders for iterated adjoints. In the
string form the prefix ``-1`` lowers the order and the suffix ``-1`` raises
it, so ``"-1n.s.n-1"`` is the transitive verb type. ``a`` immediately
followed by ``b`` cancels when both share a basic type and
``b.order == a.order - 1``.
"""
from __future__ import annotations

import re
from typing import Iterable, NamedTuple

from relations.exceptions import BadTypeString

BASIC = ("n", "s")

_FACTOR = re.compile(r"^((?:-1)*)([a-z]+)((?:-1)*)$")


class SimpleType(NamedTuple):
    base: str
    order: int = 0

    def cancels_with(self, right: SimpleType) -> bool:
        return self.base == right.base and right.order == self.order - 1

    @property
    def reversed_wires(self) -> bool:
        return self.order % 2 == 1

    def __str__(self):
        if self.order < 0:
            return "⁻¹" * -self.order + self.base
        return self.base + "⁻¹" * self.order

    def code(self) -> str:
        if self.order < 0:
            return "-1" * -self.order + self.base
        return self.base + "-1" * self.order


class PregroupType(tuple):
    """An ordered product of simple types; the empty product is the unit."""

    def __new__(cls, factors: Iterable[SimpleType] = ()):
        return super().__new__(cls, (SimpleType(*f) for f in factors))

    def __add__(self, other) -> PregroupType:
        return PregroupType(tuple(self) + tuple(other))

    def __str__(self):
        return " · ".join(str(f) for f in self) or "1"

    def code(self) -> str:
        return ".".join(f.code() for f in self)

    def occurrences(self, base: str, order: int | None = None) -> int:
        return sum(1 for f in self if f.base == base and (order is None or f.order == order))


def parse_factor(text: str) -> SimpleType:
    m = _FACTOR.match(text.strip())
    if not m:
        raise BadTypeString(f"cannot read type factor {text!r}")
    left, base, right = m.groups()
    if left and right:
        raise BadTypeString(f"factor {text!r} has adjoints on both sides")
    if base not in BASIC:
        raise BadTypeString(f"unknown basic type {base!r} in {text!r} (expected one of {BASIC})")
    return SimpleType(base, len(right) // 2 - len(left) // 2)


def parse_type(text: str) -> PregroupType:
    """``"-1n.s.n-1"`` → ⁻¹n · s · n⁻¹."""
    if not isinstance(text, str) or not text.strip():
        raise BadTypeString(f"empty type string {text!r}")
    return PregroupType(parse_factor(part) for part in text.split("."))


N = PregroupType([SimpleType("n")])
S = PregroupType([SimpleType("s")])
