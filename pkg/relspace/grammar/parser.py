# grammar/parser.py
"""
Planar pregroup reduction.

The words' types are concatenated into one factor sequence. A parse links
pairs of factors that cancel, with no two links crossing, no link inside a
single word and no residual factor enclosed by a link (its wire must reach
the bottom of the diagram). The residual factors, read left to right, must
spell the target type.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from diagrams.diagram import Diagram, DiagramBuilder
from relations.carriers import PortType
from relations.exceptions import ArityMismatch, NoParse

from .types import PregroupType, SimpleType

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Parse:
    types: tuple[PregroupType, ...]
    links: tuple[tuple[int, int], ...]
    residual: tuple[int, ...]

    @property
    def factors(self) -> list[SimpleType]:
        return [f for t in self.types for f in t]

    @property
    def owners(self) -> list[int]:
        return [w for w, t in enumerate(self.types) for _ in t]

    @property
    def residual_type(self) -> PregroupType:
        factors = self.factors
        return PregroupType(factors[r] for r in self.residual)

    def is_planar(self) -> bool:
        for a, (i, j) in enumerate(self.links):
            for k, l in self.links[a + 1:]:
                if i < k < j < l or k < i < l < j:
                    return False
            if any(i < r < j for r in self.residual):
                return False
        return True

    def is_valid(self) -> bool:
        factors, owners = self.factors, self.owners
        used = [p for link in self.links for p in link] + list(self.residual)
        if sorted(used) != list(range(len(factors))):
            return False
        for i, j in self.links:
            if not (i < j and owners[i] != owners[j] and factors[i].cancels_with(factors[j])):
                return False
        return self.is_planar()

    def __str__(self):
        links = " ".join(f"{i}-{j}" for i, j in self.links)
        return f"[{links}] → {self.residual_type}"


class _Search:
    def __init__(self, types: Sequence[PregroupType], target: PregroupType):
        self.factors = [f for t in types for f in t]
        self.owners = [w for w, t in enumerate(types) for _ in t]
        self.target = tuple(target)
        self.full = lru_cache(maxsize=None)(self._full)

    def _linkable(self, i: int, j: int) -> bool:
        return self.owners[i] != self.owners[j] and self.factors[i].cancels_with(self.factors[j])

    def _full(self, i: int, j: int):
        """Every non-crossing matching that cancels [i, j) completely, innermost link first."""
        if i == j:
            return ((),)
        if (j - i) % 2:
            return ()
        found = []
        for m in range(i + 1, j, 2):
            if not self._linkable(i, m):
                continue
            for inner in self.full(i + 1, m):
                for outer in self.full(m + 1, j):
                    found.append(((i, m),) + inner + outer)
        return tuple(found)

    def parses(self, pos: int = 0, t: int = 0) -> Iterator[tuple[tuple, tuple]]:
        """(links, residual) pairs, leftmost residual first."""
        n = len(self.factors)
        if t == len(self.target):
            for rest in self.full(pos, n):
                yield rest, ()
            return
        for r in range(pos, n):
            if self.factors[r] != self.target[t]:
                continue
            for before in self.full(pos, r):
                for links, residual in self.parses(r + 1, t + 1):
                    yield before + links, (r,) + residual


def all_parses(types: Sequence[PregroupType], target: PregroupType) -> list[Parse]:
    types = tuple(PregroupType(t) for t in types)
    return [Parse(types, links, residual) for links, residual in _Search(types, target).parses()]


def reduce(types: Sequence[PregroupType], target: PregroupType) -> Parse:
    types = tuple(PregroupType(t) for t in types)
    for links, residual in _Search(types, target).parses():
        parse = Parse(types, links, residual)
        logger.debug("parsed %s as %s", " | ".join(str(t) for t in types), parse)
        return parse
    raise NoParse(f"{' | '.join(str(t) for t in types)} does not reduce to {PregroupType(target)}")


def grammar_diagram(parse: Parse, ports: Sequence[PortType]) -> Diagram:
    """
    One cup per wire of every link and a plain wire for every residual
    factor. ``ports[i]`` is the wire profile of factor ``i``; a cup joins
    wire ``a`` of the left factor with wire ``len - 1 - a`` of the right one.
    """
    ports = list(ports)
    if len(ports) != len(parse.factors):
        raise ArityMismatch(f"{len(ports)} wire profiles for {len(parse.factors)} factors")
    dom = PortType(c for p in ports for c in p)
    b = DiagramBuilder(dom)
    wires, start = [], 0
    for p in ports:
        wires.append(b.inputs[start:start + len(p)])
        start += len(p)
    for i, j in parse.links:
        left, right = wires[i], wires[j]
        if len(left) != len(right):
            raise ArityMismatch(
                f"{parse.factors[i]} carries {len(left)} wires but {parse.factors[j]} carries {len(right)}"
            )
        for a, w in enumerate(left):
            b.cup(ports[i][a], [w, right[len(right) - 1 - a]])
    return b.build([w for r in parse.residual for w in wires[r]])
