# diagrams/wirings.py
"""
Internal wirings: the word-state diagrams that give words their meaning,
plus the lifting helpers that place a relation among more wires.

Word states have no inputs. Their outputs follow the word's pregroup type
factor by factor; an odd adjoint order runs its wires in reverse so that a
cup always joins wire ``a`` of the left factor with wire ``len - 1 - a`` of
the right one.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from relations import core
from relations.carriers import PortType, as_port
from relations.core import Relation
from relations.exceptions import ArityMismatch, LayoutMismatch, TypeMismatch

from .diagram import Diagram, DiagramBuilder, Port
from .evaluate import evaluate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoxRef:
    """A named box resolved at evaluation time through the Environment."""
    name: str
    dom: PortType
    cod: PortType

    @property
    def is_state(self) -> bool:
        return len(self.dom) == 0


Meaning = Union[Relation, BoxRef]


def _place(b: DiagramBuilder, meaning: Meaning, sources: Sequence[Port] = ()) -> list[Port]:
    if isinstance(meaning, BoxRef):
        return b.box(meaning.name, meaning.dom, meaning.cod, sources)
    return b.literal(meaning, sources)


def noun_port(meaning: Meaning) -> PortType:
    return meaning.cod if meaning.is_state else meaning.dom


def _endo(meaning: Meaning, what: str) -> PortType:
    if meaning.dom != meaning.cod:
        raise ArityMismatch(f"{what} needs a relation X → X, got {meaning.dom} → {meaning.cod}")
    return meaning.dom


# -------------------------
# word states
# -------------------------
def noun_wiring(q: Meaning) -> Diagram:
    if not q.is_state:
        raise ArityMismatch(f"a noun denotes a state, got {q.dom} → {q.cod}")
    b = DiagramBuilder()
    return b.build(_place(b, q))


def tap_wiring(port) -> Diagram:
    """An inhabitant's own wire, entering the sentence from above."""
    return Diagram.id(as_port(port))


def determiner_wiring(port) -> Diagram:
    port = as_port(port)
    b = DiagramBuilder()
    caps = [b.cap(x) for x in port]
    return b.build([c[0] for c in caps] + [c[1] for c in reversed(caps)])


def adjective_wiring(a: Meaning = None, port=None) -> Diagram:
    """
    ``n · n⁻¹``: the noun wire passes through and is merged with ``a``.
    A state is merged by a spider; an endo-relation is applied on the way.
    Without a meaning this is the transparent determiner.
    """
    if a is None:
        return determiner_wiring(port)
    b = DiagramBuilder()
    if a.is_state:
        n = a.cod
        legs = [b.spider(x, [o], 2) for x, o in zip(n, _place(b, a))]
        return b.build([l[0] for l in legs] + [l[1] for l in reversed(legs)])
    n = _endo(a, "adjective")
    caps = [b.cap(x) for x in n]
    out = _place(b, a, [c[0] for c in caps])
    return b.build(out + [c[1] for c in reversed(caps)])


def verb_wiring(v: Meaning, arity: int) -> Diagram:
    """
    ``⁻¹n · s`` (arity 1) or ``⁻¹n · s · n⁻¹`` (arity 2). The sentence wire
    carries one copy of each participant, so feeding participant states in
    and reading the sentence out intersects them with ``v``.
    """
    b = DiagramBuilder()
    if arity == 2:
        if v.is_state:
            raise ArityMismatch("a transitive verb needs a relation X → X, got a state")
        n = _endo(v, "transitive verb")
        subject = [b.spider(x, [], 3) for x in n]
        out = _place(b, v, [s[2] for s in subject])
        obj = [b.spider(x, [o], 2) for x, o in zip(n, out)]
        return b.build([s[0] for s in reversed(subject)] + [s[1] for s in subject]
                       + [o[0] for o in obj] + [o[1] for o in reversed(obj)])
    if arity == 1:
        if v.is_state:
            legs = [b.spider(x, [o], 2) for x, o in zip(v.cod, _place(b, v))]
            return b.build([l[0] for l in reversed(legs)] + [l[1] for l in legs])
        n = _endo(v, "intransitive verb")
        legs = [b.spider(x, [], 2) for x in n]
        out = _place(b, v, [l[1] for l in legs])
        return b.build([l[0] for l in reversed(legs)] + out)
    raise ArityMismatch(f"verbs take 1 or 2 participants, not {arity}")


def preposition_wiring(p: Meaning) -> Diagram:
    """``⁻¹n · n · n⁻¹``: the head is copied out and tested against the object."""
    if p.is_state:
        raise ArityMismatch("a preposition needs a relation X → X, got a state")
    n = _endo(p, "preposition")
    b = DiagramBuilder()
    head = [b.spider(x, [], 3) for x in n]
    out = _place(b, p, [h[2] for h in head])
    return b.build([h[0] for h in reversed(head)] + [h[1] for h in head] + list(reversed(out)))


def relpron_word(port, arity: int = 2) -> Diagram:
    """
    ``⁻¹n · n · n⁻¹⁻¹ · s⁻¹``: the head wire is copied to the noun output and
    into the clause's gap; the clause's sentence wires are discarded.
    """
    port = as_port(port)
    b = DiagramBuilder()
    head = [b.spider(x, [], 3) for x in port]
    sentence = (port * arity).reversed()
    discard = [b.spider(x, [], 1)[0] for x in sentence]
    return b.build([h[0] for h in reversed(head)] + [h[1] for h in head] + [h[2] for h in head] + discard)


def relpron_wiring(head: Relation, clause: Diagram) -> Diagram:
    """``head`` restricted to the elements the clause accepts at its gap."""
    if not head.is_state:
        raise ArityMismatch("the head of a relative clause is a state")
    if clause.dom != head.cod:
        raise ArityMismatch(f"clause gap {clause.dom} does not match head {head.cod}")
    b = DiagramBuilder()
    copies = [b.spider(x, [o], 2) for x, o in zip(head.cod, b.literal(head, name="head"))]
    rest = b.embed(clause, [c[1] for c in copies])
    for x, o in zip(clause.cod, rest):
        b.spider(x, [o], 0)
    return b.build([c[0] for c in copies])


def feed_prior(prior: Relation, word: Diagram, arity: int) -> Diagram:
    """Cup a joint participant state into a verb's noun wires; the sentence wire stays open."""
    if not prior.is_state or len(prior.cod) % arity:
        raise ArityMismatch(f"prior {prior.cod} does not split into {arity} participants")
    m = len(prior.cod) // arity
    b = DiagramBuilder()
    p = b.literal(prior, name="prior")
    w = b.embed(word)
    for f in range(m):
        b.cup(prior.cod[f], [p[f], w[m - 1 - f]])
    if arity == 2:
        for f in range(m):
            b.cup(prior.cod[m + f], [w[len(w) - 1 - f], p[m + f]])
        return b.build(w[m:len(w) - m])
    return b.build(w[m:])


# -------------------------
# boxes, AND and lifting
# -------------------------
def filter_box(q: Relation) -> Relation:
    """The unary predicate ``q`` as the partial identity {(x, x) | x ∈ q}."""
    if not q.is_state:
        raise TypeMismatch("filter_box expects a state")
    k = len(q.cod)
    diagonal = core.identity(q.cod).data & q.data.reshape(q.cod.shape + (1,) * k)
    return Relation(q.cod, q.cod, diagonal)


def and_diagram(q: Relation, r: Relation) -> Diagram:
    """AND drawn as merging spiders, one per wire."""
    if not (q.is_state and r.is_state) or q.cod != r.cod:
        raise TypeMismatch(f"AND needs two states of one type, got {q.cod} and {r.cod}")
    b = DiagramBuilder()
    qs, rs = b.literal(q, name="q"), b.literal(r, name="r")
    return b.build([b.spider(x, [a, c], 1)[0] for x, a, c in zip(q.cod, qs, rs)])


@dataclass(frozen=True)
class Layout:
    """Where a relation's wires sit inside a larger dom and cod."""
    dom: PortType
    cod: PortType
    dom_positions: tuple[int, ...]
    cod_positions: tuple[int, ...]

    @classmethod
    def endo(cls, port, positions: Sequence[int]) -> Layout:
        port = as_port(port)
        return cls(port, port, tuple(positions), tuple(positions))

    def check(self, r: Meaning):
        for side, big, positions, small in (("dom", self.dom, self.dom_positions, r.dom),
                                            ("cod", self.cod, self.cod_positions, r.cod)):
            if len(positions) != len(small) or len(set(positions)) != len(positions):
                raise LayoutMismatch(f"{side} positions {positions} do not place {small}")
            for p, c in zip(positions, small):
                if not 0 <= p < len(big):
                    raise LayoutMismatch(f"{side} position {p} outside {big}")
                if big[p] != c:
                    raise LayoutMismatch(f"{side} position {p} holds {big[p].name}, not {c.name}")

    @property
    def free_dom(self) -> list[int]:
        return [p for p in range(len(self.dom)) if p not in self.dom_positions]

    @property
    def free_cod(self) -> list[int]:
        return [p for p in range(len(self.cod)) if p not in self.cod_positions]


def _layout_diagram(r: Meaning, layout: Layout, pass_through: bool) -> Diagram:
    layout.check(r)
    b = DiagramBuilder(layout.dom)
    inputs = b.inputs
    outputs: list = [None] * len(layout.cod)
    for q, o in zip(layout.cod_positions, _place(b, r, [inputs[p] for p in layout.dom_positions])):
        outputs[q] = o
    free_dom, free_cod = layout.free_dom, layout.free_cod
    if pass_through:
        if layout.dom.pick(free_dom) != layout.cod.pick(free_cod):
            raise LayoutMismatch(
                f"pass-through wires {layout.dom.pick(free_dom)} and {layout.cod.pick(free_cod)} differ"
            )
        for p, q in zip(free_dom, free_cod):
            outputs[q] = inputs[p]
    else:
        for p in free_dom:
            b.spider(layout.dom[p], [inputs[p]], 0)
        for q in free_cod:
            outputs[q] = b.spider(layout.cod[q], [], 1)[0]
    return b.build(outputs)


def lift_diagram(r: Meaning, layout: Layout) -> Diagram:
    return _layout_diagram(r, layout, pass_through=True)


def extend_diagram(r: Meaning, layout: Layout) -> Diagram:
    return _layout_diagram(r, layout, pass_through=False)


def lift(r: Relation, layout: Layout) -> Relation:
    """``r`` on its wires, identity on every other wire."""
    return evaluate(lift_diagram(r, layout))


def extend(r: Relation, layout: Layout) -> Relation:
    """``r`` on its wires, every other wire left unconstrained."""
    return evaluate(extend_diagram(r, layout))


def is_partial_identity(r: Relation) -> bool:
    return r.dom == r.cod and not np.any(r.data & ~core.identity(r.dom).data)
