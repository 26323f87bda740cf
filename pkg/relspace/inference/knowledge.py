# inference/knowledge.py
"""
Knowledge over several inhabitants.

Every inhabitant owns a copy of the space; the joint state lives on all of
their wires side by side, in the order the inhabitants were listed. A
sentence is turned into a state over its participants' wires and merged
into the joint with one spider per wire, so updates only ever shrink it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence, Union

from django.conf import settings

from diagrams.diagram import DiagramBuilder
from diagrams.evaluate import evaluate
from diagrams.wirings import and_diagram
from grammar.lexicon import Lexicon, phrase_diagram
from grammar.types import S
from relations import core
from relations.carriers import PortType
from relations.core import Relation, and_
from relations.exceptions import SpaceTooLarge, TypeMismatch, UnknownInhabitant
from spaces.space import Scene

logger = logging.getLogger(__name__)

Sentence = Union[str, Sequence[str]]


def max_joint() -> int:
    return int(getattr(settings, "RELSPACE_MAX_JOINT", 100_000_000))


# -------------------------
# entailment
# -------------------------
def infers(q: Relation, r: Relation) -> bool:
    """From ``q`` we infer ``r``: AND-ing ``r`` onto ``q`` changes nothing."""
    return and_(q, r) == q


def infers_diagrammatic(q: Relation, r: Relation) -> bool:
    return evaluate(and_diagram(q, r)) == q


def implication(port: PortType, antecedent: Relation, consequent: Relation) -> Relation:
    """
    The pairs ``(a, b)`` over two copies of ``port`` with ``a ∈ antecedent``
    only if ``b ∈ consequent``.
    """
    if antecedent.cod != port or consequent.cod != port:
        raise TypeMismatch(f"implication over {port} needs two states over it")
    k = len(port)
    a = antecedent.data.reshape(port.shape + (1,) * k)
    return Relation(PortType.unit(), port * 2, ~a | consequent.data)


# -------------------------
# knowledge states
# -------------------------
@dataclass(frozen=True)
class KnowledgeState:
    scene: Scene
    lexicon: Lexicon
    inhabitants: tuple[str, ...]
    joint: Relation

    @classmethod
    def initial(cls, scene: Scene, lexicon: Lexicon, inhabitants: Optional[Iterable[str]] = None) -> KnowledgeState:
        """The tensor of each inhabitant's own state (unknown unless the scene says otherwise)."""
        names = tuple(scene.resolve(w) for w in inhabitants) if inhabitants is not None else tuple(scene.inhabitants)
        size = scene.space.size ** len(names)
        if size > max_joint():
            raise SpaceTooLarge(f"joint of {len(names)} inhabitants has {size} elements (RELSPACE_MAX_JOINT)")
        joint = Relation(PortType.unit(), PortType.unit(), True)
        for who in names:
            joint = core.tensor(joint, scene.inhabitant(who))
        logger.info("knowledge over %s in %s", list(names), scene.name)
        return cls(scene, lexicon, names, joint)

    @property
    def width(self) -> int:
        return len(self.scene.space.port)

    def wires(self, who: str) -> list[int]:
        if who not in self.inhabitants:
            raise UnknownInhabitant(f"{who!r} is not tracked here (tracked: {', '.join(self.inhabitants)})")
        start = self.inhabitants.index(who) * self.width
        return list(range(start, start + self.width))

    def __repr__(self):
        return f"KnowledgeState({self.scene.name!r}, {list(self.inhabitants)}, {len(self.joint)} worlds)"


def _tokens(sentence: Sentence, lexicon: Lexicon) -> list[str]:
    return lexicon.tokenize(sentence) if isinstance(sentence, str) else list(sentence)


def sentence_state(k: KnowledgeState, sentence: Sentence) -> tuple[Relation, tuple[str, ...]]:
    """
    The sentence as a state over its participants' wires, one copy of the
    space per distinct participant in order of first mention.

    Each participant wire is a spider with one leg per mention plus the
    output leg, and the sentence wires are deleted, so the whole thing is
    contracted once and the phrase's full meaning is never built.
    """
    tokens = _tokens(sentence, k.lexicon)
    phrase = phrase_diagram(tokens, k.lexicon, k.scene, taps=k.inhabitants, target=S)
    distinct = tuple(dict.fromkeys(phrase.participants))
    port = k.scene.space.port
    b = DiagramBuilder()
    outs, feeds = [], {}
    for who in distinct:
        mentions = phrase.participants.count(who)
        for f in range(k.width):
            legs = b.spider(port[f], [], mentions + 1)
            outs.append(legs[0])
            feeds[who, f] = iter(legs[1:])
    sources = [next(feeds[who, f]) for who in phrase.participants for f in range(k.width)]
    for p in b.embed(phrase.diagram, sources):
        b.spider(b.carrier(p), [p], 0)
    return evaluate(b.build(outs), k.scene.environment()), distinct


def constrain(k: KnowledgeState, state: Relation, participants: Sequence[str]) -> KnowledgeState:
    """AND ``state`` onto the participants' wires of the joint."""
    if not participants:
        if not state.is_scalar:
            raise TypeMismatch("a constraint without participants is a scalar")
        return k if state.data.all() else replace(k, joint=core.empty(PortType.unit(), k.joint.cod))
    wires = [w for who in participants for w in k.wires(who)]
    if state.cod != k.joint.cod.pick(wires):
        raise TypeMismatch(f"constraint over {state.cod} does not fit wires {wires}")
    b = DiagramBuilder()
    outs = b.literal(k.joint, name="joint")
    s = b.literal(state, name="sentence")
    for i, w in enumerate(wires):
        outs[w] = b.spider(k.joint.cod[w], [outs[w], s[i]], 1)[0]
    return replace(k, joint=evaluate(b.build(outs)))


def update(k: KnowledgeState, sentence: Sentence) -> KnowledgeState:
    state, participants = sentence_state(k, sentence)
    updated = constrain(k, state, participants)
    logger.info("%r → %d of %d worlds left", sentence, len(updated.joint), len(k.joint))
    return updated


def marginalize(k: KnowledgeState, keep: Iterable[str]) -> Relation:
    """The joint with every other inhabitant deleted, over ``keep``'s wires in that order."""
    names = [k.scene.resolve(w) for w in keep]
    return k.joint.project([w for who in names for w in k.wires(who)])


def consistent(k: KnowledgeState) -> bool:
    return not k.joint.is_empty


def entails(k: KnowledgeState, sentence: Sentence) -> bool:
    state, participants = sentence_state(k, sentence)
    return infers(marginalize(k, participants), state)


def derive_facts(k: KnowledgeState, queries: Iterable[Sentence]) -> list[bool]:
    return [entails(k, q) for q in queries]
