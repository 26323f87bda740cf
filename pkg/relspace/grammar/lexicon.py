# grammar/lexicon.py
"""
The lexicon binds each word to a pregroup type and a meaning: an internal
wiring template plus the name of the scene relation filling it.

A noun without a relation is a proper name: in a plain evaluation it stands
for the inhabitant's current state; when the inhabitant is *tapped* its
wire enters the phrase diagram from above instead, so that the phrase
denotes a relation over the participants (what a knowledge update needs).
An adjective without a relation is a transparent determiner.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from diagrams import wirings
from diagrams.diagram import Diagram
from diagrams.evaluate import evaluate
from relations.carriers import Carrier, PortType
from relations.core import Relation
from relations.exceptions import ArityMismatch, BadTypeString, NoParse, UnknownWord

from .parser import Parse, grammar_diagram, reduce
from .types import N, S, PregroupType, parse_type

logger = logging.getLogger(__name__)

NOUN, ADJECTIVE, VERB, PREPOSITION, RELPRON = "noun", "adjective", "verb", "preposition", "relpron"

# the type each wiring template fills
TEMPLATE_TYPES = {
    NOUN: ("n",),
    ADJECTIVE: ("n.n-1",),
    VERB: ("-1n.s", "-1n.s.n-1"),
    PREPOSITION: ("-1n.n.n-1",),
    RELPRON: ("-1n.n.n-1-1.s-1",),
}
WIRINGS = tuple(TEMPLATE_TYPES)

# stands in for the space when a phrase is drawn without a scene
PLACEHOLDER = PortType((Carrier("n", ["*"]),))


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    type: PregroupType
    wiring: str
    relation: Optional[str] = None
    arity: int = 2

    def __post_init__(self):
        if self.wiring not in TEMPLATE_TYPES:
            raise BadTypeString(f"{self.word!r}: unknown wiring {self.wiring!r} (expected one of {WIRINGS})")
        allowed = [parse_type(t) for t in TEMPLATE_TYPES[self.wiring]]
        if self.type not in allowed:
            raise BadTypeString(
                f"{self.word!r}: type {self.type.code()} does not fit a {self.wiring} "
                f"(expected {' or '.join(t.code() for t in allowed)})"
            )
        if self.wiring in (VERB, PREPOSITION) and not self.relation:
            raise BadTypeString(f"{self.word!r}: a {self.wiring} needs a relation")
        if self.arity not in (1, 2):
            raise ArityMismatch(f"{self.word!r}: clauses take 1 or 2 participants, not {self.arity}")

    @property
    def is_name(self) -> bool:
        return self.wiring == NOUN and self.relation is None

    @property
    def participants(self) -> int:
        """Wires of noun width carried by the sentence factor."""
        if self.wiring == VERB:
            return self.type.occurrences("n")
        if self.wiring == RELPRON:
            return self.arity
        return 0


class Lexicon:
    def __init__(self, entries: Iterable[LexiconEntry]):
        self.entries: dict[str, LexiconEntry] = {}
        for e in entries:
            key = e.word.lower()
            if key in self.entries:
                raise BadTypeString(f"word {e.word!r} is listed twice")
            self.entries[key] = e
        self._longest = max((len(k.split()) for k in self.entries), default=1)

    def __getitem__(self, word: str) -> LexiconEntry:
        try:
            return self.entries[word.lower()]
        except KeyError:
            raise UnknownWord(word) from None

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.entries

    def __iter__(self):
        return iter(self.entries.values())

    def __len__(self):
        return len(self.entries)

    def tokenize(self, phrase: str) -> list[str]:
        """Greedy longest match, so ``can capture`` and ``next to`` are single tokens."""
        words = phrase.split()
        tokens, i = [], 0
        while i < len(words):
            for span in range(min(self._longest, len(words) - i), 0, -1):
                candidate = " ".join(words[i:i + span])
                if candidate in self:
                    tokens.append(self[candidate].word)
                    i += span
                    break
            else:
                raise UnknownWord(words[i])
        logger.debug("tokenized %r as %s", phrase, tokens)
        return tokens


# -------------------------
# phrase diagrams
# -------------------------
class Phrase(NamedTuple):
    diagram: Diagram
    parse: Parse
    participants: tuple[str, ...]


def _port(scene) -> PortType:
    return PLACEHOLDER if scene is None else scene.space.port


def meaning(entry: LexiconEntry, scene=None) -> Optional[wirings.BoxRef]:
    """The entry's relation as a named box typed from the scene, or by template without one."""
    if entry.relation is None:
        return None
    if scene is not None:
        r = scene.relation(entry.relation)
        return wirings.BoxRef(entry.relation, r.dom, r.cod)
    port = PLACEHOLDER
    if entry.wiring in (NOUN, ADJECTIVE) or (entry.wiring == VERB and entry.participants == 1):
        return wirings.BoxRef(entry.relation, PortType.unit(), port)
    return wirings.BoxRef(entry.relation, port, port)


def factor_ports(entry: LexiconEntry, port: PortType) -> list[PortType]:
    """The wires of each factor of the entry's type; odd adjoint orders run reversed."""
    ports = []
    for f in entry.type:
        p = port if f.base == "n" else port * entry.participants
        ports.append(p.reversed() if f.reversed_wires else p)
    return ports


def word_diagram(entry: LexiconEntry, scene=None, tapped: bool = False) -> Diagram:
    port = _port(scene)
    m = meaning(entry, scene)
    if entry.wiring == NOUN:
        if m is not None:
            return wirings.noun_wiring(m)
        if tapped:
            return wirings.tap_wiring(port)
        if scene is None:
            return wirings.noun_wiring(wirings.BoxRef(entry.word, PortType.unit(), port))
        who = scene.resolve(entry.word)
        return Diagram.state(scene.inhabitant(who), name=who)
    if entry.wiring == ADJECTIVE:
        return wirings.adjective_wiring(m, port)
    if entry.wiring == VERB:
        return wirings.verb_wiring(m, entry.participants)
    if entry.wiring == PREPOSITION:
        return wirings.preposition_wiring(m)
    return wirings.relpron_word(port, entry.arity)


def word_box(entry: LexiconEntry, scene=None, tapped: bool = False) -> Diagram:
    """The word as one opaque box, for drawing the grammar on its own."""
    port = _port(scene)
    cod = PortType(c for p in factor_ports(entry, port) for c in p)
    return Diagram.box(entry.word, port if tapped else PortType.unit(), cod)


def phrase_diagram(tokens: Sequence[str], lexicon: Lexicon, scene=None, taps: Iterable[str] = (),
                   expand: bool = True, target: PregroupType = N) -> Phrase:
    """
    Word states side by side, then the grammar's cups. Names listed in
    ``taps`` become inputs of the diagram, in order of first appearance;
    repeated mentions of one name each get their own input.
    """
    entries = [lexicon[t] for t in tokens]
    parse = reduce([e.type for e in entries], target)
    taps = {t.lower() for t in taps}
    port = _port(scene)
    words, ports, participants = [], [], []
    for e in entries:
        tapped = e.is_name and e.word.lower() in taps
        if tapped:
            participants.append(scene.resolve(e.word) if scene is not None else e.word)
        words.append(word_diagram(e, scene, tapped) if expand else word_box(e, scene, tapped))
        ports.extend(factor_ports(e, port))
    diagram = Diagram.tensor_all(words) >> grammar_diagram(parse, ports)
    logger.debug("phrase %s: %r", tokens, diagram)
    return Phrase(diagram, parse, tuple(participants))


def _tokens(phrase: Union[str, Sequence[str]], lexicon: Lexicon) -> list[str]:
    return lexicon.tokenize(phrase) if isinstance(phrase, str) else list(phrase)


def parse_and_evaluate(phrase: Union[str, Sequence[str]], lexicon: Lexicon, scene) -> Relation:
    """A noun phrase evaluates to a state over the space; a sentence to a state over its participants."""
    tokens = _tokens(phrase, lexicon)
    try:
        p = phrase_diagram(tokens, lexicon, scene, target=N)
    except NoParse:
        try:
            p = phrase_diagram(tokens, lexicon, scene, target=S)
        except NoParse:
            raise NoParse(f"{' '.join(tokens)!r} is neither a noun phrase nor a sentence") from None
    return evaluate(p.diagram, scene.environment())
