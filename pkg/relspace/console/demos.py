# console/demos.py
"""
Scripted scenarios with their scenes and lexicons embedded, each comparing
the expected answer with the computed one.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple

from diagrams.evaluate import evaluate
from diagrams.wirings import BoxRef, feed_prior, verb_wiring
from grammar.lexicon import parse_and_evaluate
from grammar.serializers import load_lexicon
from inference.knowledge import (
    KnowledgeState, consistent, derive_facts, entails, implication, infers, marginalize, update,
)
from relations.core import apply_state, bend, identity, power
from spaces.chess import BOARD, can_capture, can_capture_by_moves, kings_moves, next_to, squares
from spaces.penrose import build_penrose
from spaces.serializers import load_scene

from .render import render

logger = logging.getLogger(__name__)


class Check(NamedTuple):
    label: str
    expected: Any
    computed: Any

    @property
    def ok(self) -> bool:
        return self.expected == self.computed


@dataclass
class DemoReport:
    name: str
    checks: list[Check] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def check(self, label: str, expected, computed):
        self.checks.append(Check(label, expected, computed))


def verdict(flag: bool) -> str:
    return "ENTAILED" if flag else "NOT-ENTAILED"


def consistency(k: KnowledgeState) -> str:
    return "CONSISTENT" if consistent(k) else "INCONSISTENT (empty joint)"


# -------------------------
# embedded scenes and lexicons
# -------------------------
CHESS_FEN = "4r3/2n2k2/P3p1p1/5p2/1P1K3N/2PQ4/r4B2/8"

CHESS_SCENE = {"name": "chess", "space": {"kind": "chess", "fen": CHESS_FEN}}

CHESS_LEXICON = [
    {"word": "pawn", "type": "n", "relation": "pawn", "wiring": "noun"},
    {"word": "knight", "type": "n", "relation": "knight", "wiring": "noun"},
    {"word": "bishop", "type": "n", "relation": "bishop", "wiring": "noun"},
    {"word": "rook", "type": "n", "relation": "rook", "wiring": "noun"},
    {"word": "queen", "type": "n", "relation": "queen", "wiring": "noun"},
    {"word": "king", "type": "n", "relation": "king", "wiring": "noun"},
    {"word": "piece", "type": "n", "relation": "piece", "wiring": "noun"},
    {"word": "a", "type": "n.n-1", "wiring": "adjective"},
    {"word": "the", "type": "n.n-1", "wiring": "adjective"},
    {"word": "white", "type": "n.n-1", "relation": "white", "wiring": "adjective"},
    {"word": "black", "type": "n.n-1", "relation": "black", "wiring": "adjective"},
    {"word": "next to", "type": "-1n.n.n-1", "relation": "next_to", "wiring": "preposition"},
    {"word": "can capture", "type": "-1n.s.n-1", "relation": "can_capture", "wiring": "verb"},
    {"word": "that", "type": "-1n.n.n-1-1.s-1", "wiring": "relpron"},
]

SUBWAY_SCENE = {"name": "tuen ma", "space": {"kind": "subway"}}

SUBWAY_LEXICON = [
    {"word": "station", "type": "n", "relation": "station", "wiring": "noun"},
    {"word": "my station", "type": "n", "relation": "my_station", "wiring": "noun"},
    {"word": "before", "type": "-1n.n.n-1", "relation": "next_stop", "wiring": "preposition"},
]


def cube(n: int) -> list[dict]:
    return [{"name": a, "hi": n - 1} for a in "xyz"]


ABOVE_LEXICON = [
    {"word": "the", "type": "n.n-1", "wiring": "adjective"},
    {"word": "is above", "type": "-1n.s.n-1", "relation": "above", "wiring": "verb"},
]

ABOVE_SCENE = {
    "name": "room",
    "space": {"kind": "grid", "axes": cube(4)},
    "inhabitants": [{"name": "painting"}, {"name": "chest"}, {"name": "light"}],
}

PENROSE_SCENE = {
    "name": "penrose circuit",
    "space": {"kind": "grid", "axes": cube(4)},
    "inhabitants": [{"name": n} for n in ("I", "II", "III", "IV")],
}

PARIS_SCENE = {
    "name": "paris",
    "space": {
        "kind": "grid",
        "axes": cube(5) + [{"name": "t", "hi": 5, "resolution": "1 min"}],
        "relations": [{"name": "chases_3", "kind": "chases", "delta": "3 min"}],
    },
    "regions": [{"name": "Paris", "bounds": {"x": [0, 1], "y": [0, 1]}}],
    "inhabitants": [{"name": "Alice"}, {"name": "Bob"}],
}

PARIS_LEXICON = [
    {"word": "chases", "type": "-1n.s.n-1", "relation": "chases", "wiring": "verb"},
    {"word": "is in Paris", "type": "-1n.s", "relation": "Paris", "wiring": "verb"},
]

SAVANNAH_SCENE = {
    "name": "savannah",
    "space": {
        "kind": "grid",
        "axes": [{"name": "x", "hi": 600}, {"name": "y", "hi": 0}, {"name": "z", "hi": 0}],
        "features": [
            {"name": "endurance", "values": [60, 1800], "unit": "s"},
            {"name": "speed", "values": [100, 120], "unit": "km/h"},
        ],
        "relations": [
            {"name": "can_capture", "kind": "can_capture_hunt"},
            {"name": "next_to", "kind": "close_to", "epsilon": "5 m"},
        ],
        "nouns": [
            {"name": "cheetah", "values": {"x": [0], "endurance": [60], "speed": [120]}},
            {"name": "ostrich", "members": [[200, 0, 0, 1800, 100], [500, 0, 0, 1800, 100]]},
            {"name": "grass", "values": {"x": [3]}},
        ],
    },
}

SAVANNAH_LEXICON = [
    {"word": "cheetah", "type": "n", "relation": "cheetah", "wiring": "noun"},
    {"word": "ostrich", "type": "n", "relation": "ostrich", "wiring": "noun"},
    {"word": "grass", "type": "n", "relation": "grass", "wiring": "noun"},
    {"word": "a", "type": "n.n-1", "wiring": "adjective"},
    {"word": "next to", "type": "-1n.n.n-1", "relation": "next_to", "wiring": "preposition"},
    {"word": "can capture", "type": "-1n.s.n-1", "relation": "can_capture", "wiring": "verb"},
    {"word": "that", "type": "-1n.n.n-1-1.s-1", "wiring": "relpron"},
]

CHEESE_SCENE = {
    "name": "luggage",
    "space": {
        "kind": "grid",
        "axes": cube(3),
        "features": [
            {"name": "radius", "values": [1, 2, 3], "unit": "m"},
            {"name": "fragrance", "values": ["pungent", "odourless"]},
        ],
        "relations": [{"name": "inside", "kind": "inside"}],
        "predicates": [{"name": "stinks", "feature": "fragrance", "values": ["pungent"]}],
    },
    "inhabitants": [{"name": "cheese"}, {"name": "suitcase"}],
}

CHEESE_LEXICON = [
    {"word": "the", "type": "n.n-1", "wiring": "adjective"},
    {"word": "inside", "type": "-1n.n.n-1", "relation": "inside", "wiring": "preposition"},
    {"word": "is inside", "type": "-1n.s.n-1", "relation": "inside", "wiring": "verb"},
    {"word": "stinks", "type": "-1n.s", "relation": "stinks", "wiring": "verb"},
]


def names_lexicon(base: list[dict], scene_data: dict) -> list[dict]:
    """Add a proper-name entry for every inhabitant of the scene."""
    return base + [{"word": i["name"], "type": "n", "wiring": "noun"} for i in scene_data.get("inhabitants", [])]


# -------------------------
# scenarios
# -------------------------
def chess_demo() -> DemoReport:
    report = DemoReport("chess")
    scene, lexicon = load_scene(CHESS_SCENE), load_lexicon(CHESS_LEXICON)
    goldens = [
        ("pawn", ["a6", "b4", "c3", "e6", "f5", "g6"]),
        ("pawn next to a king", ["c3", "e6", "g6"]),
        ("pawn that a knight can capture", ["a6", "f5", "g6"]),
        ("pawn that a knight can capture next to a king", ["g6"]),
    ]
    result = None
    for phrase, expected in goldens:
        result = parse_and_evaluate(phrase, lexicon, scene)
        report.check(phrase, expected, squares(result))
    king = apply_state(kings_moves(), BOARD.state([("c", "3")]))
    report.check("king's moves from c3", ["b2", "b3", "b4", "c2", "c4", "d2", "d3", "d4"], squares(king))
    report.check("king's moves = next to", True, kings_moves() == next_to())
    report.check("capture encodings agree", True, can_capture() == can_capture_by_moves())
    report.lines += render(result, scene)
    return report


def subway_demo() -> DemoReport:
    report = DemoReport("subway")
    scene, lexicon = load_scene(SUBWAY_SCENE), load_lexicon(SUBWAY_LEXICON)
    step = scene.relation("next_stop")
    two = apply_state(power(step, 2), scene.space.state([("Kai Tak",)]))
    report.check("two stops after Kai Tak", [("Hin Keng",)], two.members())
    report.check("twelve stops further", True, power(step, 12).is_empty)
    report.check("Diamond Hill between Kai Tak and Hin Keng", True,
                 ("Kai Tak", "Diamond Hill", "Hin Keng") in scene.relation("in_between").members())
    result = parse_and_evaluate("station before my station", lexicon, scene)
    report.check("station before my station", [("Ma On Shan",)], result.members())
    report.lines += render(result, scene)
    return report


def penrose_demo() -> DemoReport:
    report = DemoReport("penrose")
    for n in (1, 2, 5):
        up = build_penrose(n).relation("move_up")
        report.check(f"move up {4 * n} times with {n} steps per flight", True, power(up, 4 * n) == identity(up.dom))
    scene = load_scene(PENROSE_SCENE)
    k = KnowledgeState.initial(scene, load_lexicon(names_lexicon(ABOVE_LEXICON, PENROSE_SCENE)))
    circuit = ["II is above I", "III is above II", "IV is above III", "I is above IV"]
    for sentence in circuit[:3]:
        k = update(k, sentence)
    report.check("three flights", "CONSISTENT", consistency(k))
    k = update(k, circuit[3])
    report.check("closing the circuit", "INCONSISTENT (empty joint)", consistency(k))
    report.lines.append(consistency(k))
    return report


def above_demo() -> DemoReport:
    report = DemoReport("above")
    scene = load_scene(ABOVE_SCENE)
    k = KnowledgeState.initial(scene, load_lexicon(names_lexicon(ABOVE_LEXICON, ABOVE_SCENE)))
    for sentence in ("the painting is above the chest", "the light is above the painting"):
        k = update(k, sentence)
    report.check("the light is above the chest", "ENTAILED", verdict(entails(k, "the light is above the chest")))
    report.check("the chest is above the light", "NOT-ENTAILED", verdict(entails(k, "the chest is above the light")))
    report.lines.append(f"{len(k.joint)} placements of painting, chest and light remain")
    return report


def paris_demo() -> DemoReport:
    report = DemoReport("paris")
    scene = load_scene(PARIS_SCENE)
    k = KnowledgeState.initial(scene, load_lexicon(names_lexicon(PARIS_LEXICON, PARIS_SCENE)))
    for sentence in ("Alice chases Bob", "Alice is in Paris"):
        k = update(k, sentence)
    report.check("Bob is in Paris", "ENTAILED", verdict(entails(k, "Bob is in Paris")))
    bob, paris = marginalize(k, ["Bob"]), scene.relation("Paris")
    report.check("Bob somewhere in Paris, never at the last instant", (True, False), (bob.issubset(paris), bob == paris))

    # if A is at the origin at 3 min then B was there at 0 min
    grid = scene.grid
    origin = {"x": [0], "y": [0], "z": [0]}
    prior = implication(scene.space.port, grid.noun({**origin, "t": [3]}), grid.noun({**origin, "t": [0]}))
    chases_3 = scene.relation("chases_3")
    fed = evaluate(feed_prior(prior, verb_wiring(BoxRef("chases_3", chases_3.dom, chases_3.cod), 2), 2),
                   scene.environment())
    report.check("prior with chases 3 min", True, fed == bend(chases_3, 0))
    report.check("chases 3 min within the prior", True, infers(bend(chases_3, 0), prior))
    report.lines += render(bob, scene, limit=10)
    return report


def savannah_demo() -> DemoReport:
    report = DemoReport("savannah")
    scene, lexicon = load_scene(SAVANNAH_SCENE), load_lexicon(SAVANNAH_LEXICON)
    hunt = scene.relation("can_capture")
    cheetah = scene.space.port.indices((0, 0, 0, 60, 120))
    for head_start, expected in ((333, True), (334, False)):
        prey = scene.space.port.indices((head_start, 0, 0, 1800, 100))
        report.check(f"cheetah catches an ostrich {head_start} m ahead", expected, bool(hunt.data[cheetah + prey]))
    result = parse_and_evaluate("ostrich that a cheetah next to grass can capture", lexicon, scene)
    report.check("ostrich that a cheetah next to grass can capture", [200], sorted(m[0] for m in result.members()))
    report.lines += render(result, scene)
    return report


def cheese_demo() -> DemoReport:
    report = DemoReport("cheese")
    scene = load_scene(CHEESE_SCENE)
    k = KnowledgeState.initial(scene, load_lexicon(names_lexicon(CHEESE_LEXICON, CHEESE_SCENE)))
    k = update(k, "the cheese inside the suitcase stinks")
    queries = ["the cheese is inside the suitcase", "the cheese stinks", "the suitcase stinks"]
    for query, expected, found in zip(queries, (True, True, False), derive_facts(k, queries)):
        report.check(query, verdict(expected), verdict(found))
    report.lines.append(f"{len(k.joint)} (cheese, suitcase) pairs remain")
    return report


DEMOS: dict[str, Callable[[], DemoReport]] = {
    "chess": chess_demo,
    "subway": subway_demo,
    "penrose": penrose_demo,
    "above": above_demo,
    "paris": paris_demo,
    "savannah": savannah_demo,
    "cheese": cheese_demo,
}


def run_demo(name: str) -> DemoReport:
    report = DEMOS[name]()
    logger.info("demo %s: %d/%d checks pass", name, sum(c.ok for c in report.checks), len(report.checks))
    return report
