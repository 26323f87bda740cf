from fractions import Fraction

from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings, strategies as st
import numpy as np

from grammar.serializers import load_lexicon
from relations.carriers import Carrier, PortType
from relations.core import Relation, bend, empty, unknown
from relations.exceptions import NoParse, SpaceTooLarge, TypeMismatch, UnknownInhabitant
from relations.strategies import relations_between, states
from spaces.grid import Axis, Feature, GridSpec, build_grid
from spaces.space import Scene, Space

from .knowledge import (
    KnowledgeState, consistent, constrain, derive_facts, entails, implication, infers, infers_diagrammatic,
    marginalize, sentence_state, update,
)

X = Carrier("X", range(3))
PORT = PortType((X,))

TOY_WORDS = [
    {"word": name, "type": "n", "wiring": "noun"} for name in ("A", "B", "C", "D")
] + [
    {"word": verb, "type": "-1n.s.n-1", "relation": verb, "wiring": "verb"} for verb in ("r1", "r2", "both")
] + [
    {"word": "is odd", "type": "-1n.s", "relation": "odd", "wiring": "verb"},
]

SENTENCES = ["A r1 B", "B r2 C", "C r1 A", "A r2 C", "B r1 B", "C is odd"]


def toy_scene(r1: Relation, r2: Relation) -> Scene:
    scene = Scene(Space([X], "toy"), "toy")
    scene.register("r1", r1)
    scene.register("r2", r2)
    scene.register("both", Relation(PORT, PORT, r1.data & r2.data))
    scene.register("odd", Relation.state(PORT, [(1,)]))
    for who in ("A", "B", "C"):
        scene.add_inhabitant(who)
    return scene


def toy_state(r1, r2) -> KnowledgeState:
    return KnowledgeState.initial(toy_scene(r1, r2), load_lexicon(TOY_WORDS))


endo = relations_between(PORT, PORT)


# -------------------------
# entailment
# -------------------------
class InfersTests(SimpleTestCase):
    @given(states(PortType((X, X))), states(PortType((X, X))))
    def test_infers_is_subset(self, q, r):
        self.assertEqual(infers(q, r), q.issubset(r))
        self.assertEqual(infers_diagrammatic(q, r), infers(q, r))

    @given(states(PortType((X, X))))
    def test_top_bottom_and_reflexive(self, q):
        self.assertTrue(infers(q, q))
        self.assertTrue(infers(q, unknown(q.cod)))
        self.assertTrue(infers(empty(PortType.unit(), q.cod), q))

    @given(states(PORT), states(PORT), states(PORT))
    def test_transitive(self, p, q, r):
        if infers(p, q) and infers(q, r):
            self.assertTrue(infers(p, r))

    def test_types_must_agree(self):
        with self.assertRaises(TypeMismatch):
            infers(unknown(PORT), unknown(PortType((X, X))))

    def test_implication(self):
        origin = Relation.state(PORT, [(0,)])
        prior = implication(PORT, origin, Relation.state(PORT, [(2,)]))
        self.assertEqual(len(prior), 9 - 2)
        self.assertNotIn((0, 1), prior.members())
        self.assertIn((1, 1), prior.members())
        with self.assertRaises(TypeMismatch):
            implication(PortType((X, X)), origin, origin)


# -------------------------
# updates
# -------------------------
class UpdateTests(SimpleTestCase):
    @settings(max_examples=100)
    @given(endo, endo)
    def test_matches_brute_force(self, r1, r2):
        k = update(toy_state(r1, r2), "A r1 B")
        expected = np.broadcast_to(r1.data[:, :, None], (3, 3, 3))
        self.assertTrue(np.array_equal(k.joint.data, expected))

    @given(endo, endo, st.sampled_from(SENTENCES))
    def test_monotone_and_idempotent(self, r1, r2, sentence):
        k = toy_state(r1, r2)
        once = update(k, sentence)
        self.assertTrue(once.joint.issubset(k.joint))
        self.assertEqual(update(once, sentence).joint, once.joint)
        self.assertTrue(entails(once, sentence))

    @given(endo, endo, st.sampled_from(SENTENCES), st.sampled_from(SENTENCES))
    def test_commutative(self, r1, r2, first, second):
        k = toy_state(r1, r2)
        self.assertEqual(update(update(k, first), second).joint, update(update(k, second), first).joint)

    @settings(max_examples=100)
    @given(endo, endo)
    def test_sequence_is_intersection(self, r1, r2):
        k = toy_state(r1, r2)
        self.assertEqual(update(update(k, "A r1 B"), "A r2 B").joint, update(k, "A both B").joint)

    @given(endo, endo)
    def test_unknown_changes_nothing(self, r1, r2):
        k = toy_state(r1, r2)
        self.assertEqual(constrain(k, unknown(PortType((X, X))), ["A", "C"]).joint, k.joint)

    @given(endo, endo)
    def test_repeated_participant(self, r1, r2):
        state, participants = sentence_state(toy_state(r1, r2), "B r1 B")
        self.assertEqual(participants, ("B",))
        self.assertEqual(state.members(), [(x,) for x in range(3) if r1.data[x, x]])

    def test_sentence_state_orders_participants(self):
        r1 = Relation.from_labels(PORT, PORT, [((0,), (1,))])
        state, participants = sentence_state(toy_state(r1, r1), "C r1 A")
        self.assertEqual(participants, ("C", "A"))
        self.assertEqual(state, bend(r1, 0))

    def test_errors(self):
        k = toy_state(Relation(PORT, PORT, np.ones((3, 3))), Relation(PORT, PORT, np.eye(3)))
        with self.assertRaises(UnknownInhabitant):
            update(k, "D r1 A")
        with self.assertRaises(NoParse):
            update(k, "A B")
        with self.assertRaises(UnknownInhabitant):
            marginalize(k, ["Zed"])

    @override_settings(RELSPACE_MAX_JOINT=10)
    def test_joint_bound(self):
        with self.assertRaises(SpaceTooLarge):
            toy_state(Relation(PORT, PORT, np.eye(3)), Relation(PORT, PORT, np.eye(3)))


class MarginalTests(SimpleTestCase):
    @settings(max_examples=100)
    @given(endo, endo, st.sampled_from(SENTENCES), st.sampled_from(SENTENCES))
    def test_projection(self, r1, r2, first, second):
        k = update(update(toy_state(r1, r2), first), second)
        self.assertEqual(marginalize(k, ["A", "B", "C"]), k.joint)
        self.assertEqual(marginalize(k, ["C", "A"]), k.joint.project([2, 0]))
        self.assertEqual(marginalize(k, ["b"]).members(), sorted({(m[1],) for m in k.joint.members()}))

    @settings(max_examples=100)
    @given(endo, endo)
    def test_marginal_commutes_with_untouched_updates(self, r1, r2):
        k = toy_state(r1, r2)
        self.assertEqual(marginalize(update(k, "B r2 C"), ["A"]), marginalize(k, ["A"]))

    @given(endo, endo)
    def test_fresh_state_is_consistent(self, r1, r2):
        self.assertTrue(consistent(toy_state(r1, r2)))


# -------------------------
# scenes
# -------------------------
ABOVE_WORDS = [
    {"word": "the", "type": "n.n-1", "wiring": "adjective"},
    {"word": "is above", "type": "-1n.s.n-1", "relation": "above", "wiring": "verb"},
]


def names(*who):
    return [{"word": w, "type": "n", "wiring": "noun"} for w in who]


class ScenarioTests(SimpleTestCase):
    def test_above_chain(self):
        scene = build_grid(GridSpec((Axis("x", 0, 1), Axis("z", 0, 2))), "room")
        who = ("painting", "chest", "light")
        for w in who:
            scene.add_inhabitant(w)
        k = KnowledgeState.initial(scene, load_lexicon(ABOVE_WORDS + names(*who)))
        k = update(update(k, "the painting is above the chest"), "the light is above the painting")
        self.assertTrue(entails(k, "the light is above the chest"))
        self.assertFalse(entails(k, "the chest is above the light"))
        self.assertTrue(consistent(k))

    def test_penrose_circuit(self):
        scene = build_grid(GridSpec(tuple(Axis(a, 0, 3) for a in "xyz")), "staircase")
        flights = ("I", "II", "III", "IV")
        for w in flights:
            scene.add_inhabitant(w)
        k = KnowledgeState.initial(scene, load_lexicon(ABOVE_WORDS + names(*flights)))
        for sentence in ("II is above I", "III is above II", "IV is above III"):
            k = update(k, sentence)
        self.assertTrue(consistent(k))
        # four flights stacked on one column of four levels
        self.assertEqual(len(k.joint), 16)
        self.assertFalse(consistent(update(k, "I is above IV")))

    def test_chase_into_paris(self):
        axes = tuple(Axis(a, 0, 4) for a in "xyz") + (Axis("t", 0, 5, Fraction(1), "min"),)
        scene = build_grid(GridSpec(axes), "paris", regions=[{"name": "Paris", "bounds": {"x": [0, 1], "y": [0, 1]}}])
        scene.add_inhabitant("Alice")
        scene.add_inhabitant("Bob")
        words = [
            {"word": "chases", "type": "-1n.s.n-1", "relation": "chases", "wiring": "verb"},
            {"word": "is in Paris", "type": "-1n.s", "relation": "Paris", "wiring": "verb"},
        ]
        k = KnowledgeState.initial(scene, load_lexicon(words + names("Alice", "Bob")))
        self.assertEqual(len(k.joint), 750 ** 2)
        k = update(update(k, "Alice chases Bob"), "Alice is in Paris")
        self.assertTrue(entails(k, "Bob is in Paris"))
        self.assertFalse(entails(k, "Alice chases Alice"))
        bob, paris = marginalize(k, ["Bob"]), scene.relation("Paris")
        self.assertTrue(bob.issubset(paris))
        self.assertNotEqual(bob, paris)
        self.assertEqual(sorted({m[3] for m in bob.members()}), [0, 1, 2, 3, 4])
        self.assertEqual(len(bob), 4 * 5 * 5)

    def test_cheese_facts(self):
        spec = GridSpec(
            (Axis("x", 0, 2),),
            (Feature("radius", (1, 2, 3), "m"), Feature("fragrance", ("pungent", "odourless"))),
        )
        scene = build_grid(spec, "luggage", relations=[{"name": "inside", "kind": "inside"}],
                           predicates=[{"name": "stinks", "feature": "fragrance", "values": ["pungent"]}])
        scene.add_inhabitant("cheese")
        scene.add_inhabitant("suitcase")
        words = ABOVE_WORDS[:1] + [
            {"word": "inside", "type": "-1n.n.n-1", "relation": "inside", "wiring": "preposition"},
            {"word": "is inside", "type": "-1n.s.n-1", "relation": "inside", "wiring": "verb"},
            {"word": "stinks", "type": "-1n.s", "relation": "stinks", "wiring": "verb"},
        ]
        k = KnowledgeState.initial(scene, load_lexicon(words + names("cheese", "suitcase")))
        k = update(k, "the cheese inside the suitcase stinks")
        self.assertTrue(consistent(k))
        self.assertEqual(
            derive_facts(k, ["the cheese is inside the suitcase", "the cheese stinks", "the suitcase stinks"]),
            [True, True, False],
        )
        self.assertEqual({m[2] for m in marginalize(k, ["cheese"]).members()}, {"pungent"})
