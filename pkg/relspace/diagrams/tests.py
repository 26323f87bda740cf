from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
import numpy as np

from relations import core
from relations.carriers import Carrier, PortType
from relations.core import Relation, and_, bend, identity, unknown
from relations.exceptions import (
    ArityMismatch, LayoutMismatch, MalformedDiagram, TypeMismatch, UnboundBox,
)
from relations.strategies import carrier_of, carriers, relations_between, states

from .diagram import SPIDER, Diagram, DiagramBuilder, Node
from .evaluate import Environment, evaluate, layers
from .rewrite import fuse_spiders, normalize, yank
from .serializers import diagram_from_json, diagram_to_json
from .wirings import (
    BoxRef, Layout, adjective_wiring, and_diagram, extend, feed_prior, filter_box, is_partial_identity,
    lift, lift_diagram, noun_wiring, preposition_wiring, relpron_wiring, verb_wiring,
)

X = Carrier("X", ["a", "b", "c"])
SMALL = PortType((carrier_of(2, "P"), carrier_of(2, "Q")))


@st.composite
def layered(draw, kinds=("spider", "box", "cap", "cup"), max_layers=6, max_width=4):
    """A diagram built as id ⊗ generator ⊗ id strata, with its direct relational value."""
    x = draw(carriers(max_size=3))
    width = draw(st.integers(0, 3))
    diagram = Diagram.id(PortType((x,) * width))
    oracle = identity(diagram.dom)
    for _ in range(draw(st.integers(1, max_layers))):
        w = len(diagram.cod)
        kind = draw(st.sampled_from(kinds))
        if kind == "cup" and w < 2:
            kind = "box"
        if kind == "cap" and w + 2 > max_width:
            kind = "box"
        if kind == "cap":
            k, n = 0, 2
        elif kind == "cup":
            k, n = 2, 0
        else:
            k = draw(st.integers(0, min(2, w)))
            n = draw(st.integers(0, min(2, max_width - w + k)))
            if kind == "spider" and k + n == 0:
                kind = "box"
        pos = draw(st.integers(0, w - k))
        if kind == "box":
            rel = draw(relations_between(PortType((x,) * k), PortType((x,) * n)))
            gen = Diagram.literal(rel)
        elif kind == "spider":
            rel, gen = core.spider(x, k, n), Diagram.spider(x, k, n)
        elif kind == "cap":
            rel, gen = core.cap(x), Diagram.cap(x)
        else:
            rel, gen = core.cup(x), Diagram.cup(x)
        left, right = PortType((x,) * pos), PortType((x,) * (w - k - pos))
        diagram = diagram >> (Diagram.id(left) @ gen @ Diagram.id(right))
        oracle = oracle >> core.tensor(core.tensor(identity(left), rel), identity(right))
    return diagram, oracle


def snake(x):
    return (Diagram.cap(x) @ Diagram.id(x)) >> (Diagram.id(x) @ Diagram.cup(x))


class DiagramStructureTests(SimpleTestCase):
    def test_then_checks_types(self):
        with self.assertRaises(TypeMismatch):
            Diagram.id(X) >> Diagram.id(SMALL)

    def test_dangling_output_is_malformed(self):
        node = Node(SPIDER, PortType((X,)), PortType((X, X)))
        with self.assertRaises(MalformedDiagram):
            Diagram(PortType((X,)), PortType((X,)), [node], [((None, 0), (0, 0)), ((0, 0), (None, 0))])

    def test_spider_legs_share_a_carrier(self):
        with self.assertRaises(MalformedDiagram):
            Node(SPIDER, PortType((X,)), PortType((SMALL[0],)))

    def test_builder_matches_composition(self):
        b = DiagramBuilder(PortType((X,)))
        (a, c) = b.spider(X, b.inputs, 2)
        built = b.build([c, a])
        composed = Diagram.spider(X, 1, 2) >> Diagram.swap(X, X)
        self.assertEqual(evaluate(built), evaluate(composed))

    def test_unbound_box(self):
        with self.assertRaises(UnboundBox):
            evaluate(Diagram.box("chases", X, X))

    def test_bound_box_must_match(self):
        with self.assertRaises(TypeMismatch):
            evaluate(Diagram.box("chases", X, X), {"chases": unknown(X)})

    def test_environment_fallback(self):
        env = Environment(fallback=lambda name: identity(X))
        self.assertEqual(evaluate(Diagram.box("anything", X, X), env), identity(X))


class EvaluationTests(SimpleTestCase):
    def test_snake_is_identity(self):
        self.assertEqual(evaluate(snake(X)), identity(X))
        self.assertEqual(evaluate(snake(X), strategy="layers"), identity(X))

    def test_empty_diagram_is_true(self):
        self.assertEqual(evaluate(Diagram.id(PortType.unit())).pairs, {((), ())})

    def test_repeated_boundary_wire(self):
        # a wire that runs straight through shows up on both sides
        self.assertEqual(evaluate(Diagram.id(PortType((X, X)))), identity(PortType((X, X))))

    @given(states(PortType((X, SMALL[0]))))
    def test_copied_wire_lands_on_the_diagonal(self, state):
        b = DiagramBuilder()
        first, second = b.literal(state)
        copies = b.spider(X, [first], 3)
        diagram = b.build([copies[0], second, copies[1], copies[2]])
        expected = sorted((a, p, a, a) for a, p in state.members())
        self.assertEqual(evaluate(diagram).members(), expected)
        self.assertEqual(evaluate(diagram, strategy="layers"), evaluate(diagram))

    def test_unknown_as_spider(self):
        self.assertEqual(evaluate(Diagram.spider(X, 0, 1)), unknown(X))

    @settings(max_examples=100)
    @given(layered())
    def test_contraction_matches_strata(self, case):
        diagram, oracle = case
        self.assertEqual(evaluate(diagram), oracle)
        self.assertEqual(evaluate(diagram, strategy="layers"), oracle)

    @settings(max_examples=100)
    @given(layered(), st.data())
    def test_any_topological_order(self, case, data):
        diagram, oracle = case
        remaining = set(range(len(diagram.nodes)))
        preds = {k: set() for k in remaining}
        for s, t in diagram.edges:
            if s.node is not None and t.node is not None:
                preds[t.node].add(s.node)
        order = []
        while remaining:
            ready = sorted(k for k in remaining if not preds[k] - set(order))
            k = data.draw(st.sampled_from(ready))
            order.append(k)
            remaining.discard(k)
        self.assertEqual(layers(diagram, Environment(), order), oracle)

    @given(states(PortType((X, SMALL[0], X))), st.integers(0, 2))
    def test_delete_is_projection(self, state, wire):
        b = DiagramBuilder()
        outs = b.literal(state)
        b.spider(state.cod[wire], [outs[wire]], 0)
        kept = [i for i in range(3) if i != wire]
        self.assertEqual(evaluate(b.build([outs[i] for i in kept])), state.project(kept))


class RewriteTests(SimpleTestCase):
    def test_copy_then_merge_fuses(self):
        d = Diagram.spider(X, 1, 3) >> (Diagram.spider(X, 2, 1) @ Diagram.id(X))
        fused = fuse_spiders(d)
        self.assertEqual(len(fused), 1)
        self.assertEqual(fused.nodes[0].kind, SPIDER)
        self.assertEqual(evaluate(fused), evaluate(d))

    def test_plain_spider_disappears(self):
        self.assertEqual(len(fuse_spiders(Diagram.spider(X, 1, 1))), 0)

    def test_closed_loop_becomes_scalar(self):
        loop = Diagram.spider(X, 0, 2) >> Diagram.spider(X, 2, 0)
        fused = fuse_spiders(loop)
        self.assertEqual(len(fused), 1)
        self.assertEqual(evaluate(fused), evaluate(loop))

    def test_no_spiders_unchanged(self):
        d = Diagram.literal(identity(X)) >> Diagram.literal(identity(X))
        self.assertEqual(len(fuse_spiders(d)), 2)

    def test_yank_straightens(self):
        straight = yank(snake(X))
        self.assertEqual(len(straight), 0)
        self.assertEqual(evaluate(straight), identity(X))

    def test_yank_leaves_plain_diagrams(self):
        d = Diagram.cap(X) >> Diagram.literal(core.cup(X))
        self.assertEqual(len(yank(d)), 2)

    @settings(max_examples=100)
    @given(layered(kinds=("spider", "box")))
    def test_fusion_preserves_evaluation(self, case):
        diagram, oracle = case
        fused = fuse_spiders(diagram)
        self.assertLessEqual(len(fused), len(diagram))
        self.assertEqual(evaluate(fused), oracle)

    @settings(max_examples=100)
    @given(layered(kinds=("cap", "cup", "box")))
    def test_yank_preserves_evaluation(self, case):
        diagram, oracle = case
        self.assertEqual(evaluate(yank(diagram)), oracle)
        self.assertEqual(evaluate(normalize(diagram)), oracle)


class SerializationTests(SimpleTestCase):
    @settings(max_examples=100)
    @given(layered())
    def test_json_round_trip(self, case):
        diagram, oracle = case
        loaded = diagram_from_json(diagram_to_json(diagram))
        self.assertEqual(len(loaded), len(diagram))
        self.assertEqual(evaluate(loaded), oracle)

    def test_bad_json(self):
        with self.assertRaises(MalformedDiagram):
            diagram_from_json({"carriers": {}, "nodes": [], "edges": [], "boundary": [{"side": "dom", "carrier": "X"}]})

    def test_boxes_keep_their_names(self):
        data = diagram_to_json(Diagram.box("chases", X, X))
        self.assertEqual(data["nodes"][0]["name"], "chases")
        self.assertEqual(diagram_from_json(data).box_names(), {"chases"})


def _feed_noun(prior: Relation, adjective: Diagram) -> Diagram:
    """A noun state cupped into the n⁻¹ side of an adjective."""
    m = len(prior.cod)
    b = DiagramBuilder()
    p = b.literal(prior)
    w = b.embed(adjective)
    for f in range(m):
        b.cup(prior.cod[f], [w[2 * m - 1 - f], p[f]])
    return b.build(w[:m])


pairs_of_small = st.tuples(relations_between(SMALL, SMALL), states(SMALL + SMALL))


class WiringTests(SimpleTestCase):
    @given(pairs_of_small)
    def test_transitive_verb_intersects_prior(self, case):
        v, prior = case
        self.assertEqual(evaluate(feed_prior(prior, verb_wiring(v, 2), 2)), and_(prior, bend(v, 0)))

    def test_transitive_verb_on_unknowns_is_the_verb(self):
        v = Relation.from_predicate(X, X, lambda i, j: i < j)
        fed = feed_prior(unknown(PortType((X, X))), verb_wiring(v, 2), 2)
        self.assertEqual(evaluate(fed), bend(v, 0))

    @given(st.tuples(states(SMALL), states(SMALL)))
    def test_intransitive_verb(self, case):
        a, prior = case
        self.assertEqual(evaluate(feed_prior(prior, verb_wiring(a, 1), 1)), and_(prior, a))
        self.assertEqual(evaluate(feed_prior(prior, verb_wiring(filter_box(a), 1), 1)), and_(prior, a))

    @given(st.tuples(states(SMALL), states(SMALL)))
    def test_adjective_intersects(self, case):
        a, prior = case
        self.assertEqual(evaluate(_feed_noun(prior, adjective_wiring(a))), and_(prior, a))
        self.assertEqual(evaluate(_feed_noun(prior, adjective_wiring(filter_box(a)))), and_(prior, a))
        self.assertEqual(evaluate(_feed_noun(prior, adjective_wiring(None, SMALL))), prior)

    def test_adjective_on_unknown(self):
        a = Relation.state(X, [("b",)])
        self.assertEqual(evaluate(_feed_noun(unknown(X), adjective_wiring(a))), a)

    def test_verb_arity(self):
        with self.assertRaises(ArityMismatch):
            verb_wiring(unknown(X), 2)
        with self.assertRaises(ArityMismatch):
            verb_wiring(identity(X), 3)
        with self.assertRaises(ArityMismatch):
            preposition_wiring(unknown(X))

    @given(st.tuples(states(SMALL), relations_between(SMALL, PortType.unit())))
    def test_relative_clause_restricts_head(self, case):
        head, clause = case
        result = evaluate(relpron_wiring(head, Diagram.literal(clause)))
        self.assertTrue(result.issubset(head))
        accepted = Relation(PortType.unit(), SMALL, clause.data)
        self.assertEqual(result, and_(head, accepted))

    def test_relative_clause_on_unknown_head(self):
        clause = Relation.from_labels(PortType((X,)), PortType.unit(), [(("a",), ()), (("c",), ())])
        result = evaluate(relpron_wiring(unknown(X), Diagram.literal(clause)))
        self.assertEqual(result.members(), [("a",), ("c",)])

    def test_relative_clause_gap_must_match(self):
        with self.assertRaises(ArityMismatch):
            relpron_wiring(unknown(X), Diagram.id(SMALL))

    def test_word_boxes_resolve_through_environment(self):
        pawn = Relation.state(X, [("a",), ("b",)])
        word = noun_wiring(BoxRef("pawn", PortType.unit(), PortType((X,))))
        self.assertEqual(evaluate(word, {"pawn": pawn}), pawn)


class LiftTests(SimpleTestCase):
    fragrance = Carrier("fragrance", ["pungent", "odourless"])

    def test_lift_over_nothing(self):
        r = Relation.from_predicate(X, X, lambda i, j: i <= j)
        self.assertEqual(lift(r, Layout.endo(PortType((X,)), [0])), r)

    def test_lift_passes_the_other_wire(self):
        r = Relation.from_predicate(X, X, lambda i, j: i < j)
        lifted = lift(r, Layout.endo(PortType((X, self.fragrance)), [0]))
        for (a, f), (b, g) in lifted.pairs:
            self.assertEqual(f, g)
            self.assertLess(a, b)
        self.assertEqual(len(lifted), len(r) * 2)

    @given(relations_between(SMALL[:1], SMALL[:1]), st.booleans())
    def test_lift_is_tensor_then_permute(self, r, first):
        big = PortType((SMALL[0], self.fragrance))
        positions = [0] if first else [1]
        port = PortType((self.fragrance, SMALL[0])) if not first else big
        lifted = lift(r, Layout.endo(port, positions))
        expected = core.tensor(r, identity(self.fragrance))
        if not first:
            swap = core.permute(big, [1, 0])
            expected = core.converse(swap) >> expected >> swap
        self.assertEqual(lifted, expected)

    def test_extend_leaves_other_wires_free(self):
        r = Relation.from_predicate(X, X, lambda i, j: i == j)
        extended = extend(r, Layout.endo(PortType((X, self.fragrance)), [0]))
        self.assertEqual(len(extended), 3 * 2 * 2)

    def test_lift_needs_matching_pass_through(self):
        r = Relation.from_pairs(PortType((X,)), PortType((X,)), [])
        layout = Layout(PortType((X, self.fragrance)), PortType((X, X)), (0,), (0,))
        with self.assertRaises(LayoutMismatch):
            lift_diagram(r, layout)
        with self.assertRaises(LayoutMismatch):
            lift(r, Layout.endo(PortType((self.fragrance,)), [0]))

    def test_filter_box_is_partial_identity(self):
        q = Relation.state(X, [("a",), ("c",)])
        box = filter_box(q)
        self.assertTrue(is_partial_identity(box))
        self.assertEqual(core.apply_state(box, unknown(X)), q)

    @given(states(SMALL), states(SMALL))
    def test_and_diagram_is_and(self, q, r):
        self.assertEqual(evaluate(and_diagram(q, r)), and_(q, r))
        self.assertTrue(np.array_equal(evaluate(and_diagram(q, r)).data, q.data & r.data))
