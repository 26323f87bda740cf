from fractions import Fraction
from itertools import product

from django.test import SimpleTestCase
from hypothesis import given, strategies as st
import numpy as np

from .carriers import Carrier, PortType, decode_label, encode_label
from .core import (
    Relation, and_, apply_state, bend, cap, compose, converse, copy, cup, delete, empty, identity,
    permute, power, spider, tensor, union, unknown,
)
from .exceptions import IndexOutOfRange, TypeMismatch
from .strategies import carrier_of, carriers, ports, relations, relations_between, states


# -------------------------
# brute-force oracles
# -------------------------
def all_tuples(port):
    return list(product(*[range(n) for n in port.shape]))


def brute_compose(r, s):
    return {(x, z) for (x, y) in r.pairs for (y2, z) in s.pairs if y == y2}


def brute_image(s, state):
    return {((), y) for (_, x) in state.pairs for (x2, y) in s.pairs if x == x2}


AB = Carrier("files", ["a", "b"])
ABC = Carrier("X", ["a", "b", "c"])


class CarrierTests(SimpleTestCase):
    def test_duplicate_labels_rejected(self):
        with self.assertRaises(ValueError):
            Carrier("X", ["a", "a"])

    def test_index_is_position(self):
        self.assertEqual(ABC.index("c"), 2)
        self.assertIn("b", ABC)
        self.assertNotIn("z", ABC)

    def test_port_labels_roundtrip_indices(self):
        port = PortType((AB, ABC))
        self.assertEqual(port.labels(port.indices(("b", "c"))), ("b", "c"))
        self.assertEqual(port.size, 6)
        self.assertEqual(PortType.unit().size, 1)

    def test_fraction_labels_survive_json(self):
        label = (Fraction(1, 3), "x", 2)
        self.assertEqual(decode_label(encode_label(label)), label)


class GeneratorTests(SimpleTestCase):
    def test_identity_is_diagonal(self):
        self.assertEqual(identity(AB).labelled_pairs(), [(("a",), ("a",)), (("b",), ("b",))])

    def test_identity_on_unit(self):
        ident = identity(PortType.unit())
        self.assertEqual(ident.pairs, {((), ())})
        self.assertTrue(ident.is_scalar)

    def test_cap_is_diagonal_state(self):
        c = cap(ABC)
        self.assertEqual(len(c), 3)
        self.assertTrue(all(x == y for _, (x, y) in c.pairs))
        self.assertEqual(c, spider(ABC, 0, 2))
        self.assertEqual(cup(ABC), spider(ABC, 2, 0))

    def test_cap_then_cup_is_true(self):
        self.assertEqual(compose(cap(ABC), cup(ABC)).pairs, {((), ())})

    def test_spider_one_one_is_identity(self):
        self.assertEqual(spider(ABC, 1, 1), identity(ABC))

    def test_spider_needs_a_leg(self):
        with self.assertRaises(ValueError):
            spider(ABC, 0, 0)

    def test_copy(self):
        self.assertEqual(copy(AB).labelled_pairs(), [(("a",), ("a", "a")), (("b",), ("b", "b"))])

    def test_delete_after_copy_is_identity(self):
        self.assertEqual(copy(ABC) >> tensor(delete(ABC), identity(ABC)), identity(ABC))

    def test_unknown_is_full(self):
        board = PortType((Carrier("files", "abcdefgh"), Carrier("ranks", range(1, 9))))
        self.assertEqual(len(unknown(board)), 64)

    def test_permute_swaps(self):
        swap = permute(PortType((AB, ABC)), [1, 0])
        self.assertEqual(swap.cod, PortType((ABC, AB)))
        self.assertIn(((0, 2), (2, 0)), swap)

    def test_permute_rejects_non_permutation(self):
        with self.assertRaises(IndexOutOfRange):
            permute(PortType((AB, AB)), [0, 0])

    def test_empty_carrier_degrades(self):
        nothing = Carrier("nothing", [])
        self.assertTrue(unknown(nothing).is_empty)
        self.assertTrue(compose(cap(nothing), cup(nothing)).is_empty)


class OperationTests(SimpleTestCase):
    def test_compose_type_mismatch(self):
        with self.assertRaises(TypeMismatch):
            compose(identity(AB), identity(ABC))

    def test_and_type_mismatch(self):
        with self.assertRaises(TypeMismatch):
            and_(unknown(AB), unknown(ABC))

    def test_power_needs_endo(self):
        with self.assertRaises(TypeMismatch):
            power(Relation.from_pairs(AB, ABC, []), 2)

    def test_bend_out_of_range(self):
        with self.assertRaises(IndexOutOfRange):
            bend(identity(AB), 3)

    def test_bend_state_into_box(self):
        next_to = Relation.state(PortType((ABC, ABC)), [("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")])
        box = bend(next_to, 1)
        self.assertEqual(box.dom, PortType((ABC,)))
        self.assertEqual(apply_state(box, Relation.state(ABC, [("b",)])).members(), [("a",), ("c",)])
        self.assertEqual(bend(box, 0), next_to)

    def test_project(self):
        r = Relation.state(PortType((AB, ABC)), [("a", "c"), ("b", "c")])
        self.assertEqual(r.project([1]).members(), [("c",)])
        self.assertEqual(r.project([1, 0]).members(), [("c", "a"), ("c", "b")])

    def test_relations_are_immutable(self):
        r = identity(AB)
        with self.assertRaises(AttributeError):
            r.dom = PortType.unit()
        with self.assertRaises(ValueError):
            r.data[0, 0] = False

    def test_from_predicate_matches_pairs(self):
        x = carrier_of(5)
        below = Relation.from_predicate(x, x, lambda i, j: i < j)
        self.assertEqual(below.pairs, {((i,), (j,)) for i in range(5) for j in range(5) if i < j})


# -------------------------
# property suites
# -------------------------
triples = st.tuples(ports(), ports(), ports())


class CompositionLaws(SimpleTestCase):
    @given(triples.flatmap(lambda t: st.tuples(relations_between(t[0], t[1]), relations_between(t[1], t[2]))))
    def test_compose_matches_witness_enumeration(self, rs):
        r, s = rs
        self.assertEqual(compose(r, s).pairs, brute_compose(r, s))

    @given(st.tuples(ports(), ports(), ports(), ports()).flatmap(lambda t: st.tuples(
        relations_between(t[0], t[1]), relations_between(t[1], t[2]), relations_between(t[2], t[3]))))
    def test_compose_is_associative(self, rst):
        r, s, t = rst
        self.assertEqual((r >> s) >> t, r >> (s >> t))

    @given(relations())
    def test_identity_is_two_sided_unit(self, r):
        self.assertEqual(identity(r.dom) >> r, r)
        self.assertEqual(r >> identity(r.cod), r)

    @given(relations(), relations())
    def test_tensor_cardinality(self, r, s):
        self.assertEqual(len(tensor(r, s)), len(r) * len(s))

    @given(relations(max_wires=1), relations(max_wires=1))
    def test_tensor_pairs_are_all_pairings(self, r, s):
        expected = {(a + c, b + d) for (a, b) in r.pairs for (c, d) in s.pairs}
        self.assertEqual(tensor(r, s).pairs, expected)

    @given(relations(max_wires=1), relations(max_wires=1), relations(max_wires=1))
    def test_tensor_is_associative(self, r, s, t):
        self.assertEqual((r @ s) @ t, r @ (s @ t))

    @given(relations())
    def test_tensor_unit(self, r):
        self.assertEqual(tensor(r, identity(PortType.unit())), r)
        self.assertEqual(tensor(identity(PortType.unit()), r), r)

    @given(st.tuples(ports(1), ports(1), ports(1), ports(1), ports(1), ports(1)).flatmap(
        lambda t: st.tuples(relations_between(t[0], t[1]), relations_between(t[1], t[2]),
                            relations_between(t[3], t[4]), relations_between(t[4], t[5]))))
    def test_interchange(self, rs):
        r, r2, s, s2 = rs
        self.assertEqual(tensor(r >> r2, s >> s2), tensor(r, s) >> tensor(r2, s2))

    @given(st.tuples(ports(), ports()).flatmap(
        lambda t: st.tuples(relations_between(*t), states(t[0]))))
    def test_apply_state_is_union_of_images(self, rs):
        s, state = rs
        self.assertEqual(apply_state(s, state).pairs, brute_image(s, state))

    @given(ports().flatmap(lambda p: relations_between(p, p)), st.integers(0, 4))
    def test_power(self, r, n):
        expected = identity(r.dom)
        for _ in range(n):
            expected = expected >> r
        self.assertEqual(power(r, n), expected)

    @given(relations())
    def test_converse_is_involutive(self, r):
        self.assertEqual(converse(converse(r)), r)
        self.assertEqual(converse(r).pairs, {(b, a) for a, b in r.pairs})


class CompactClosedLaws(SimpleTestCase):
    @given(carriers(min_size=0))
    def test_snake_equations(self, x):
        ident = identity(x)
        left = tensor(cap(x), ident) >> tensor(ident, cup(x))
        right = tensor(ident, cap(x)) >> tensor(cup(x), ident)
        self.assertEqual(left, ident)
        self.assertEqual(right, ident)

    @given(carriers(), st.integers(0, 3), st.integers(1, 3), st.integers(0, 3))
    def test_connected_spiders_fuse(self, x, m, k, n):
        if m + n == 0:
            return
        self.assertEqual(spider(x, m, k) >> spider(x, k, n), spider(x, m, n))

    @given(carriers())
    def test_copy_then_merge_is_one_spider(self, x):
        self.assertEqual(copy(x) >> spider(x, 2, 1), identity(x))

    @given(st.tuples(ports(1, min_wires=1), ports(1, min_wires=1)).flatmap(lambda t: relations_between(*t)))
    def test_bend_through_caps_and_cups(self, r):
        a, b = r.dom[0], r.cod[0]
        as_test = tensor(r, identity(b)) >> cup(b)
        as_state = cap(a) >> tensor(identity(a), r)
        self.assertEqual(bend(r, 2), as_test)
        self.assertEqual(bend(r, 0), as_state)

    @given(relations(), st.data())
    def test_bend_round_trips(self, r, data):
        k = data.draw(st.integers(0, r.arity))
        self.assertEqual(bend(bend(r, k), len(r.dom)), r)

    @given(ports(max_wires=2, min_wires=1).flatmap(states))
    def test_delete_tests_emptiness(self, q):
        deleted = q
        for x in q.cod:
            deleted = deleted >> tensor(delete(x), identity(deleted.cod[1:]))
        self.assertEqual(bool(deleted.data), not q.is_empty)


class AndLaws(SimpleTestCase):
    @given(ports(min_wires=1).flatmap(lambda p: st.tuples(states(p), states(p), states(p))))
    def test_and_is_intersection(self, qrs):
        q, r, s = qrs
        self.assertEqual((q & r).pairs, q.pairs & r.pairs)
        self.assertEqual(q & r, r & q)
        self.assertEqual((q & r) & s, q & (r & s))
        self.assertEqual(q & q, q)

    @given(ports(min_wires=1).flatmap(states))
    def test_unknown_is_unit_and_empty_absorbs(self, q):
        self.assertEqual(and_(unknown(q.cod), q), q)
        nothing = empty(PortType.unit(), q.cod)
        self.assertEqual(and_(nothing, q), nothing)

    @given(ports(min_wires=1).flatmap(lambda p: st.tuples(states(p), states(p))))
    def test_and_as_merging_spiders(self, qr):
        q, r = qr
        x = q.cod[0] if len(q.cod) == 1 else None
        if x is None:
            return
        merged = tensor(q, r) >> spider(x, 2, 1)
        self.assertEqual(merged, and_(q, r))

    @given(ports(min_wires=1).flatmap(lambda p: st.tuples(states(p), states(p))))
    def test_union_and_subset(self, qr):
        q, r = qr
        self.assertTrue(and_(q, r).issubset(q))
        self.assertTrue(q.issubset(union(q, r)))
        self.assertEqual(q.issubset(r), and_(q, r) == q)


class ProjectionTests(SimpleTestCase):
    @given(ports(max_wires=3, min_wires=1).flatmap(states), st.data())
    def test_project_is_tuple_projection(self, q, data):
        keep = data.draw(st.lists(st.integers(0, len(q.cod) - 1), unique=True))
        expected = {((), tuple(c[k] for k in keep)) for _, c in q.pairs}
        self.assertEqual(q.project(keep).pairs, expected)

    def test_every_tuple_accounted_for(self):
        port = PortType((AB, ABC))
        rng = np.random.default_rng(7)
        data = rng.random(port.shape) < 0.5
        q = Relation(PortType.unit(), port, data)
        self.assertEqual(len(q), sum(bool(data[t]) for t in all_tuples(port)))
