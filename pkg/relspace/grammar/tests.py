from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from diagrams.diagram import BOX, CUP
from relations.exceptions import ArityMismatch, BadTypeString, NoParse, UnknownWord
from spaces.chess import build_chess, squares

from .lexicon import PLACEHOLDER, Lexicon, LexiconEntry, factor_ports, parse_and_evaluate, phrase_diagram
from .parser import Parse, all_parses, grammar_diagram, reduce
from .serializers import dump_lexicon, load_lexicon
from .types import N, S, PregroupType, SimpleType, parse_factor, parse_type

FEN = "4r3/2n2k2/P3p1p1/5p2/1P1K3N/2PQ4/r4B2/8"

CHESS_WORDS = [
    {"word": "pawn", "type": "n", "relation": "pawn", "wiring": "noun"},
    {"word": "knight", "type": "n", "relation": "knight", "wiring": "noun"},
    {"word": "king", "type": "n", "relation": "king", "wiring": "noun"},
    {"word": "a", "type": "n.n-1", "wiring": "adjective"},
    {"word": "white", "type": "n.n-1", "relation": "white", "wiring": "adjective"},
    {"word": "next to", "type": "-1n.n.n-1", "relation": "next_to", "wiring": "preposition"},
    {"word": "can capture", "type": "-1n.s.n-1", "relation": "can_capture", "wiring": "verb"},
    {"word": "that", "type": "-1n.n.n-1-1.s-1", "wiring": "relpron"},
]

PEOPLE_WORDS = [
    {"word": "Alice", "type": "n", "wiring": "noun"},
    {"word": "Bob", "type": "n", "wiring": "noun"},
    {"word": "chases", "type": "-1n.s.n-1", "relation": "chases", "wiring": "verb"},
]

GOLDEN = "pawn that a knight can capture next to a king"


def types_of(lexicon, phrase):
    return [lexicon[t].type for t in lexicon.tokenize(phrase)]


# -------------------------
# types
# -------------------------
class TypeTests(SimpleTestCase):
    def test_parse_type(self):
        verb = parse_type("-1n.s.n-1")
        self.assertEqual(verb, PregroupType([SimpleType("n", -1), SimpleType("s"), SimpleType("n", 1)]))
        self.assertEqual(str(verb), "⁻¹n · s · n⁻¹")
        self.assertEqual(verb.code(), "-1n.s.n-1")
        self.assertEqual(parse_factor("n-1-1"), SimpleType("n", 2))
        self.assertEqual(parse_factor("-1-1s"), SimpleType("s", -2))

    def test_bad_type_strings(self):
        for text in ("", "-1n-1", "x", "n.", "n..s", "1n"):
            with self.assertRaises(BadTypeString, msg=text):
                parse_type(text)

    def test_cancellation(self):
        n, left, right = SimpleType("n"), SimpleType("n", -1), SimpleType("n", 1)
        self.assertTrue(n.cancels_with(left))
        self.assertTrue(right.cancels_with(n))
        self.assertFalse(left.cancels_with(n))
        self.assertFalse(n.cancels_with(SimpleType("s", -1)))
        self.assertTrue(SimpleType("n", 2).cancels_with(right))

    def test_reversed_wires(self):
        self.assertTrue(SimpleType("n", -1).reversed_wires)
        self.assertTrue(SimpleType("n", 1).reversed_wires)
        self.assertFalse(SimpleType("n", 2).reversed_wires)
        self.assertFalse(SimpleType("s").reversed_wires)

    def test_occurrences(self):
        self.assertEqual(parse_type("-1n.s.n-1").occurrences("n"), 2)
        self.assertEqual(parse_type("-1n.s.n-1").occurrences("n", 1), 1)

    @given(st.lists(st.tuples(st.sampled_from("ns"), st.integers(-3, 3)), min_size=1, max_size=5))
    def test_code_reads_back(self, factors):
        t = PregroupType(factors)
        self.assertEqual(parse_type(t.code()), t)


# -------------------------
# parser
# -------------------------
class ParserTests(SimpleTestCase):
    def setUp(self):
        self.lexicon = load_lexicon(CHESS_WORDS)

    def test_transitive_sentence(self):
        parse = reduce([N, parse_type("-1n.s.n-1"), N], S)
        self.assertEqual(parse.links, ((0, 1), (3, 4)))
        self.assertEqual(parse.residual, (2,))
        self.assertTrue(parse.is_valid())

    def test_golden_phrase_parses_once(self):
        parses = all_parses(types_of(self.lexicon, GOLDEN), N)
        self.assertEqual(len(parses), 1)
        parse = parses[0]
        self.assertEqual(set(parse.links), {(0, 1), (3, 10), (4, 9), (5, 8), (6, 7), (2, 11), (13, 14), (15, 16)})
        self.assertEqual(parse.residual, (12,))
        self.assertTrue(parse.is_valid())

    def test_relative_clause(self):
        parse = reduce(types_of(self.lexicon, "pawn that a knight can capture"), N)
        self.assertEqual(parse.residual, (2,))
        self.assertEqual(len(parse.links), 5)
        self.assertTrue(parse.is_planar())

    def test_no_parse(self):
        with self.assertRaises(NoParse):
            reduce(types_of(self.lexicon, "can capture pawn"), N)
        with self.assertRaises(NoParse):
            reduce(types_of(self.lexicon, "pawn king"), N)
        with self.assertRaises(NoParse):
            reduce([N], S)

    def test_no_links_inside_a_word(self):
        # n · n⁻¹ on its own would cancel, but not within the adjective
        self.assertEqual(all_parses([parse_type("n.n-1")], N), [])

    def test_crossing_parse_is_not_planar(self):
        types = (N, N, parse_type("-1n"), parse_type("-1n"))
        self.assertFalse(Parse(types, ((0, 2), (1, 3)), ()).is_planar())
        self.assertFalse(Parse(types, ((0, 3),), (1, 2)).is_valid())

    @settings(max_examples=200)
    @given(st.lists(st.sampled_from(["n", "n.n-1", "-1n.s.n-1", "-1n.n.n-1", "-1n.s"]), min_size=1, max_size=6),
           st.sampled_from([N, S]))
    def test_every_parse_is_valid(self, codes, target):
        for parse in all_parses([parse_type(c) for c in codes], target):
            self.assertTrue(parse.is_valid())
            self.assertEqual(parse.residual_type, target)

    def test_grammar_diagram_checks_widths(self):
        parse = reduce([N, parse_type("-1n.s")], S)
        diagram = grammar_diagram(parse, [PLACEHOLDER, PLACEHOLDER, PLACEHOLDER])
        self.assertEqual(diagram.count(CUP), 1)
        with self.assertRaises(ArityMismatch):
            grammar_diagram(parse, [PLACEHOLDER, PLACEHOLDER * 2, PLACEHOLDER])
        with self.assertRaises(ArityMismatch):
            grammar_diagram(parse, [PLACEHOLDER])


# -------------------------
# lexicon
# -------------------------
class LexiconTests(SimpleTestCase):
    def setUp(self):
        self.lexicon = load_lexicon(CHESS_WORDS)

    def test_tokenize_longest_match(self):
        self.assertEqual(
            self.lexicon.tokenize(GOLDEN),
            ["pawn", "that", "a", "knight", "can capture", "next to", "a", "king"],
        )
        self.assertEqual(self.lexicon.tokenize("Pawn  NEXT to a King"), ["pawn", "next to", "a", "king"])

    def test_unknown_word(self):
        with self.assertRaises(UnknownWord) as ctx:
            self.lexicon.tokenize("pawn next to a dragon")
        self.assertEqual(ctx.exception.word, "dragon")
        with self.assertRaises(UnknownWord):
            self.lexicon["castle"]

    def test_entries_fit_their_wiring(self):
        with self.assertRaises(BadTypeString):
            LexiconEntry("pawn", parse_type("-1n.s"), "noun", "pawn")
        with self.assertRaises(BadTypeString):
            LexiconEntry("sees", parse_type("-1n.s.n-1"), "verb")
        with self.assertRaises(BadTypeString):
            LexiconEntry("sees", parse_type("-1n.s.n-1"), "gerund", "sees")
        with self.assertRaises(ArityMismatch):
            LexiconEntry("that", parse_type("-1n.n.n-1-1.s-1"), "relpron", arity=3)

    def test_duplicates_rejected(self):
        with self.assertRaises(BadTypeString):
            load_lexicon(CHESS_WORDS + [{"word": "Pawn", "type": "n", "wiring": "noun"}])

    def test_participants(self):
        self.assertEqual(self.lexicon["can capture"].participants, 2)
        self.assertEqual(self.lexicon["that"].participants, 2)
        self.assertEqual(self.lexicon["pawn"].participants, 0)
        self.assertFalse(self.lexicon["pawn"].is_name)

    def test_factor_ports(self):
        port = build_chess().space.port
        verb = factor_ports(self.lexicon["can capture"], port)
        self.assertEqual([len(p) for p in verb], [4, 8, 4])
        self.assertEqual(verb[0], port.reversed())
        self.assertEqual(verb[1], port * 2)


class SerializerTests(SimpleTestCase):
    def test_dump_reads_back(self):
        lexicon = load_lexicon(CHESS_WORDS)
        again = load_lexicon(dump_lexicon(lexicon))
        self.assertEqual(list(again), list(lexicon))

    def test_invalid_lexicons(self):
        for data in (
            {"word": "pawn"},
            [{"word": "  ", "type": "n", "wiring": "noun"}],
            [{"word": "pawn", "type": "n.q", "wiring": "noun"}],
            [{"word": "pawn", "type": "n", "wiring": "pronoun"}],
            [{"word": "pawn", "type": "n.n-1", "wiring": "noun"}],
        ):
            with self.assertRaises(BadTypeString, msg=data):
                load_lexicon(data)


# -------------------------
# phrases
# -------------------------
class PhraseDiagramTests(SimpleTestCase):
    def setUp(self):
        self.lexicon = load_lexicon(PEOPLE_WORDS)

    def test_word_boxes_and_cups(self):
        phrase = phrase_diagram(["Alice", "chases", "Bob"], self.lexicon, expand=False, target=S)
        self.assertEqual(phrase.diagram.count(BOX), 3)
        self.assertEqual(phrase.diagram.count(CUP), 2)
        self.assertEqual(phrase.diagram.box_names(), {"Alice", "chases", "Bob"})

    def test_taps_become_inputs(self):
        phrase = phrase_diagram(["Alice", "chases", "Bob"], self.lexicon, taps=["alice", "BOB"], target=S)
        self.assertEqual(phrase.participants, ("Alice", "Bob"))
        self.assertEqual(phrase.diagram.dom, PLACEHOLDER * 2)
        self.assertEqual(phrase.diagram.cod, PLACEHOLDER * 2)

    def test_sentence_is_not_a_noun_phrase(self):
        with self.assertRaises(NoParse):
            phrase_diagram(["Alice", "chases", "Bob"], self.lexicon, target=N)


class ChessPhraseTests(SimpleTestCase):
    def setUp(self):
        self.lexicon = load_lexicon(CHESS_WORDS)
        self.scene = build_chess(fen=FEN)

    def evaluate(self, phrase):
        return squares(parse_and_evaluate(phrase, self.lexicon, self.scene))

    def test_nouns(self):
        self.assertEqual(self.evaluate("pawn"), ["a6", "b4", "c3", "e6", "f5", "g6"])
        self.assertEqual(self.evaluate("a king"), ["d4", "f7"])

    def test_adjective(self):
        self.assertEqual(self.evaluate("white pawn"), ["a6", "b4", "c3"])

    def test_preposition(self):
        self.assertEqual(self.evaluate("pawn next to a king"), ["c3", "e6", "g6"])

    def test_relative_clause(self):
        self.assertEqual(self.evaluate("pawn that a knight can capture"), ["a6", "f5", "g6"])

    def test_full_phrase(self):
        self.assertEqual(self.evaluate(GOLDEN), ["g6"])

    def test_empty_board(self):
        self.assertEqual(squares(parse_and_evaluate(GOLDEN, self.lexicon, build_chess())), [])
