import json
import os
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from diagrams.diagram import BOX, CUP
from diagrams.serializers import diagram_from_json
from grammar.lexicon import parse_and_evaluate
from grammar.serializers import load_lexicon
from relations.carriers import Carrier, PortType
from relations.core import Relation
from spaces.chess import BOARD, build_chess
from spaces.grid import Axis, GridSpec, build_grid
from spaces.serializers import load_scene

from .cli import BAD_INPUT, BAD_SCENE, NOT_ENTAILED, UNKNOWN_WORD
from .demos import (
    ABOVE_LEXICON, CHESS_FEN, CHESS_LEXICON, CHESS_SCENE, PARIS_SCENE, SAVANNAH_LEXICON, SAVANNAH_SCENE, run_demo,
)
from .render import as_json, board, grid_slices, listing, render, station_line

GOLDEN = "pawn that a knight can capture next to a king"

SMALL_ROOM = {
    "name": "room",
    "space": {"kind": "grid", "axes": [{"name": "x", "hi": 1}, {"name": "z", "hi": 2}]},
    "inhabitants": [{"name": "painting"}, {"name": "chest"}, {"name": "light"}],
}

PEOPLE = [
    {"word": "Alice", "type": "n", "wiring": "noun"},
    {"word": "Bob", "type": "n", "wiring": "noun"},
    {"word": "chases", "type": "-1n.s.n-1", "relation": "chases", "wiring": "verb"},
]


class CommandTestCase(SimpleTestCase):
    """Writes inputs into a temporary directory and runs commands against them."""

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)

    def write(self, name, data) -> str:
        path = os.path.join(self._tmp.name, name)
        with open(path, "w", encoding="utf-8") as fh:
            if isinstance(data, str):
                fh.write(data)
            else:
                json.dump(data, fh)
        return path

    def run_command(self, *args, **options) -> str:
        out = StringIO()
        call_command(*args, stdout=out, **options)
        return out.getvalue()

    def assertExitCode(self, code, *args, **options):
        with self.assertRaises(CommandError) as ctx:
            self.run_command(*args, **options)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception


# -------------------------
# evaluate
# -------------------------
class EvaluateCommandTests(CommandTestCase):
    def setUp(self):
        super().setUp()
        self.scene = self.write("chess.json", CHESS_SCENE)
        self.lexicon = self.write("lexicon.json", CHESS_LEXICON)

    def test_golden_phrase_on_the_board(self):
        out = self.run_command("evaluate", scene=self.scene, lexicon=self.lexicon, phrase=GOLDEN)
        lines = out.splitlines()
        self.assertIn("g6", lines)
        self.assertIn("1 élément(s)", out)
        self.assertTrue(any(line.startswith("6 ") and "p*" in line for line in lines))

    def test_json_rendering(self):
        out = self.run_command("evaluate", scene=self.scene, lexicon=self.lexicon,
                               phrase="pawn next to a king", render="json", dump_diagram=True)
        payload = json.loads(out)
        self.assertEqual(payload["phrase"], "pawn next to a king")
        self.assertEqual(payload["state"]["wires"], ["file", "rank", "kind", "colour"])
        self.assertEqual(
            payload["state"]["members"],
            [["c", "3", "pawn", "white"], ["e", "6", "pawn", "black"], ["g", "6", "pawn", "black"]],
        )
        self.assertIn("diagram", payload)

    def test_unknown_word(self):
        self.assertExitCode(UNKNOWN_WORD, "evaluate", scene=self.scene, lexicon=self.lexicon, phrase="pawn dragon")

    def test_no_parse(self):
        self.assertExitCode(BAD_INPUT, "evaluate", scene=self.scene, lexicon=self.lexicon, phrase="pawn knight")

    def test_bad_lexicon(self):
        lexicon = self.write("bad.json", [{"word": "pawn", "type": "n.n", "wiring": "noun"}])
        self.assertExitCode(BAD_INPUT, "evaluate", scene=self.scene, lexicon=lexicon, phrase="pawn")

    def test_bad_scenes(self):
        for name, data in [("moon.json", {"space": {"kind": "moon"}}), ("broken.json", "{not json")]:
            scene = self.write(name, data)
            self.assertExitCode(BAD_SCENE, "evaluate", scene=scene, lexicon=self.lexicon, phrase="pawn")
        missing = os.path.join(self._tmp.name, "missing.json")
        self.assertExitCode(BAD_SCENE, "evaluate", scene=missing, lexicon=self.lexicon, phrase="pawn")

    def test_relation_missing_from_scene(self):
        lexicon = self.write("extra.json", CHESS_LEXICON + [
            {"word": "dragon", "type": "n", "relation": "dragon", "wiring": "noun"},
        ])
        self.assertExitCode(BAD_SCENE, "evaluate", scene=self.scene, lexicon=lexicon, phrase="dragon")


# -------------------------
# infer
# -------------------------
class InferCommandTests(CommandTestCase):
    def setUp(self):
        super().setUp()
        self.scene = self.write("room.json", SMALL_ROOM)
        self.lexicon = self.write("lexicon.json", ABOVE_LEXICON)
        self.premises = ["the painting is above the chest", "the light is above the painting"]

    def test_entailed(self):
        out = self.run_command("infer", scene=self.scene, lexicon=self.lexicon, premise=self.premises,
                               conclusion="the light is above the chest")
        self.assertIn("CONSISTENT", out)
        self.assertIn("ENTAILED", out)
        self.assertNotIn("NOT-ENTAILED", out)

    def test_not_entailed(self):
        exc = self.assertExitCode(NOT_ENTAILED, "infer", scene=self.scene, lexicon=self.lexicon,
                                  premise=self.premises, conclusion="the chest is above the light")
        self.assertIn("does not follow", str(exc))

    def test_contradiction_entails_anything(self):
        out = self.run_command("infer", scene=self.scene, lexicon=self.lexicon,
                               premise=["the painting is above the chest", "the chest is above the painting"],
                               conclusion="the light is above the chest")
        self.assertIn("INCONSISTENT", out)
        self.assertIn("ENTAILED", out)

    def test_name_outside_the_scene(self):
        lexicon = self.write("ghost.json", ABOVE_LEXICON + [{"word": "ghost", "type": "n", "wiring": "noun"}])
        self.assertExitCode(BAD_SCENE, "infer", scene=self.scene, lexicon=lexicon,
                            premise=["the ghost is above the chest"], conclusion="the chest is above the light")


# -------------------------
# demo and dump_diagram
# -------------------------
class DemoCommandTests(CommandTestCase):
    def test_scenarios_pass(self):
        for name in ("chess", "subway", "penrose", "above", "paris", "savannah", "cheese"):
            with self.subTest(name=name):
                out = self.run_command("demo", name)
                self.assertIn(f"== {name}", out)
                self.assertNotIn("BAD", out)

    def test_reports(self):
        report = run_demo("chess")
        self.assertTrue(report.ok)
        self.assertEqual(report.checks[-1].label, "capture encodings agree")
        self.assertTrue(any("g6" in line for line in report.lines))

    def test_savannah_hunt_phrase(self):
        scene, lexicon = load_scene(SAVANNAH_SCENE), load_lexicon(SAVANNAH_LEXICON)
        prey = parse_and_evaluate("ostrich that a cheetah next to grass can capture", lexicon, scene)
        self.assertEqual(prey.members(), [(200, 0, 0, 1800, 100)])

    def test_paris_marginal_is_drawn_as_slices(self):
        report = run_demo("paris")
        self.assertTrue(report.ok)
        self.assertIn("z = 4", report.lines)
        self.assertIn("  1 * * . . .", report.lines)
        self.assertIn("  4 . . . . .", report.lines)
        self.assertEqual(load_scene(PARIS_SCENE).space.size, 750)


class DumpDiagramCommandTests(CommandTestCase):
    def test_sentence_without_scene(self):
        lexicon = self.write("people.json", PEOPLE)
        payload = json.loads(self.run_command("dump_diagram", lexicon=lexicon, phrase="Alice chases Bob"))
        self.assertEqual(payload["phrase"], "Alice chases Bob")
        boxes = diagram_from_json(payload["diagram"])
        self.assertEqual(boxes.count(BOX), 3)
        self.assertEqual(boxes.count(CUP), 2)
        self.assertEqual(boxes.box_names(), {"Alice", "chases", "Bob"})
        self.assertEqual(set(payload), {"phrase", "diagram", "expanded", "rewritten"})

    def test_no_parse(self):
        lexicon = self.write("people.json", PEOPLE)
        self.assertExitCode(BAD_INPUT, "dump_diagram", lexicon=lexicon, phrase="Alice Bob")


# -------------------------
# rendering
# -------------------------
class RenderTests(SimpleTestCase):
    def test_board(self):
        scene = build_chess(fen=CHESS_FEN)
        rows = board(Relation.state(BOARD.port, [("g", "6")]), scene.pieces)
        self.assertEqual(len(rows), 9)
        self.assertEqual(rows[0], "8 . . . . r . . .")
        self.assertEqual(rows[2], "6 P . . . p . p*.")
        self.assertEqual(rows[-1], "  a b c d e f g h")

    def test_station_line(self):
        line = Carrier("station", ["A", "B", "C"])
        state = Relation.state(PortType((line,)), [("B",)])
        self.assertEqual(station_line(state, list(line)), ["A - [B] - C"])
        self.assertEqual(render(state), ["A - [B] - C"])

    def test_grid_slices(self):
        scene = build_grid(GridSpec((Axis("x", 0, 2), Axis("y", 0, 1), Axis("z", 0, 1))), "room")
        state = scene.space.state([(0, 0, 1), (2, 1, 1)])
        self.assertEqual(grid_slices(state), [
            "z = 1",
            "  1 . . *",
            "  0 * . .",
            "    x 0..2",
            "z = 0",
            "  1 . . .",
            "  0 . . .",
            "    x 0..2",
        ])
        rendered = render(state, scene)
        self.assertEqual(rendered[:8], grid_slices(state))
        self.assertEqual(rendered[8], "2 element(s) over x × y × z")

    def test_wide_grids_are_listed(self):
        scene = build_grid(GridSpec((Axis("x", 0, 100), Axis("y", 0, 0))), "strip")
        state = scene.space.state([(7, 0)])
        self.assertEqual(render(state, scene), listing(state))

    def test_listing_and_json(self):
        x = Carrier("x", range(5))
        state = Relation.state(PortType((x, x)), [(0, 1), (2, 3), (4, 4)])
        self.assertEqual(listing(state, limit=2), ["3 element(s) over x × x", "  (0, 1)", "  (2, 3)", "  ... 1 more"])
        self.assertEqual(as_json(state), {"wires": ["x", "x"], "members": [[0, 1], [2, 3], [4, 4]]})
