from fractions import Fraction
from itertools import product

from django.test import SimpleTestCase, override_settings

from diagrams.wirings import is_partial_identity
from relations.core import apply_state, compose, converse, identity, power
from relations.exceptions import NotRepresentable, SceneError, SpaceTooLarge, UnknownInhabitant, UnknownRelation

from .chess import (
    BOARD, KINDS, PIECES, Piece, build_chess, can_capture, can_capture_by_moves, kings_moves, knights_moves,
    move_right, next_to, pieces_from_fen, squares,
)
from .grid import Axis, Feature, Grid, GridSpec, build_grid, quantity
from .penrose import build_penrose, staircase
from .serializers import load_scene
from .space import Scene, Space, augment
from .subway import TUEN_MA, build_subway

FEN = "4r3/2n2k2/P3p1p1/5p2/1P1K3N/2PQ4/r4B2/8"


def holds(r, a, b):
    """Membership by labels: (a, b) ∈ r."""
    return bool(r.data[r.dom.indices(a) + r.cod.indices(b)])


def square(name):
    return (name[0], name[1])


# -------------------------
# chess
# -------------------------
class ChessboardTests(SimpleTestCase):
    def test_board_sizes(self):
        self.assertEqual(BOARD.size, 64)
        self.assertEqual(augment(BOARD, KINDS).size, 64 * 6)
        self.assertEqual(PIECES.size, 64 * 6 * 2)

    def test_next_to_matches_predicate_sweep(self):
        expected = {
            ((f, r), (f2, r2))
            for f, r, f2, r2 in product("abcdefgh", "12345678", repeat=2)
            if max(abs(ord(f) - ord(f2)), abs(int(r) - int(r2))) == 1
        }
        self.assertEqual(set(next_to().labelled_pairs()), expected)

    def test_kings_moves_is_next_to(self):
        self.assertEqual(kings_moves(), next_to())

    def test_next_to_symmetric_and_irreflexive(self):
        rel = next_to()
        self.assertEqual(converse(rel), rel)
        self.assertFalse((rel.data & identity(BOARD.port).data).any())

    def test_neighbour_counts(self):
        rel = next_to()
        for name, count in (("a1", 3), ("h8", 3), ("a4", 5), ("e1", 5), ("d4", 8), ("g7", 8)):
            image = apply_state(rel, BOARD.state([square(name)]))
            self.assertEqual(len(image), count, name)

    def test_king_moves_from_c3(self):
        image = apply_state(kings_moves(), BOARD.state([square("c3")]))
        self.assertEqual(squares(image), ["b2", "b3", "b4", "c2", "c4", "d2", "d3", "d4"])

    def test_knight_moves_from_corner(self):
        image = apply_state(knights_moves(), BOARD.state([square("a1")]))
        self.assertEqual(squares(image), ["b3", "c2"])

    def test_move_right_stops_at_the_h_file(self):
        self.assertTrue(holds(move_right(), square("a1"), square("b1")))
        self.assertTrue(apply_state(move_right(), BOARD.state([square("h5")])).is_empty)


class CaptureTests(SimpleTestCase):
    def test_encodings_agree(self):
        self.assertEqual(can_capture(), can_capture_by_moves())

    def test_pawns_capture_diagonally_forward(self):
        rel = can_capture()
        white_pawn = ("d", "4", "pawn", "white")
        black_pawn = ("d", "4", "pawn", "black")
        self.assertTrue(holds(rel, white_pawn, ("e", "5", "rook", "black")))
        self.assertFalse(holds(rel, white_pawn, ("e", "3", "rook", "black")))
        self.assertTrue(holds(rel, black_pawn, ("c", "3", "queen", "white")))
        self.assertFalse(holds(rel, white_pawn, ("d", "5", "rook", "black")))

    def test_same_colour_is_never_captured(self):
        rel = can_capture()
        self.assertFalse(holds(rel, ("a", "1", "rook", "white"), ("a", "8", "rook", "white")))
        self.assertTrue(holds(rel, ("a", "1", "rook", "white"), ("a", "8", "rook", "black")))

    def test_lines_are_not_blocked(self):
        self.assertTrue(holds(can_capture(), ("a", "1", "bishop", "black"), ("h", "8", "king", "white")))


class ChessSceneTests(SimpleTestCase):
    def setUp(self):
        self.scene = build_chess(fen=FEN)

    def test_pieces_from_fen(self):
        pieces = pieces_from_fen(FEN)
        self.assertIn(Piece("h4", "knight", "white"), pieces)
        self.assertIn(Piece("c7", "knight", "black"), pieces)
        self.assertEqual(len(pieces), 14)

    def test_noun_states(self):
        self.assertEqual(squares(self.scene.relation("pawn")), ["a6", "b4", "c3", "e6", "f5", "g6"])
        self.assertEqual(squares(self.scene.relation("king")), ["d4", "f7"])

    def test_next_to_a_king(self):
        near = apply_state(self.scene.relation("next_to"), self.scene.relation("king"))
        self.assertEqual(squares(near), ["c3", "c4", "c5", "d3", "d5", "e3", "e4", "e5", "e6", "e7",
                                         "e8", "f6", "f8", "g6", "g7", "g8"])
        self.assertEqual(squares(near & self.scene.relation("pawn")), ["c3", "e6", "g6"])

    def test_pawns_a_knight_can_capture(self):
        captured = apply_state(self.scene.relation("can_capture"), self.scene.relation("knight"))
        self.assertEqual(squares(captured & self.scene.relation("pawn")), ["a6", "f5", "g6"])

    def test_colour_adjectives(self):
        white_pawns = self.scene.relation("pawn") & self.scene.relation("white")
        self.assertEqual(squares(white_pawns), ["a6", "b4", "c3"])

    def test_empty_board(self):
        scene = build_chess()
        for kind in KINDS:
            self.assertTrue(scene.relation(kind).is_empty)

    def test_bad_scenes(self):
        with self.assertRaises(SceneError):
            build_chess([Piece("a1", "pawn", "white"), Piece("a1", "rook", "black")])
        with self.assertRaises(SceneError):
            build_chess([Piece("i9", "pawn", "white")])
        with self.assertRaises(SceneError):
            build_chess([Piece("a1", "dragon", "white")])
        with self.assertRaises(SceneError):
            build_chess(fen="not/a/fen")

    def test_unknown_relation(self):
        with self.assertRaises(UnknownRelation):
            self.scene.relation("castles_with")


# -------------------------
# subway and staircase
# -------------------------
class SubwayTests(SimpleTestCase):
    def setUp(self):
        self.scene = build_subway()

    def test_next_stop(self):
        step = self.scene.relation("next_stop")
        self.assertTrue(holds(step, ("Kai Tak",), ("Diamond Hill",)))
        self.assertFalse(holds(step, ("Diamond Hill",), ("Kai Tak",)))
        self.assertTrue(holds(power(step, 2), ("Kai Tak",), ("Hin Keng",)))

    def test_no_twelve_stops_further(self):
        self.assertEqual(len(TUEN_MA), 12)
        self.assertTrue(power(self.scene.relation("next_stop"), 12).is_empty)
        self.assertFalse(power(self.scene.relation("next_stop"), 11).is_empty)

    def test_in_between(self):
        between = self.scene.relation("in_between")
        self.assertIn(("Kai Tak", "Diamond Hill", "Hin Keng"), between.members())
        self.assertIn(("Hin Keng", "Diamond Hill", "Kai Tak"), between.members())
        self.assertNotIn(("Kai Tak", "Hin Keng", "Diamond Hill"), between.members())

    def test_my_station(self):
        self.assertEqual(self.scene.relation("my_station").members(), [("Wu Kai Sha",)])

    def test_bad_lines(self):
        with self.assertRaises(SceneError):
            build_subway(["Kai Tak"])
        with self.assertRaises(SceneError):
            build_subway(["Kai Tak", "Tai Wai", "Kai Tak"])


class PenroseTests(SimpleTestCase):
    def test_climbing_forever(self):
        for n in (1, 2, 5):
            up = build_penrose(n).relation("move_up")
            self.assertEqual(power(up, 4 * n), identity(up.dom), n)
            for k in range(1, 4 * n):
                self.assertNotEqual(power(up, k), identity(up.dom), (n, k))

    def test_flights_join(self):
        up = build_penrose(3).relation("move_up")
        self.assertTrue(holds(up, ("I", 3), ("II", 1)))
        self.assertTrue(holds(up, ("IV", 3), ("I", 1)))
        self.assertTrue(holds(up, ("II", 1), ("II", 2)))

    def test_move_down(self):
        scene = build_penrose(2)
        up, down = scene.relation("move_up"), scene.relation("move_down")
        self.assertEqual(down, converse(up))
        self.assertEqual(compose(up, down), identity(up.dom))

    def test_no_steps(self):
        with self.assertRaises(SceneError):
            staircase(0)


# -------------------------
# grids
# -------------------------
def cube(n, *features):
    return GridSpec(tuple(Axis(a, 0, n - 1) for a in "xyz"), features)


class UnitTests(SimpleTestCase):
    def test_quantities_normalize(self):
        self.assertEqual(quantity("1/3 km"), (Fraction(1000, 3), "length"))
        self.assertEqual(quantity("120 km/h"), (Fraction(100, 3), "speed"))
        self.assertEqual(quantity("3 min"), (Fraction(180), "time"))
        self.assertEqual(quantity(5, "m"), (Fraction(5), "length"))

    def test_bad_quantities(self):
        with self.assertRaises(SceneError):
            quantity("3 furlongs")
        with self.assertRaises(SceneError):
            quantity("fast")

    def test_axis_units_match_their_role(self):
        with self.assertRaises(SceneError):
            GridSpec((Axis("t", 0, 3, Fraction(1), "m"),))
        with self.assertRaises(SceneError):
            GridSpec((Axis("x", 0, 3, Fraction(1), "s"),))
        with self.assertRaises(SceneError):
            Axis("x", 3, 0)


class SpatialRelationTests(SimpleTestCase):
    def setUp(self):
        self.grid = Grid(cube(3))

    def test_above_is_strict_and_transitive(self):
        above, higher = self.grid.above(), self.grid.higher_than()
        self.assertTrue(converse(above).issubset(higher))
        self.assertTrue(compose(above, above).issubset(above))
        self.assertFalse((above.data & identity(above.dom).data).any())
        self.assertTrue(holds(above, (1, 1, 2), (1, 1, 0)))
        self.assertFalse(holds(above, (1, 0, 2), (1, 1, 0)))
        self.assertTrue(holds(higher, (1, 1, 0), (1, 0, 2)))
        self.assertFalse(holds(higher, (1, 0, 2), (1, 1, 0)))

    def test_points_higher_than_the_origin(self):
        grid = Grid(GridSpec(tuple(Axis(a, -1, 1) for a in "xyz")))
        origin = grid.space.state([(0, 0, 0)])
        higher = apply_state(grid.higher_than(), origin)
        self.assertEqual(len(higher), 9)
        self.assertEqual({m[2] for m in higher.members()}, {1})

    def test_close_to(self):
        grid = Grid(GridSpec((Axis("x", 0, 4), Axis("y", 0, 4), Axis("z", 0, 1))))
        near = grid.close_to("2 m")
        self.assertTrue(holds(near, (0, 0, 0), (2, 0, 0)))
        self.assertTrue(holds(near, (0, 0, 0), (1, 1, 0)))
        self.assertFalse(holds(near, (0, 0, 0), (1, 2, 0)))
        self.assertFalse(holds(near, (0, 0, 0), (0, 0, 1)))
        self.assertEqual(converse(near), near)

    def test_close_to_needs_whole_steps(self):
        with self.assertRaises(NotRepresentable):
            self.grid.close_to("1/2 m")

    def test_in_between_on_a_line(self):
        grid = Grid(GridSpec((Axis("x", 0, 4),)))
        expected = {(a, b, c) for a, b, c in product(range(5), repeat=3) if a < b < c or c < b < a}
        self.assertEqual(set(grid.in_between().members()), expected)

    def test_in_between_in_the_plane(self):
        grid = Grid(GridSpec((Axis("x", 0, 2), Axis("y", 0, 2))))
        points = list(product(range(3), repeat=2))
        expected = set()
        for a, b, c in product(points, repeat=3):
            ab = (b[0] - a[0], b[1] - a[1])
            ac = (c[0] - a[0], c[1] - a[1])
            dot = ab[0] * ac[0] + ab[1] * ac[1]
            if ab[0] * ac[1] == ab[1] * ac[0] and 0 < dot < ac[0] ** 2 + ac[1] ** 2:
                expected.add(a + b + c)
        self.assertEqual(set(grid.in_between().members()), expected)
        self.assertIn((0, 0, 1, 1, 2, 2), expected)

    @override_settings(RELSPACE_MAX_SPACE=100)
    def test_size_guard(self):
        grid = Grid(GridSpec((Axis("x", 0, 4),)))
        with self.assertRaises(SpaceTooLarge):
            grid.in_between()
        with self.assertRaises(SpaceTooLarge):
            Space(list(cube(5).factors), "too big")

    def test_regions(self):
        grid = Grid(cube(3))
        bounded = grid.region(bounds={"x": [0, 1], "y": [0, 0]})
        self.assertEqual(len(bounded), 2 * 1 * 3)
        listed = grid.region(members=[(0, 0, 0), (2, 2, 2)])
        self.assertEqual(listed.members(), [(0, 0, 0), (2, 2, 2)])
        with self.assertRaises(SceneError):
            grid.region(members=[(5, 5, 5)])


class SpaceTimeTests(SimpleTestCase):
    def setUp(self):
        self.grid = Grid(GridSpec((Axis("x", 0, 1), Axis("t", 0, 5, Fraction(1), "min"))))

    def test_chases_compose(self):
        self.assertEqual(compose(self.grid.chases("1 min"), self.grid.chases("2 min")), self.grid.chases("3 min"))
        self.assertEqual(compose(self.grid.chases("60 s"), self.grid.chases("60 s")), self.grid.chases("2 min"))

    def test_chases_means_same_place_later(self):
        chases = self.grid.chases()
        self.assertTrue(holds(chases, (1, 4), (1, 0)))
        self.assertFalse(holds(chases, (0, 4), (1, 0)))
        self.assertFalse(holds(chases, (1, 0), (1, 0)))
        self.assertTrue(self.grid.chases("3 min").issubset(chases))

    def test_delay_needs_whole_steps(self):
        with self.assertRaises(NotRepresentable):
            self.grid.chases("90 s")

    def test_chases_needs_time(self):
        with self.assertRaises(SceneError):
            Grid(cube(2)).chases()


class FeatureRelationTests(SimpleTestCase):
    def test_inside(self):
        grid = Grid(GridSpec((Axis("x", 0, 3),), (Feature("radius", (1, 2, 3), "m"),)))
        inside = grid.inside()
        self.assertTrue(holds(inside, (0, 1), (0, 3)))
        self.assertTrue(holds(inside, (1, 1), (0, 3)))
        self.assertFalse(holds(inside, (2, 1), (0, 3)))
        self.assertFalse(holds(inside, (0, 2), (0, 2)))
        self.assertFalse(holds(inside, (0, 3), (0, 1)))

    def test_hunt_threshold(self):
        spec = GridSpec(
            (Axis("x", 0, 400),),
            (Feature("endurance", (60, 1800), "s"), Feature("speed", (100, 120), "km/h")),
        )
        hunt = Grid(spec).can_capture_hunt()
        cheetah = (0, 60, 120)
        self.assertTrue(holds(hunt, cheetah, (333, 1800, 100)))
        self.assertFalse(holds(hunt, cheetah, (334, 1800, 100)))
        # a slower hunter never catches up
        self.assertFalse(holds(hunt, (0, 60, 100), (1, 1800, 120)))

    def test_hunt_needs_features(self):
        with self.assertRaises(SceneError):
            Grid(cube(2)).can_capture_hunt()

    def test_feature_predicate_is_lifted_filter(self):
        grid = Grid(GridSpec((Axis("x", 0, 2),), (Feature("fragrance", ("pungent", "odourless")),)))
        stinks = grid.predicate("fragrance", ["pungent"])
        self.assertTrue(is_partial_identity(stinks))
        image = apply_state(stinks, grid.space.unknown())
        self.assertEqual(image, grid.noun({"fragrance": ["pungent"]}))
        with self.assertRaises(SceneError):
            grid.predicate("fragrance", ["floral"])

    def test_inside_leaves_other_features_free(self):
        spec = GridSpec((Axis("x", 0, 1),), (Feature("radius", (1, 3), "m"), Feature("fragrance", ("pungent", "odourless"))))
        inside = Grid(spec).inside()
        self.assertTrue(holds(inside, (0, 1, "pungent"), (0, 3, "odourless")))
        self.assertTrue(holds(inside, (0, 1, "odourless"), (0, 3, "odourless")))


class SceneTests(SimpleTestCase):
    def test_grid_scene_registry(self):
        spec = GridSpec((Axis("x", 0, 1), Axis("z", 0, 1), Axis("t", 0, 2, Fraction(1), "min")))
        scene = build_grid(spec, "tiny", relations=[{"name": "chases_1", "kind": "chases", "delta": "1 min"}],
                           regions=[{"name": "ground", "bounds": {"z": [0, 0]}}])
        for name in ("higher_than", "above", "in_between", "chases", "chases_1", "ground"):
            self.assertTrue(scene.has_relation(name), name)
        with self.assertRaises(SceneError):
            build_grid(spec, relations=[{"name": "warps", "kind": "teleports"}])

    def test_inhabitants(self):
        scene = Scene(BOARD, "board")
        scene.add_inhabitant("Alice")
        self.assertEqual(scene.inhabitant("Alice"), BOARD.unknown())
        self.assertEqual(scene.resolve("alice"), "Alice")
        with self.assertRaises(UnknownInhabitant):
            scene.resolve("Bob")
        with self.assertRaises(SceneError):
            scene.add_inhabitant("Carol", next_to())

    def test_where(self):
        state = PIECES.where({"kind": ["king"], "colour": ["black"]})
        self.assertEqual(len(state), 64)
        with self.assertRaises(SceneError):
            PIECES.where({"kind": ["dragon"]})


class SceneLoaderTests(SimpleTestCase):
    def test_chess_from_fen(self):
        scene = load_scene({"space": {"kind": "chess", "fen": FEN}})
        self.assertEqual(squares(scene.relation("king")), ["d4", "f7"])

    def test_chess_from_pieces(self):
        scene = load_scene({"space": {"kind": "chess", "pieces": [
            {"square": "e4", "kind": "queen", "colour": "black"},
        ]}})
        self.assertEqual(squares(scene.relation("queen")), ["e4"])

    def test_subway_and_penrose(self):
        scene = load_scene({"space": {"kind": "subway"}, "inhabitants": [
            {"name": "Alice", "state": {"members": [["Tai Wai"]]}},
        ]})
        self.assertEqual(scene.inhabitant("Alice").members(), [("Tai Wai",)])
        staircase_scene = load_scene({"space": {"kind": "penrose", "steps": 2}, "inhabitants": [
            {"name": "Escher", "state": {"values": {"flight": ["III"]}}},
        ]})
        self.assertEqual(len(staircase_scene.inhabitant("Escher")), 2)

    def test_grid_scene(self):
        scene = load_scene({
            "name": "paris",
            "space": {
                "kind": "grid",
                "axes": [{"name": "x", "hi": 2}, {"name": "y", "hi": 2},
                         {"name": "t", "hi": 3, "resolution": "1 min"}],
                "relations": [{"name": "chases_2", "kind": "chases", "delta": "2 min"}],
            },
            "regions": [{"name": "Paris", "bounds": {"x": [0, 1], "y": [0, 1]}}],
            "inhabitants": [{"name": "Alice", "state": {"relation": "Paris"}}, {"name": "Bob"}],
        })
        self.assertEqual(len(scene.inhabitant("Alice")), 2 * 2 * 4)
        self.assertEqual(scene.inhabitant("Bob"), scene.space.unknown())
        self.assertTrue(scene.relation("chases_2").issubset(scene.relation("chases")))

    def test_invalid_scenes(self):
        for data in (
            [],
            {"space": {"kind": "moon"}},
            {"space": {"kind": "penrose"}},
            {"space": {"kind": "grid", "axes": [{"name": "x", "hi": 2, "resolution": "1 parsec"}]}},
            {"space": {"kind": "subway"}, "regions": [{"name": "r"}]},
            {"space": {"kind": "subway"}, "inhabitants": [{"name": "A"}, {"name": "a"}]},
        ):
            with self.assertRaises(SceneError, msg=data):
                load_scene(data)
