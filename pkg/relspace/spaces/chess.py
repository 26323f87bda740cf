# spaces/chess.py
"""
The chessboard, and the board augmented with what stands on each square.

Squares are ``files × ranks``. The augmented space adds the piece kind and
its colour, so one element is "a white pawn on b4". Move patterns are the
pure ones: nothing blocks a line, and there is no castling, en passant or
promotion.
"""
from __future__ import annotations

import logging
from typing import Callable, Iterable, NamedTuple, Optional

import chess
import numpy as np

from diagrams.wirings import Layout, extend
from relations.carriers import Carrier
from relations.core import Relation
from relations.exceptions import SceneError

from .space import Scene, Space

logger = logging.getLogger(__name__)

FILES = Carrier("file", chess.FILE_NAMES)
RANKS = Carrier("rank", chess.RANK_NAMES)
KINDS = Carrier("kind", chess.PIECE_NAMES[1:])
COLOURS = Carrier("colour", ["white", "black"])

BOARD = Space([FILES, RANKS], "chessboard")
PIECES = BOARD.augment(KINDS, COLOURS, name="pieces")

SQUARE_RELATIONS = ("move_right", "kings_moves", "knights_moves", "next_to")


class Piece(NamedTuple):
    square: str
    kind: str
    colour: str

    @property
    def label(self) -> tuple:
        return (self.square[0], self.square[1], self.kind, self.colour)


# -------------------------
# square relations
# -------------------------
def from_bitboards(attacks: Callable[[int], int]) -> Relation:
    """Square relation from a bitboard of targets per source square."""
    data = np.zeros(BOARD.port.shape * 2, dtype=bool)
    for sq in chess.SQUARES:
        f, r = chess.square_file(sq), chess.square_rank(sq)
        for target in chess.scan_forward(attacks(sq)):
            data[f, r, chess.square_file(target), chess.square_rank(target)] = True
    return Relation(BOARD.port, BOARD.port, data)


def move_right() -> Relation:
    return Relation.from_predicate(BOARD.port, BOARD.port, lambda f, r, f2, r2: (f2 == f + 1) & (r2 == r))


def kings_moves() -> Relation:
    return from_bitboards(lambda sq: chess.BB_KING_ATTACKS[sq])


def knights_moves() -> Relation:
    return from_bitboards(lambda sq: chess.BB_KNIGHT_ATTACKS[sq])


def next_to() -> Relation:
    """Squares touching by a side or a corner."""
    return Relation.from_predicate(
        BOARD.port, BOARD.port,
        lambda f, r, f2, r2: (np.abs(f - f2) <= 1) & (np.abs(r - r2) <= 1) & ((f != f2) | (r != r2)),
    )


def square_relation(name: str) -> Relation:
    builders = {"move_right": move_right, "kings_moves": kings_moves, "knights_moves": knights_moves,
                "next_to": next_to}
    try:
        return builders[name]()
    except KeyError:
        raise SceneError(f"no square relation {name!r} (known: {', '.join(SQUARE_RELATIONS)})") from None


def on_pieces(square: Relation) -> Relation:
    """A square relation on the augmented board; kinds and colours on both sides are free."""
    return extend(square, Layout(PIECES.port, PIECES.port, (0, 1), (0, 1)))


# -------------------------
# captures
# -------------------------
def attacks(kind: str, colour: str, square: int) -> int:
    """Bitboard of squares a piece of this kind attacks on an empty board."""
    if kind == "pawn":
        return chess.BB_PAWN_ATTACKS[colour == "white"][square]
    if kind == "knight":
        return chess.BB_KNIGHT_ATTACKS[square]
    if kind == "king":
        return chess.BB_KING_ATTACKS[square]
    diagonal = chess.BB_DIAG_ATTACKS[square][0]
    straight = chess.BB_FILE_ATTACKS[square][0] | chess.BB_RANK_ATTACKS[square][0]
    return {"bishop": diagonal, "rook": straight, "queen": diagonal | straight}[kind]


def can_capture() -> Relation:
    """
    (capturer, target) pairs: the target's square is in the capturer's attack
    pattern and the colours differ. The target's kind is left free.
    """
    data = np.zeros(PIECES.port.shape * 2, dtype=bool)
    for k, kind in enumerate(KINDS):
        for c, colour in enumerate(COLOURS):
            for sq in chess.SQUARES:
                f, r = chess.square_file(sq), chess.square_rank(sq)
                for target in chess.scan_forward(attacks(kind, colour, sq)):
                    data[f, r, k, c, chess.square_file(target), chess.square_rank(target), :, 1 - c] = True
    return Relation(PIECES.port, PIECES.port, data)


def can_capture_by_moves() -> Relation:
    """
    The same relation with each piece carrying its own move rule, written as
    file/rank arithmetic instead of attack tables.
    """
    kind_index = {name: i for i, name in enumerate(KINDS)}

    def predicate(f, r, k, c, f2, r2, k2, c2):
        df, dr = f2 - f, r2 - r
        adf, adr = np.abs(df), np.abs(dr)
        forward = np.where(c == 0, 1, -1)
        moves = {
            "pawn": (adf == 1) & (dr == forward),
            "knight": ((adf == 1) & (adr == 2)) | ((adf == 2) & (adr == 1)),
            "bishop": (adf == adr) & (adf > 0),
            "rook": (df == 0) != (dr == 0),
            "king": (np.maximum(adf, adr) == 1),
        }
        moves["queen"] = moves["bishop"] | moves["rook"]
        allowed = np.zeros(np.broadcast_shapes(f.shape, f2.shape, k.shape, c.shape), dtype=bool)
        for name, pattern in moves.items():
            allowed = allowed | ((k == kind_index[name]) & pattern)
        return allowed & (c != c2)

    return Relation.from_predicate(PIECES.port, PIECES.port, predicate)


# -------------------------
# scenes
# -------------------------
def pieces_from_fen(fen: str) -> list[Piece]:
    try:
        board = chess.BaseBoard(fen.split()[0] if fen.strip() else fen)
    except (ValueError, IndexError) as exc:
        raise SceneError(f"bad FEN {fen!r}: {exc}") from None
    return [
        Piece(chess.square_name(sq), chess.piece_name(p.piece_type), "white" if p.color else "black")
        for sq, p in sorted(board.piece_map().items())
    ]


def _check(pieces: Iterable[Piece]) -> list[Piece]:
    pieces = [Piece(*p) for p in pieces]
    seen = set()
    for p in pieces:
        if len(p.square) != 2 or p.square[0] not in FILES or p.square[1] not in RANKS:
            raise SceneError(f"bad square label {p.square!r}")
        if p.kind not in KINDS:
            raise SceneError(f"bad piece kind {p.kind!r} on {p.square}")
        if p.colour not in COLOURS:
            raise SceneError(f"bad colour {p.colour!r} on {p.square}")
        if p.square in seen:
            raise SceneError(f"two pieces on {p.square}")
        seen.add(p.square)
    return pieces


def build_chess(pieces: Iterable[Piece] = (), fen: Optional[str] = None, name: str = "chess") -> Scene:
    """
    A scene over the augmented board. Nouns: one per kind, plus ``piece``;
    adjectives ``white`` and ``black``; relations as in SQUARE_RELATIONS plus
    ``can_capture``.
    """
    if fen is not None:
        pieces = list(pieces) + pieces_from_fen(fen)
    pieces = _check(pieces)
    scene = Scene(PIECES, name)
    for rel in SQUARE_RELATIONS:
        scene.register(rel, lambda rel=rel: on_pieces(square_relation(rel)))
    scene.register("can_capture", can_capture)
    scene.register("piece", lambda: PIECES.state(p.label for p in pieces))
    for kind in KINDS:
        scene.register(kind, lambda kind=kind: PIECES.state(p.label for p in pieces if p.kind == kind))
    for colour in COLOURS:
        scene.register(colour, lambda colour=colour: PIECES.where({"colour": [colour]}))
    scene.pieces = pieces
    logger.info("chess scene %r with %d pieces", name, len(pieces))
    return scene


def squares(state: Relation) -> list[str]:
    """Square names of a state over the board or the augmented board, sorted."""
    return sorted({m[0] + m[1] for m in state.members()})
