# console/render.py
"""Text and JSON renderings of states. Every rendering lists elements in sorted order."""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

import chess

from relations.carriers import encode_label
from relations.core import Relation

RENDER_FORMATS = ("text", "json")

# wider grids are listed instead
GRID_WIDTH = 40


def _label(value) -> str:
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else str(value)
    return str(value)


def element(member: tuple) -> str:
    return "(" + ", ".join(_label(v) for v in member) + ")" if len(member) != 1 else _label(member[0])


def board(state: Relation, pieces=()) -> list[str]:
    """Rank 8 first; pieces as FEN letters, result squares marked ``*``."""
    marked = {m[0] + m[1] for m in state.members()}
    letters = {}
    for p in pieces:
        piece = chess.Piece(chess.PIECE_NAMES.index(p.kind), p.colour == "white")
        letters[p.square] = piece.symbol()
    rows = []
    for rank in reversed(chess.RANK_NAMES):
        cells = []
        for file in chess.FILE_NAMES:
            square = file + rank
            cells.append(letters.get(square, ".") + ("*" if square in marked else " "))
        rows.append(f"{rank} " + "".join(cells).rstrip())
    rows.append("  " + " ".join(chess.FILE_NAMES))
    return rows


def station_line(state: Relation, stations) -> list[str]:
    """The line in travel order, selected stations in brackets."""
    selected = {m[0] for m in state.members()}
    return [" - ".join(f"[{s}]" if s in selected else s for s in stations)]


def grid_slices(state: Relation) -> list[str]:
    """One x-y panel per height, highest first; ``*`` marks a position some element occupies."""
    names = [c.name for c in state.cod]
    axes = [n for n in ("x", "y", "z") if n in names]
    occupied = set(state.project([names.index(n) for n in axes]).members())
    xs, ys = list(state.cod[names.index("x")]), list(state.cod[names.index("y")])
    heights = list(state.cod[names.index("z")]) if "z" in names else [None]
    rows = []
    for z in reversed(heights):
        if z is not None:
            rows.append(f"z = {_label(z)}")
        for y in reversed(ys):
            cells = ["*" if (x, y) + ((z,) if z is not None else ()) in occupied else "." for x in xs]
            rows.append(f"{_label(y):>3} " + " ".join(cells))
        rows.append(f"    x {_label(xs[0])}..{_label(xs[-1])}")
    return rows


def listing(state: Relation, limit: Optional[int] = None) -> list[str]:
    names = " × ".join(c.name for c in state.cod)
    members = state.members()
    lines = [f"{len(members)} element(s) over {names or 'the unit'}"]
    shown = members if limit is None else members[:limit]
    lines += [f"  {element(m)}" for m in shown]
    if len(shown) < len(members):
        lines.append(f"  ... {len(members) - len(shown)} more")
    return lines


def as_json(state: Relation) -> dict:
    return {
        "wires": [c.name for c in state.cod],
        "members": [encode_label(m) for m in state.members()],
    }


def render(state: Relation, scene=None, limit: Optional[int] = None) -> list[str]:
    """Pick the rendering the scene calls for: a board, a station line, grid slices or a listing."""
    names = [c.name for c in state.cod]
    if scene is not None and hasattr(scene, "pieces") and names[:2] == ["file", "rank"]:
        squares = sorted({m[0] + m[1] for m in state.members()})
        return board(state, scene.pieces) + [" ".join(squares)]
    if names == ["station"]:
        return station_line(state, list(state.cod[0]))
    if scene is not None and hasattr(scene, "grid") and {"x", "y"} <= set(names):
        if len(state.cod[names.index("x")]) <= GRID_WIDTH:
            return grid_slices(state) + listing(state, limit)
    return listing(state, limit)
