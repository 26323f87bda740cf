# spaces/subway.py
"""A subway line: stations in travel order."""
from __future__ import annotations

import logging
from typing import Iterable, Sequence

from relations.carriers import Carrier
from relations.core import Relation
from relations.exceptions import SceneError

from .space import Scene, Space, check_size

logger = logging.getLogger(__name__)

TUEN_MA = (
    "Kai Tak", "Diamond Hill", "Hin Keng", "Tai Wai", "Che Kung Temple", "Sha Tin Wai",
    "City One", "Shek Mun", "Tai Shui Hang", "Heng On", "Ma On Shan", "Wu Kai Sha",
)


def build_subway(stations: Sequence[str] = TUEN_MA, my_station: Iterable[str] = ("Wu Kai Sha",),
                 name: str = "subway") -> Scene:
    """
    Relations: ``next_stop`` (one stop further along the line),
    ``in_between`` (a ternary state: the middle station lies strictly
    between the other two, in either direction), ``my_station`` and the
    noun ``station``.
    """
    stations = list(stations)
    if len(stations) < 2:
        raise SceneError("a line needs at least two stations")
    if len(set(stations)) != len(stations):
        raise SceneError(f"duplicate station in {stations}")
    space = Space([Carrier("station", stations)], name)
    port = space.port
    mine = list(my_station)

    def in_between() -> Relation:
        check_size(space.size ** 3, "in_between")
        return Relation.from_predicate(
            (), port * 3, lambda a, b, c: ((a < b) & (b < c)) | ((c < b) & (b < a))
        )

    scene = Scene(space, name)
    scene.register("next_stop", lambda: Relation.from_predicate(port, port, lambda a, b: b == a + 1))
    scene.register("in_between", in_between)
    scene.register("my_station", lambda: space.state((s,) for s in mine))
    scene.register("station", space.unknown)
    logger.info("subway %r with %d stations", name, len(stations))
    return scene
