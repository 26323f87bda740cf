# spaces/penrose.py
"""The Penrose staircase: four flights of ``n`` steps joined in a loop."""
from __future__ import annotations

import logging

from relations import core
from relations.carriers import Carrier
from relations.core import Relation
from relations.exceptions import SceneError

from .space import Scene, Space

logger = logging.getLogger(__name__)

FLIGHTS = Carrier("flight", ["I", "II", "III", "IV"])


def staircase(n: int) -> Space:
    if n < 1:
        raise SceneError(f"a flight needs at least one step, got {n}")
    return Space([FLIGHTS, Carrier("step", range(1, n + 1))], "penrose")


def build_penrose(n: int, name: str = "penrose") -> Scene:
    """``move_up`` climbs one step, from the top of a flight onto the first step of the next."""
    space = staircase(n)
    port = space.port

    def move_up() -> Relation:
        def up(f, k, f2, k2):
            same_flight = (f2 == f) & (k2 == k + 1)
            next_flight = (k == n - 1) & (k2 == 0) & (f2 == (f + 1) % len(FLIGHTS))
            return same_flight | next_flight

        return Relation.from_predicate(port, port, up)

    scene = Scene(space, name)
    scene.register("move_up", move_up)
    scene.register("move_down", lambda: core.converse(scene.relation("move_up")))
    logger.info("penrose staircase with %d steps per flight", n)
    return scene
