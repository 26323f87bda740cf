# spaces/space.py
"""Spaces (products of finite carriers) and scenes (a space with its relations and inhabitants)."""
from __future__ import annotations

import logging
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

from django.conf import settings
import numpy as np

from diagrams.evaluate import Environment
from relations import core
from relations.carriers import Carrier, PortType
from relations.core import Relation
from relations.exceptions import SceneError, SpaceTooLarge, TypeMismatch, UnknownInhabitant, UnknownRelation

logger = logging.getLogger(__name__)


def max_space() -> int:
    return int(getattr(settings, "RELSPACE_MAX_SPACE", 1_000_000))


def check_size(size: int, what: str):
    bound = max_space()
    if size > bound:
        raise SpaceTooLarge(f"{what} has {size} elements, above the bound of {bound} (RELSPACE_MAX_SPACE)")


class Space:
    """An ordered product of carriers; each inhabitant gets its own copy as a bundle of wires."""

    def __init__(self, factors: Iterable[Carrier], name: str = "space"):
        self.factors = tuple(factors)
        self.name = name
        names = [c.name for c in self.factors]
        if len(set(names)) != len(names):
            raise SceneError(f"space {name!r} repeats a factor name: {names}")
        check_size(self.size, f"space {name!r}")

    @property
    def port(self) -> PortType:
        return PortType(self.factors)

    @property
    def size(self) -> int:
        return self.port.size

    def __len__(self):
        return len(self.factors)

    def __eq__(self, other):
        return isinstance(other, Space) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def position(self, factor: str) -> int:
        for i, c in enumerate(self.factors):
            if c.name == factor:
                return i
        raise SceneError(f"space {self.name!r} has no factor {factor!r}")

    def factor(self, name: str) -> Carrier:
        return self.factors[self.position(name)]

    def has(self, factor: str) -> bool:
        return any(c.name == factor for c in self.factors)

    # states over the space
    def unknown(self) -> Relation:
        return core.unknown(self.port)

    def state(self, members: Iterable[Sequence[Hashable]]) -> Relation:
        try:
            return Relation.state(self.port, members)
        except (KeyError, TypeMismatch) as exc:
            raise SceneError(f"bad element for space {self.name!r}: {exc}") from None

    def where(self, values: Mapping[str, Iterable[Hashable]]) -> Relation:
        """The elements whose named factors take one of the listed values; other factors are free."""
        data = np.ones(self.port.shape, dtype=bool)
        for factor, allowed in values.items():
            p = self.position(factor)
            carrier = self.factors[p]
            mask = np.zeros(len(carrier), dtype=bool)
            for v in allowed:
                if v not in carrier:
                    raise SceneError(f"{v!r} is not a value of {factor!r}")
                mask[carrier.index(v)] = True
            shape = [1] * len(self.factors)
            shape[p] = len(carrier)
            data = data & mask.reshape(shape)
        return Relation(PortType.unit(), self.port, data)

    def augment(self, *features: Carrier, name: Optional[str] = None) -> Space:
        return augment(self, *features, name=name)

    def __repr__(self):
        return f"Space({self.name!r}: {' × '.join(c.name for c in self.factors)}, {self.size} elements)"


def augment(space: Space, *features: Carrier, name: Optional[str] = None) -> Space:
    """The product of ``space`` with feature carriers (piece kind, speed, radius, ...)."""
    return Space(space.factors + tuple(features), name or space.name)


class Scene:
    """
    A space together with its named relations and its inhabitants.

    Relations are registered as builders and materialized on first use.
    Inhabitants start out as the unknown state unless given a prior.
    """

    def __init__(self, space: Space, name: str = "", inhabitants: Optional[Mapping[str, Relation]] = None):
        self.space = space
        self.name = name or space.name
        self._builders: dict[str, Callable[[], Relation]] = {}
        self._cache: dict[str, Relation] = {}
        self.inhabitants: dict[str, Relation] = {}
        for who, state in (inhabitants or {}).items():
            self.add_inhabitant(who, state)

    # --- relations ---
    def register(self, name: str, relation):
        """Register a Relation, or a zero-argument callable building one."""
        self._builders[name] = relation if callable(relation) else (lambda r=relation: r)
        self._cache.pop(name, None)

    def relation(self, name: str) -> Relation:
        if name not in self._cache:
            if name not in self._builders:
                raise UnknownRelation(f"scene {self.name!r} has no relation {name!r}")
            relation = self._builders[name]()
            logger.debug("built relation %r on %s: %r", name, self.name, relation)
            self._cache[name] = relation
        return self._cache[name]

    def relation_names(self) -> list[str]:
        return sorted(self._builders)

    def has_relation(self, name: str) -> bool:
        return name in self._builders

    def environment(self) -> Environment:
        return Environment(fallback=self.relation)

    # --- inhabitants ---
    def add_inhabitant(self, name: str, state: Optional[Relation] = None):
        state = self.space.unknown() if state is None else state
        if not state.is_state or state.cod != self.space.port:
            raise SceneError(f"inhabitant {name!r} needs a state over {self.space.port}, got {state.dom} → {state.cod}")
        self.inhabitants[name] = state

    def inhabitant(self, name: str) -> Relation:
        try:
            return self.inhabitants[name]
        except KeyError:
            raise UnknownInhabitant(f"scene {self.name!r} has no inhabitant {name!r}") from None

    def resolve(self, word: str) -> str:
        """Inhabitant names are matched case-insensitively."""
        for who in self.inhabitants:
            if who.lower() == word.lower():
                return who
        raise UnknownInhabitant(f"scene {self.name!r} has no inhabitant {word!r}")

    def __repr__(self):
        return f"Scene({self.name!r}, {len(self._builders)} relations, inhabitants={list(self.inhabitants)})"
