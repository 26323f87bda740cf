# relations/carriers.py
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Sequence

import numpy as np

from .exceptions import TypeMismatch


@dataclass(frozen=True)
class Carrier:
    """
    A named finite ordered set: the values a wire ranges over.

    Elements are addressed by their position, which is the canonical index
    used by every relation built on this carrier.
    """
    name: str
    elements: tuple[Hashable, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, name: str, elements: Iterable[Hashable] = ()):
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise ValueError(f"Carrier {name!r} has duplicate labels")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(elements)})

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.elements)

    def __contains__(self, label) -> bool:
        return label in self._index

    def index(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not an element of carrier {self.name!r}") from None

    @property
    def values(self) -> np.ndarray:
        """Labels as a numpy array (object dtype unless all labels are ints)."""
        if self.elements and all(isinstance(e, (int, np.integer)) and not isinstance(e, bool)
                                 for e in self.elements):
            return np.asarray(self.elements, dtype=np.int64)
        out = np.empty(len(self.elements), dtype=object)
        out[:] = list(self.elements)
        return out

    def __repr__(self):
        return f"Carrier({self.name!r}, {len(self)} elements)"


@dataclass(frozen=True)
class PortType:
    """Ordered list of carriers; the empty list is the monoidal unit {*}."""
    carriers: tuple[Carrier, ...] = ()

    def __init__(self, carriers: Iterable[Carrier] = ()):
        object.__setattr__(self, "carriers", tuple(carriers))

    @classmethod
    def unit(cls) -> PortType:
        return cls(())

    def __len__(self) -> int:
        return len(self.carriers)

    def __iter__(self) -> Iterator[Carrier]:
        return iter(self.carriers)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return PortType(self.carriers[key])
        return self.carriers[key]

    def __add__(self, other: PortType) -> PortType:
        return PortType(self.carriers + tuple(other))

    def __mul__(self, n: int) -> PortType:
        return PortType(self.carriers * n)

    def reversed(self) -> PortType:
        return PortType(self.carriers[::-1])

    def pick(self, positions: Sequence[int]) -> PortType:
        return PortType(self.carriers[p] for p in positions)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.carriers)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=object)) if self.carriers else 1

    def labels(self, indices: Sequence[int]) -> tuple:
        return tuple(c.elements[i] for c, i in zip(self.carriers, indices))

    def indices(self, labels: Sequence[Hashable]) -> tuple[int, ...]:
        if len(labels) != len(self.carriers):
            raise TypeMismatch(f"{len(labels)} labels for a port of {len(self.carriers)} wires")
        return tuple(c.index(lbl) for c, lbl in zip(self.carriers, labels))

    def __repr__(self):
        return "⟨" + ", ".join(c.name for c in self.carriers) + "⟩"


def as_port(value) -> PortType:
    """Accept a PortType, a single Carrier or an iterable of carriers."""
    if isinstance(value, PortType):
        return value
    if isinstance(value, Carrier):
        return PortType((value,))
    return PortType(value)


# -------------------------
# label codec (JSON)
# -------------------------
def encode_label(label):
    if isinstance(label, Fraction):
        return {"fraction": str(label)}
    if isinstance(label, tuple):
        return [encode_label(x) for x in label]
    if isinstance(label, np.integer):
        return int(label)
    return label


def decode_label(value):
    if isinstance(value, dict) and "fraction" in value:
        return Fraction(value["fraction"])
    if isinstance(value, list):
        return tuple(decode_label(x) for x in value)
    return value
