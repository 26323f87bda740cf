# relations/core.py
"""
The compact-closed algebra of finite sets and relations.

A relation is stored as a boolean numpy array whose axes are the dom wires
followed by the cod wires; ``data[i1, ..., ik, j1, ..., jl]`` is True exactly
when ``((i1..ik), (j1..jl))`` is a pair of the relation. Relations are
immutable: the array is flagged read-only on construction.
"""
from __future__ import annotations

import logging
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .carriers import Carrier, PortType, as_port
from .exceptions import IndexOutOfRange, TypeMismatch

logger = logging.getLogger(__name__)


class Relation:
    __slots__ = ("dom", "cod", "data")

    def __init__(self, dom, cod, data):
        dom, cod = as_port(dom), as_port(cod)
        data = np.asarray(data, dtype=bool)
        expected = dom.shape + cod.shape
        if data.shape != expected:
            raise TypeMismatch(f"data of shape {data.shape} for {dom} → {cod} (expected {expected})")
        if data.flags.writeable:
            data = data.copy()
            data.flags.writeable = False
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Relation is immutable")

    # --- constructors ---
    @classmethod
    def from_pairs(cls, dom, cod, pairs: Iterable[tuple[Sequence[int], Sequence[int]]]) -> Relation:
        """Build from (domTuple, codTuple) pairs of element indices."""
        dom, cod = as_port(dom), as_port(cod)
        data = np.zeros(dom.shape + cod.shape, dtype=bool)
        arity = len(dom) + len(cod)
        for d, c in pairs:
            key = tuple(d) + tuple(c)
            if len(key) != arity:
                raise TypeMismatch(f"tuple {key} does not fit {dom} → {cod}")
            data[key] = True
        return cls(dom, cod, data)

    @classmethod
    def from_labels(cls, dom, cod, pairs: Iterable[tuple[Sequence[Hashable], Sequence[Hashable]]]) -> Relation:
        dom, cod = as_port(dom), as_port(cod)
        return cls.from_pairs(dom, cod, ((dom.indices(d), cod.indices(c)) for d, c in pairs))

    @classmethod
    def state(cls, cod, members: Iterable[Sequence[Hashable]]) -> Relation:
        """A state (subset of the product of ``cod``) from element labels."""
        cod = as_port(cod)
        return cls.from_labels(PortType.unit(), cod, (((), m) for m in members))

    @classmethod
    def from_predicate(cls, dom, cod, predicate: Callable[..., np.ndarray]) -> Relation:
        """
        Sweep a vectorized predicate over the full product.

        ``predicate`` receives one open-mesh index array per wire (dom wires
        first) and returns something broadcastable to the relation's shape.
        """
        dom, cod = as_port(dom), as_port(cod)
        shape = dom.shape + cod.shape
        grids = np.ix_(*[np.arange(n) for n in shape]) if shape else ()
        data = np.broadcast_to(np.asarray(predicate(*grids), dtype=bool), shape)
        return cls(dom, cod, data)

    # --- views ---
    @property
    def is_state(self) -> bool:
        return len(self.dom) == 0

    @property
    def is_test(self) -> bool:
        return len(self.cod) == 0

    @property
    def is_scalar(self) -> bool:
        return self.is_state and self.is_test

    @property
    def is_empty(self) -> bool:
        return not self.data.any()

    @property
    def arity(self) -> int:
        return len(self.dom) + len(self.cod)

    @property
    def pairs(self) -> frozenset:
        """The relation as a set of (domTuple, codTuple) index pairs."""
        k = len(self.dom)
        return frozenset((tuple(int(i) for i in t[:k]), tuple(int(i) for i in t[k:]))
                         for t in np.argwhere(self.data))

    def labelled_pairs(self) -> list[tuple[tuple, tuple]]:
        """Pairs as carrier labels, in canonical (sorted index) order."""
        k = len(self.dom)
        return [(self.dom.labels(t[:k]), self.cod.labels(t[k:])) for t in np.argwhere(self.data)]

    def members(self) -> list[tuple]:
        """For a state: its elements as label tuples, in canonical order."""
        if not self.is_state:
            raise TypeMismatch(f"members() needs a state, got {self.dom} → {self.cod}")
        return [c for _, c in self.labelled_pairs()]

    def __len__(self) -> int:
        return int(np.count_nonzero(self.data))

    def __contains__(self, pair) -> bool:
        d, c = pair
        key = tuple(d) + tuple(c)
        return bool(self.data[key])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and np.array_equal(self.data, other.data)

    __hash__ = None

    def issubset(self, other: Relation) -> bool:
        _require_same_type(self, other, "issubset")
        return not np.any(self.data & ~other.data)

    def project(self, keep: Sequence[int]) -> Relation:
        """Tuple projection of a state onto the wires ``keep`` (in that order)."""
        if not self.is_state:
            raise TypeMismatch("project() needs a state")
        keep = list(keep)
        for k in keep:
            if not 0 <= k < len(self.cod):
                raise IndexOutOfRange(f"wire {k} out of range for {self.cod}")
        dropped = tuple(i for i in range(len(self.cod)) if i not in keep)
        data = self.data.any(axis=dropped) if dropped else self.data
        remaining = [i for i in range(len(self.cod)) if i not in dropped]
        data = np.transpose(data, [remaining.index(k) for k in keep])
        return Relation(PortType.unit(), self.cod.pick(keep), data)

    def __repr__(self):
        return f"Relation({self.dom} → {self.cod}, {len(self)} pairs)"

    # sugar
    def __rshift__(self, other: Relation) -> Relation:
        return compose(self, other)

    def __matmul__(self, other: Relation) -> Relation:
        return tensor(self, other)

    def __and__(self, other: Relation) -> Relation:
        return and_(self, other)


# state and test are relations with a trivial side
State = Relation
Test = Relation


def _require_same_type(r: Relation, s: Relation, op: str):
    if r.dom != s.dom or r.cod != s.cod:
        raise TypeMismatch(f"{op}: {r.dom} → {r.cod} vs {s.dom} → {s.cod}")


# -------------------------
# generators
# -------------------------
def identity(t) -> Relation:
    t = as_port(t)
    data = np.ones((), dtype=bool)
    for n in t.shape:
        data = np.multiply.outer(data, np.eye(n, dtype=bool))
    # outer products interleave (d1, c1, d2, c2, ...); reorder to dom then cod
    k = len(t)
    order = [2 * i for i in range(k)] + [2 * i + 1 for i in range(k)]
    return Relation(t, t, np.transpose(data, order) if k else data)


def empty(dom, cod) -> Relation:
    dom, cod = as_port(dom), as_port(cod)
    return Relation(dom, cod, np.zeros(dom.shape + cod.shape, dtype=bool))


def unknown(t) -> Relation:
    """The full subset: nothing is known about the wire."""
    t = as_port(t)
    return Relation(PortType.unit(), t, np.ones(t.shape, dtype=bool))


def spider(x: Carrier, m: int, n: int) -> Relation:
    if m < 0 or n < 0 or m + n < 1:
        raise ValueError(f"spider needs m + n ≥ 1 legs, got {m}, {n}")
    data = np.zeros((len(x),) * (m + n), dtype=bool)
    diag = np.arange(len(x))
    data[(diag,) * (m + n)] = True
    return Relation(PortType((x,) * m), PortType((x,) * n), data)


def cap(x: Carrier) -> Relation:
    return spider(x, 0, 2)


def cup(x: Carrier) -> Relation:
    return spider(x, 2, 0)


def copy(x: Carrier) -> Relation:
    return spider(x, 1, 2)


def delete(x: Carrier) -> Relation:
    return spider(x, 1, 0)


def permute(t, order: Sequence[int]) -> Relation:
    """Symmetry: wire ``order[i]`` of the input becomes output wire ``i``."""
    t = as_port(t)
    order = list(order)
    if sorted(order) != list(range(len(t))):
        raise IndexOutOfRange(f"{order} is not a permutation of {len(t)} wires")
    ident = identity(t)
    k = len(t)
    return Relation(t, t.pick(order), np.transpose(ident.data, list(range(k)) + [k + o for o in order]))


# -------------------------
# composition
# -------------------------
def compose(r: Relation, s: Relation) -> Relation:
    """Sequential composition: first ``r``, then ``s``."""
    if r.cod != s.dom:
        raise TypeMismatch(f"compose: {r.cod} does not match {s.dom}")
    k = len(r.cod)
    data = np.tensordot(r.data, s.data, axes=k) if k else np.multiply.outer(r.data, s.data)
    return Relation(r.dom, s.cod, np.asarray(data, dtype=bool))


def tensor(r: Relation, s: Relation) -> Relation:
    """Parallel composition; the two relations act independently."""
    outer = np.multiply.outer(r.data, s.data)
    a, b, c, d = len(r.dom), len(r.cod), len(s.dom), len(s.cod)
    order = (list(range(a)) + list(range(a + b, a + b + c))
             + list(range(a, a + b)) + list(range(a + b + c, a + b + c + d)))
    return Relation(r.dom + s.dom, r.cod + s.cod, np.transpose(outer, order))


def power(r: Relation, n: int) -> Relation:
    if r.dom != r.cod:
        raise TypeMismatch(f"power needs an endo-relation, got {r.dom} → {r.cod}")
    if n < 0:
        raise ValueError("power needs n ≥ 0")
    result, base = identity(r.dom), r
    # square-and-multiply
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def converse(r: Relation) -> Relation:
    k, m = len(r.dom), len(r.cod)
    return Relation(r.cod, r.dom, np.transpose(r.data, list(range(k, k + m)) + list(range(k))))


def union(r: Relation, s: Relation) -> Relation:
    _require_same_type(r, s, "union")
    return Relation(r.dom, r.cod, r.data | s.data)


def and_(q: Relation, r: Relation) -> Relation:
    """
    AND of two states: both are fed into merging spiders, one per wire.

    Fusing each merge spider with the copies it sees leaves a single shared
    index per wire, which is the elementwise conjunction computed here.
    """
    if not (q.is_state and r.is_state):
        raise TypeMismatch("and_ expects two states")
    _require_same_type(q, r, "and_")
    return Relation(q.dom, q.cod, q.data & r.data)


def apply_state(s: Relation, r: Relation) -> Relation:
    """Forward image of the state ``r`` under ``s``."""
    if not r.is_state:
        raise TypeMismatch("apply_state expects a state as second argument")
    return compose(r, s)


def bend(r: Relation, split: int) -> Relation:
    """
    Re-split the wires of ``r`` so that the first ``split`` of them form the
    domain; caps and cups move wires across without touching the tuple set.
    """
    if not 0 <= split <= r.arity:
        raise IndexOutOfRange(f"split {split} outside 0..{r.arity}")
    wires = r.dom + r.cod
    return Relation(wires[:split], wires[split:], r.data)
