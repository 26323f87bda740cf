# spaces/grid.py
"""
Cartesian space and space-time, discretized to bounded integer grids.

An axis label ``k`` stands for the coordinate ``k × resolution``. Feature
axes (radius, endurance, speed, fragrance, ...) carry rational or textual
values in a declared unit. Every quantity is normalized to metres and
seconds as an exact ``Fraction``; distances are compared through integer
squared lengths, so no threshold is ever rounded the wrong way.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

import numpy as np

from diagrams.wirings import Layout, extend, filter_box, lift
from relations.carriers import Carrier, PortType
from relations.core import Relation
from relations.exceptions import NotRepresentable, SceneError

from .space import Scene, Space, check_size

logger = logging.getLogger(__name__)

# unit → (factor to metres/seconds, dimension)
UNITS = {
    "m": (Fraction(1), "length"),
    "km": (Fraction(1000), "length"),
    "s": (Fraction(1), "time"),
    "min": (Fraction(60), "time"),
    "h": (Fraction(3600), "time"),
    "m/s": (Fraction(1), "speed"),
    "km/h": (Fraction(5, 18), "speed"),
}
SPATIAL = ("x", "y", "z")
TIME = "t"

_QUANTITY = re.compile(r"^\s*([-+]?\d+(?:/\d+)?(?:\.\d+)?)\s*([a-z/]*)\s*$")


def as_number(value) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise SceneError(f"{value!r} is not a number") from None


def split_quantity(value, unit: Optional[str] = None) -> tuple[Fraction, str]:
    """``"1/3 km"`` → (Fraction(1, 3), "km"), unit as written."""
    if isinstance(value, str):
        m = _QUANTITY.match(value)
        if not m:
            raise SceneError(f"cannot read quantity {value!r}")
        number, written = m.groups()
        value, unit = number, written or unit
    if unit not in UNITS:
        raise SceneError(f"unknown unit {unit!r} (known: {', '.join(UNITS)})")
    return as_number(value), unit


def quantity(value, unit: Optional[str] = None) -> tuple[Fraction, str]:
    """``"5 m"``, ``"1/3 km"``, ``(120, "km/h")`` → (value in metres/seconds, dimension)."""
    amount, unit = split_quantity(value, unit)
    factor, dimension = UNITS[unit]
    return amount * factor, dimension


def _length(value) -> Fraction:
    amount, dimension = quantity(value, "m")
    if dimension != "length":
        raise SceneError(f"{value!r} is not a length")
    return amount


def _duration(value) -> Fraction:
    amount, dimension = quantity(value, "s")
    if dimension != "time":
        raise SceneError(f"{value!r} is not a duration")
    return amount


@dataclass(frozen=True)
class Axis:
    name: str
    lo: int
    hi: int
    resolution: Fraction = Fraction(1)
    unit: str = "m"

    def __post_init__(self):
        if self.hi < self.lo:
            raise SceneError(f"axis {self.name!r} is empty ({self.lo}..{self.hi})")
        if self.resolution <= 0:
            raise SceneError(f"axis {self.name!r} needs a positive resolution")
        if self.unit not in UNITS:
            raise SceneError(f"axis {self.name!r}: unknown unit {self.unit!r}")

    @property
    def carrier(self) -> Carrier:
        return Carrier(self.name, range(self.lo, self.hi + 1))

    @property
    def step(self) -> Fraction:
        """One grid step in metres or seconds."""
        return self.resolution * UNITS[self.unit][0]

    @property
    def labels(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1, dtype=np.int64)


@dataclass(frozen=True)
class Feature:
    name: str
    values: tuple
    unit: Optional[str] = None

    def __post_init__(self):
        if not self.values:
            raise SceneError(f"feature {self.name!r} has no values")
        if self.unit is not None and self.unit not in UNITS:
            raise SceneError(f"feature {self.name!r}: unknown unit {self.unit!r}")
        object.__setattr__(self, "values", tuple(self.label(v) for v in self.values))

    @staticmethod
    def label(value) -> Hashable:
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        try:
            return Fraction(str(value))
        except (ValueError, ZeroDivisionError):
            return str(value)

    @property
    def carrier(self) -> Carrier:
        return Carrier(self.name, self.values)

    def amounts(self) -> list[Fraction]:
        """Values in metres / seconds / metres per second."""
        if self.unit is None or not all(isinstance(v, Fraction) for v in self.values):
            raise SceneError(f"feature {self.name!r} is not a measured quantity")
        return [v * UNITS[self.unit][0] for v in self.values]


@dataclass(frozen=True)
class GridSpec:
    axes: tuple[Axis, ...]
    features: tuple[Feature, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "features", tuple(self.features))
        if not self.axes:
            raise SceneError("a grid needs at least one axis")
        for a in self.axes:
            dimension = UNITS[a.unit][1]
            if a.name in SPATIAL and dimension != "length":
                raise SceneError(f"axis {a.name!r} needs a length unit, got {a.unit!r}")
            if a.name == TIME and dimension != "time":
                raise SceneError(f"axis {a.name!r} needs a time unit, got {a.unit!r}")

    @property
    def factors(self) -> list[Carrier]:
        return [a.carrier for a in self.axes] + [f.carrier for f in self.features]


# -------------------------
# exact distance comparisons
# -------------------------
def _scale(axes: Sequence[Axis]) -> tuple[list[int], int]:
    """Integer step lengths after multiplying every step by a common ``L``."""
    scale = math.lcm(*(a.step.denominator for a in axes)) if axes else 1
    return [int(a.step * scale) for a in axes], scale


def _bound(threshold: Fraction, scale: int, strict: bool) -> int:
    """Largest integer ``d2`` with ``sqrt(d2) / scale`` below (or at) ``threshold``; -1 if none."""
    if threshold < 0 or (strict and threshold == 0):
        return -1
    square = (threshold * scale) ** 2
    return math.ceil(square) - 1 if strict else math.floor(square)


class Grid:
    """The grid space with constructors for its relations."""

    def __init__(self, spec: GridSpec, name: str = "grid"):
        self.spec = spec
        self.space = Space(spec.factors, name)
        self.axes = {a.name: a for a in spec.axes}
        self.features = {f.name: f for f in spec.features}
        self.spatial = [a for a in spec.axes if a.name in SPATIAL]

    # --- plumbing ---
    def _require(self, *names: str) -> list:
        missing = [n for n in names if n not in self.axes and n not in self.features]
        if missing:
            raise SceneError(f"grid {self.space.name!r} lacks {', '.join(missing)}")
        return [self.axes.get(n) or self.features[n] for n in names]

    def _binary(self, factors: Sequence[str], predicate: Callable) -> Relation:
        """
        A relation on the named axes (``predicate`` gets subject then object
        label grids), extended to the whole space.
        """
        positions = [self.space.position(n) for n in factors]
        sub = self.space.port.pick(positions)
        k = len(positions)

        def on_values(*grids):
            values = [self.axes[c.name].labels[g] for c, g in zip(list(sub) * 2, grids)]
            return predicate(values[:k], values[k:])

        small = Relation.from_predicate(sub, sub, on_values)
        return extend(small, Layout(self.space.port, self.space.port, tuple(positions), tuple(positions)))

    def _squared_distance(self, axes: Sequence[Axis], a: Sequence[np.ndarray], b: Sequence[np.ndarray]):
        steps, scale = _scale(axes)
        d2 = 0
        for step, u, v in zip(steps, a, b):
            d2 = d2 + ((u - v) * step) ** 2
        return d2, scale

    # --- spatial relations ---
    def higher_than(self) -> Relation:
        """From a point to the points strictly higher than it. ``converse(above)`` is contained in it."""
        self._require("z")
        names = [a.name for a in self.spatial]
        iz = names.index("z")
        return self._binary(names, lambda s, o: o[iz] > s[iz])

    def above(self) -> Relation:
        """Directly above: same x and y, strictly higher."""
        self._require("z")
        names = [a.name for a in self.spatial]
        iz = names.index("z")

        def predicate(s, o):
            same = np.ones((), dtype=bool)
            for i in range(len(names)):
                if i != iz:
                    same = same & (s[i] == o[i])
            return same & (s[iz] > o[iz])

        return self._binary(names, predicate)

    def close_to(self, epsilon) -> Relation:
        """Same height, horizontal distance at most ``epsilon``."""
        eps = _length(epsilon)
        planar = [a for a in self.spatial if a.name != "z"]
        for a in planar:
            if (eps / a.step).denominator != 1:
                raise NotRepresentable(f"{epsilon} is not a whole number of {a.name} steps ({a.step} m)")
        names = [a.name for a in self.spatial]
        ip = [names.index(a.name) for a in planar]

        def predicate(s, o):
            d2, scale = self._squared_distance(planar, [s[i] for i in ip], [o[i] for i in ip])
            near = d2 <= _bound(eps, scale, strict=False)
            if "z" in names:
                near = near & (s[names.index("z")] == o[names.index("z")])
            return near

        return self._binary(names, predicate)

    def region(self, members: Optional[Iterable[Sequence]] = None,
               bounds: Optional[Mapping[str, Sequence[int]]] = None) -> Relation:
        """A state: positions listed in ``members`` or inside per-axis label ``bounds``; the rest free."""
        if members is not None:
            names = [a.name for a in self.spatial]
            positions = [self.space.position(n) for n in names]
            sub = self.space.port.pick(positions)
            try:
                small = Relation.state(sub, (tuple(int(v) for v in m) for m in members))
            except (KeyError, ValueError, TypeError) as exc:
                raise SceneError(f"bad region member: {exc}") from None
            return extend(small, Layout(PortType.unit(), self.space.port, (), tuple(positions)))
        values = {}
        for axis, (lo, hi) in (bounds or {}).items():
            self._require(axis)
            values[axis] = [v for v in range(int(lo), int(hi) + 1) if v in self.space.factor(axis)]
        return self.space.where(values)

    def in_between(self) -> Relation:
        """
        A state over three copies of the space: the middle point lies on the
        segment between the outer two, strictly inside it.
        """
        check_size(self.space.size ** 3, "in_between")
        names = [a.name for a in self.spatial]
        if not names:
            raise SceneError("in_between needs spatial axes")
        positions = [self.space.position(n) for n in names]
        sub = self.space.port.pick(positions)
        k = len(names)
        steps, _ = _scale(self.spatial)

        def predicate(*grids):
            a, b, c = ([self.axes[n].labels[g] * st for n, g, st in zip(names, grids[i * k:(i + 1) * k], steps)]
                       for i in range(3))
            ab = [q - p for p, q in zip(a, b)]
            ac = [q - p for p, q in zip(a, c)]
            collinear = np.ones((), dtype=bool)
            for i in range(k):
                for j in range(i + 1, k):
                    collinear = collinear & (ab[i] * ac[j] == ab[j] * ac[i])
            dot = sum(u * v for u, v in zip(ab, ac))
            length2 = sum(v * v for v in ac)
            return collinear & (dot > 0) & (dot < length2)

        small = Relation.from_predicate(PortType.unit(), sub * 3, predicate)
        full = self.space.port
        cod_positions = tuple(p + i * len(full) for i in range(3) for p in positions)
        return extend(small, Layout(PortType.unit(), full * 3, (), cod_positions))

    # --- space-time ---
    def chases(self, delta=None) -> Relation:
        """
        Subject is where the object was, later: same position and a later
        time, exactly ``delta`` later when given.
        """
        self._require(TIME)
        t = self.axes[TIME]
        names = [a.name for a in self.spatial] + [TIME]
        it = len(names) - 1
        if delta is None:
            lag = None
        else:
            lag = _duration(delta) / t.step
            if lag.denominator != 1:
                raise NotRepresentable(f"{delta} is not a whole number of time steps ({t.step} s)")

        def predicate(s, o):
            same = np.ones((), dtype=bool)
            for i in range(it):
                same = same & (s[i] == o[i])
            later = (s[it] > o[it]) if lag is None else (s[it] - o[it] == int(lag))
            return same & later

        return self._binary(names, predicate)

    # --- feature-augmented relations ---
    def _feature_table(self, names: Sequence[str], fn: Callable[..., int]) -> np.ndarray:
        """Integer table over the value indices of the named features."""
        features = [self.features[n] for n in names]
        amounts = [f.amounts() for f in features]
        table = np.empty([len(a) for a in amounts], dtype=np.int64)
        for index in np.ndindex(*table.shape):
            table[index] = fn(*(amounts[i][j] for i, j in enumerate(index)))
        return table

    def _feature_binary(self, features: Sequence[str], predicate: Callable) -> Relation:
        """
        Like ``_binary`` over the spatial axes plus ``features``; the predicate
        receives spatial label grids and feature *index* grids.
        """
        self._require(*features)
        names = [a.name for a in self.spatial] + list(features)
        positions = [self.space.position(n) for n in names]
        sub = self.space.port.pick(positions)
        k, m = len(names), len(self.spatial)

        def on_grids(*grids):
            s = [self.axes[n].labels[g] if i < m else g for i, (n, g) in enumerate(zip(names, grids[:k]))]
            o = [self.axes[n].labels[g] if i < m else g for i, (n, g) in enumerate(zip(names, grids[k:]))]
            return predicate(s, o)

        small = Relation.from_predicate(sub, sub, on_grids)
        return extend(small, Layout(self.space.port, self.space.port, tuple(positions), tuple(positions)))

    def inside(self) -> Relation:
        """Subject ball strictly inside object ball: distance < r_object − r_subject, radii positive."""
        _, scale = _scale(self.spatial)
        radius = self.features.get("radius")
        if radius is None:
            raise SceneError("inside needs a 'radius' feature")
        radii = radius.amounts()
        table = np.array([[_bound(ro - rs, scale, strict=True) if rs > 0 and ro > 0 else -1
                           for ro in radii] for rs in radii], dtype=np.int64)
        m = len(self.spatial)

        def predicate(s, o):
            d2, _ = self._squared_distance(self.spatial, s[:m], o[:m])
            return d2 <= table[s[m], o[m]]

        return self._feature_binary(["radius"], predicate)

    def can_capture_hunt(self) -> Relation:
        """
        Hunter catches prey when the head-start is shorter than
        ``e_h·s_h − min(e_p, e_h)·s_p`` (running flat out, no acceleration).
        """
        if not {"endurance", "speed"} <= set(self.features):
            raise SceneError("can_capture needs 'endurance' and 'speed' features")
        _, scale = _scale(self.spatial)
        table = self._feature_table(
            ["endurance", "speed", "endurance", "speed"],
            lambda eh, sh, ep, sp: _bound(eh * sh - min(ep, eh) * sp, scale, strict=True),
        )
        m = len(self.spatial)

        def predicate(s, o):
            d2, _ = self._squared_distance(self.spatial, s[:m], o[:m])
            return d2 <= table[s[m], s[m + 1], o[m], o[m + 1]]

        return self._feature_binary(["endurance", "speed"], predicate)

    # --- nouns and predicates ---
    def _labels(self, factor: str, values: Iterable) -> list:
        if factor in self.axes:
            return [int(v) for v in values]
        if factor in self.features:
            return [Feature.label(v) for v in values]
        raise SceneError(f"grid {self.space.name!r} has no factor {factor!r}")

    def noun(self, values: Optional[Mapping[str, Iterable]] = None,
             members: Optional[Iterable[Sequence]] = None) -> Relation:
        """A state given by allowed values per factor, or by full element tuples."""
        if members is not None:
            factors = self.space.factors
            return self.space.state(tuple(self._labels(c.name, [v])[0] for c, v in zip(factors, m))
                                    for m in members)
        return self.space.where({f: self._labels(f, vs) for f, vs in (values or {}).items()})

    def predicate(self, factor: str, values: Iterable) -> Relation:
        """A feature predicate (e.g. fragrance ∈ {pungent}) as a filter box lifted over the other wires."""
        carrier = self.space.factor(factor)
        allowed = self._labels(factor, values)
        for v in allowed:
            if v not in carrier:
                raise SceneError(f"{v!r} is not a value of {factor!r}")
        box = filter_box(Relation.state(PortType((carrier,)), ((v,) for v in allowed)))
        return lift(box, Layout.endo(self.space.port, [self.space.position(factor)]))


# -------------------------
# scenes
# -------------------------
RELATION_KINDS = ("higher_than", "above", "close_to", "in_between", "chases", "inside", "can_capture_hunt")


def build_grid(spec: GridSpec, name: str = "grid", relations: Iterable[Mapping] = (),
               regions: Iterable[Mapping] = (), nouns: Iterable[Mapping] = (),
               predicates: Iterable[Mapping] = ()) -> Scene:
    """
    A scene over the grid. ``higher_than``, ``above``, ``in_between`` and,
    with a time axis, ``chases`` are always registered; ``relations`` adds
    named instances ``{name, kind, epsilon | delta}``; ``regions``,
    ``nouns`` and ``predicates`` add states and lifted filter boxes.
    """
    grid = Grid(spec, name)
    scene = Scene(grid.space, name)
    scene.grid = grid
    if "z" in grid.axes:
        scene.register("higher_than", grid.higher_than)
        scene.register("above", grid.above)
    if grid.spatial:
        scene.register("in_between", grid.in_between)
    if TIME in grid.axes:
        scene.register("chases", grid.chases)
    for r in relations:
        kind, label = r.get("kind"), r.get("name") or r.get("kind")
        if kind == "close_to":
            scene.register(label, lambda eps=r.get("epsilon"): grid.close_to(eps))
        elif kind == "chases":
            scene.register(label, lambda delta=r.get("delta"): grid.chases(delta))
        elif kind in RELATION_KINDS:
            scene.register(label, getattr(grid, kind))
        else:
            raise SceneError(f"unknown relation kind {kind!r} (known: {', '.join(RELATION_KINDS)})")
    for reg in regions:
        scene.register(reg["name"], lambda reg=reg: grid.region(reg.get("members"), reg.get("bounds")))
    for n in nouns:
        scene.register(n["name"], lambda n=n: grid.noun(n.get("values"), n.get("members")))
    for p in predicates:
        scene.register(p["name"], lambda p=p: grid.predicate(p["feature"], p["values"]))
    logger.info("grid scene %r: %s", name, grid.space)
    return scene
