# diagrams/evaluate.py
"""
Evaluation of diagrams into relations.

``contract`` (the default) turns every spider, cap and cup into a shared
index and contracts the remaining boxes pairwise, the way a tensor network
is contracted. ``layers`` walks the nodes in topological order and builds
the relation stratum by stratum with relation-core ``compose``/``tensor``;
it is slower but shares no code with the contraction, so each checks the
other.
"""
from __future__ import annotations

import logging
from collections.abc import Mapping
from typing import Optional, Sequence

import numpy as np

from relations import core
from relations.carriers import PortType
from relations.core import Relation
from relations.exceptions import TypeMismatch, UnboundBox

from .diagram import BOX, CAP, CUP, LITERAL, SPIDER, Diagram, Node

logger = logging.getLogger(__name__)


class Environment(Mapping):
    """Box name → Relation, checked against the box's declared ports."""

    def __init__(self, relations: Optional[Mapping[str, Relation]] = None, fallback=None):
        self._relations = dict(relations or {})
        self._fallback = fallback

    def __getitem__(self, name: str) -> Relation:
        if name in self._relations:
            return self._relations[name]
        if self._fallback is not None:
            return self._fallback(name)
        raise KeyError(name)

    def __iter__(self):
        return iter(self._relations)

    def __len__(self):
        return len(self._relations)

    def bind(self, node: Node) -> Relation:
        try:
            relation = self[node.name]
        except KeyError:
            raise UnboundBox(f"box {node.name!r} is not bound") from None
        if relation.dom != node.dom or relation.cod != node.cod:
            raise TypeMismatch(
                f"box {node.name!r} declared {node.dom} → {node.cod}, bound to {relation.dom} → {relation.cod}"
            )
        return relation

    def with_relations(self, **relations: Relation) -> Environment:
        merged = dict(self._relations)
        merged.update(relations)
        return Environment(merged, self._fallback)


def node_relation(node: Node, env: Environment) -> Relation:
    if node.kind == BOX:
        return env.bind(node)
    if node.kind == LITERAL:
        return node.relation
    if node.kind == SPIDER:
        return core.spider(node.carrier, len(node.dom), len(node.cod))
    if node.kind == CAP:
        return core.cap(node.carrier)
    if node.kind == CUP:
        return core.cup(node.carrier)
    raise ValueError(node.kind)


def evaluate(diagram: Diagram, env: Optional[Mapping] = None, strategy: str = "contract") -> Relation:
    env = env if isinstance(env, Environment) else Environment(env)
    if strategy == "contract":
        return contract(diagram, env)
    if strategy == "layers":
        return layers(diagram, env)
    raise ValueError(f"unknown evaluation strategy {strategy!r}")


# -------------------------
# contraction
# -------------------------
class _Classes:
    """Union-find over wire ids."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int):
        a, b = self.find(i), self.find(j)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def _diagonal(array: np.ndarray, labels: Sequence[int]) -> tuple[np.ndarray, list[int]]:
    """Collapse repeated labels of one operand onto their diagonal."""
    unique = list(dict.fromkeys(labels))
    if len(unique) == len(labels):
        return array, list(labels)
    ids = {label: i for i, label in enumerate(unique)}
    return np.einsum(array, [ids[l] for l in labels], list(range(len(unique)))), unique


def _sum_out(array: np.ndarray, labels: list[int], keep: set) -> tuple[np.ndarray, list[int]]:
    axes = tuple(i for i, l in enumerate(labels) if l not in keep)
    if not axes:
        return array, labels
    return array.any(axis=axes), [l for l in labels if l in keep]


def _embed(array: np.ndarray, labels: list[int], output: list[int], dims: dict) -> np.ndarray:
    """Spread ``array`` over ``output``; copies of one label land on their diagonal."""
    full = np.zeros([dims[l] for l in output], dtype=bool)
    grids = np.ix_(*[np.arange(dims[l]) for l in labels])
    full[tuple(grids[labels.index(l)] for l in output)] = array
    return full


def _pair(a, la, b, lb, keep: set, dims: dict) -> tuple[np.ndarray, list[int]]:
    """
    Contract two boolean operands: a batched matrix product when labels are
    summed out, a broadcast AND otherwise.
    """
    shared = [l for l in la if l in lb]
    batch = [l for l in shared if l in keep]
    summed = [l for l in shared if l not in keep]
    free_a = [l for l in la if l not in lb]
    free_b = [l for l in lb if l not in la]

    def size(labels):
        return int(np.prod([dims[l] for l in labels], dtype=np.int64)) if labels else 1

    ta = np.transpose(a, [la.index(l) for l in batch + free_a + summed])
    tb = np.transpose(b, [lb.index(l) for l in batch + summed + free_b])
    if summed:
        ma = ta.reshape(size(batch), size(free_a), size(summed)).astype(np.float32)
        mb = tb.reshape(size(batch), size(summed), size(free_b)).astype(np.float32)
        product = np.matmul(ma, mb) > 0
    else:
        product = ta.reshape(size(batch), size(free_a), 1) & tb.reshape(size(batch), 1, size(free_b))
    out = batch + free_a + free_b
    return product.reshape([dims[l] for l in out]), out


def contract(diagram: Diagram, env: Environment) -> Relation:
    edges = list(diagram.edges)
    classes = _Classes(len(edges))
    touching: dict[tuple, int] = {}
    for i, (s, t) in enumerate(edges):
        if s.node is not None:
            touching[("out", s.node, s.index)] = i
        if t.node is not None:
            touching[("in", t.node, t.index)] = i

    operands: list[tuple[np.ndarray, list[int]]] = []
    for k, node in enumerate(diagram.nodes):
        legs = [touching[("in", k, i)] for i in range(len(node.dom))]
        legs += [touching[("out", k, j)] for j in range(len(node.cod))]
        if node.kind in (SPIDER, CAP, CUP):
            for leg in legs[1:]:
                classes.union(legs[0], leg)
        else:
            operands.append((node_relation(node, env).data, legs))

    dims = {}
    for i, (s, t) in enumerate(edges):
        dims[classes.find(i)] = len(diagram._source_carrier(s))
    operands = [(np.asarray(a), [classes.find(l) for l in legs]) for a, legs in operands]

    boundary = diagram.boundary_inputs() + diagram.boundary_outputs()
    output = [classes.find(edges.index(e)) for e in boundary]
    # a label reaching the boundary twice is contracted once and embedded on its diagonal at the end
    unique = list(dict.fromkeys(output))
    # a wire class no box touches ranges over its whole carrier
    used = {l for _, legs in operands for l in legs}
    for label in sorted(set(dims) - used):
        operands.append((np.ones(dims[label], dtype=bool), [label]))

    out_set = set(unique)
    operands = [_diagonal(a, legs) for a, legs in operands]

    def needed(exclude: Sequence[int]) -> set:
        rest = {l for i, (_, legs) in enumerate(operands) if i not in exclude for l in legs}
        return rest | out_set

    operands = [_sum_out(a, legs, needed([i])) for i, (a, legs) in enumerate(operands)]

    while len(operands) > 1:
        best = None
        for i in range(len(operands)):
            for j in range(i + 1, len(operands)):
                li, lj = operands[i][1], operands[j][1]
                keep = needed([i, j])
                result = [l for l in dict.fromkeys(li + lj) if l in keep]
                cost = (not set(li) & set(lj), int(np.prod([dims[l] for l in result], dtype=np.float64)))
                if best is None or cost < best[0]:
                    best = (cost, i, j, keep)
        _, i, j, keep = best
        a, la = operands[i]
        b, lb = operands[j]
        merged = _pair(a, la, b, lb, keep, dims)
        operands = [op for k, op in enumerate(operands) if k not in (i, j)] + [merged]
        logger.debug("contracted %s with %s into %s", la, lb, merged[1])

    if operands:
        array, labels = operands[0]
        array, labels = _sum_out(array, labels, out_set)
    else:
        array, labels = np.ones((), dtype=bool), []
    array = np.transpose(array, [labels.index(l) for l in unique]) if unique else np.asarray(array, dtype=bool)
    if len(unique) < len(output):
        logger.debug("embedding %d boundary labels onto %d wires", len(unique), len(output))
        array = _embed(array, unique, output, dims)
    return Relation(diagram.dom, diagram.cod, np.ascontiguousarray(array).reshape(np.shape(array)))


# -------------------------
# layered evaluation
# -------------------------
def layers(diagram: Diagram, env: Environment, order: Optional[Sequence[int]] = None) -> Relation:
    """
    Strata of ``identity ⊗ node`` composed in topological ``order``
    (any valid order gives the same relation).
    """
    order = list(diagram.topological_order() if order is None else order)
    edges = list(diagram.edges)
    position = {e: i for i, e in enumerate(edges)}
    front = [position[e] for e in diagram.boundary_inputs()]
    front_type = diagram.dom
    result = core.identity(diagram.dom)
    for k in order:
        node = diagram.nodes[k]
        inputs = [position[e] for e in diagram.inputs_of(k)]
        try:
            taken = [front.index(i) for i in inputs]
        except ValueError:
            raise ValueError(f"order {order} is not topological") from None
        rest = [p for p in range(len(front)) if p not in taken]
        step = core.permute(front_type, rest + taken)
        step = core.compose(step, core.tensor(core.identity(front_type.pick(rest)), node_relation(node, env)))
        result = core.compose(result, step)
        front = [front[p] for p in rest] + [position[e] for e in diagram.outputs_of(k)]
        front_type = front_type.pick(rest) + node.cod
    final = [front.index(position[e]) for e in diagram.boundary_outputs()]
    result = core.compose(result, core.permute(front_type, final))
    return Relation(diagram.dom, diagram.cod, result.data)
