# diagrams/diagram.py
"""
String diagrams as port graphs.

A diagram has a boundary (``dom`` wires entering at the top, ``cod`` wires
leaving at the bottom) and a list of nodes. Every wire is an ``Edge`` from a
*source* (a node output, or a boundary input when ``node is None``) to a
*target* (a node input, or a boundary output when ``node is None``).
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from relations.carriers import Carrier, PortType, as_port
from relations.core import Relation
from relations.exceptions import MalformedDiagram, TypeMismatch

logger = logging.getLogger(__name__)

BOX, LITERAL, SPIDER, CAP, CUP = "box", "literal", "spider", "cap", "cup"
KINDS = (BOX, LITERAL, SPIDER, CAP, CUP)
# nodes that only merge wire indices
FROBENIUS = (SPIDER, CAP, CUP)


class Port(NamedTuple):
    node: Optional[int]
    index: int


class Edge(NamedTuple):
    source: Port
    target: Port


@dataclass(frozen=True, eq=False)
class Node:
    kind: str
    dom: PortType
    cod: PortType
    name: Optional[str] = None
    relation: Optional[Relation] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedDiagram(f"unknown node kind {self.kind!r}")
        if self.kind == LITERAL and self.relation is None:
            raise MalformedDiagram("literal node without a relation")
        if self.kind == BOX and not self.name:
            raise MalformedDiagram("box node without a name")
        if self.kind in FROBENIUS:
            legs = tuple(self.dom) + tuple(self.cod)
            if not legs or any(c != legs[0] for c in legs):
                raise MalformedDiagram(f"{self.kind} legs must share one carrier")

    @property
    def carrier(self) -> Carrier:
        return (tuple(self.dom) + tuple(self.cod))[0]

    def __repr__(self):
        label = self.name or self.kind
        return f"{label}: {self.dom} → {self.cod}"


class Diagram:
    """An immutable, validated, acyclic port graph."""

    __slots__ = ("dom", "cod", "nodes", "edges", "_order")

    def __init__(self, dom, cod, nodes: Sequence[Node], edges: Sequence[Edge]):
        object.__setattr__(self, "dom", as_port(dom))
        object.__setattr__(self, "cod", as_port(cod))
        object.__setattr__(self, "nodes", tuple(nodes))
        object.__setattr__(self, "edges", tuple(Edge(Port(*e[0]), Port(*e[1])) for e in edges))
        object.__setattr__(self, "_order", None)
        self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("Diagram is immutable")

    # --- validation ---
    def _source_carrier(self, port: Port) -> Carrier:
        if port.node is None:
            return self.dom[port.index]
        return self.nodes[port.node].cod[port.index]

    def _target_carrier(self, port: Port) -> Carrier:
        if port.node is None:
            return self.cod[port.index]
        return self.nodes[port.node].dom[port.index]

    def _validate(self):
        sources = {Port(None, i) for i in range(len(self.dom))}
        targets = {Port(None, i) for i in range(len(self.cod))}
        for k, node in enumerate(self.nodes):
            sources |= {Port(k, i) for i in range(len(node.cod))}
            targets |= {Port(k, i) for i in range(len(node.dom))}
        seen_sources, seen_targets = set(), set()
        for edge in self.edges:
            if edge.source not in sources:
                raise MalformedDiagram(f"edge from non-existent port {edge.source}")
            if edge.target not in targets:
                raise MalformedDiagram(f"edge into non-existent port {edge.target}")
            if edge.source in seen_sources:
                raise MalformedDiagram(f"port {edge.source} is used twice")
            if edge.target in seen_targets:
                raise MalformedDiagram(f"port {edge.target} is fed twice")
            seen_sources.add(edge.source)
            seen_targets.add(edge.target)
            a, b = self._source_carrier(edge.source), self._target_carrier(edge.target)
            if a != b:
                raise TypeMismatch(f"wire {edge.source} → {edge.target} joins {a.name} to {b.name}")
        if seen_sources != sources:
            raise MalformedDiagram(f"dangling outputs: {sorted(sources - seen_sources, key=str)}")
        if seen_targets != targets:
            raise MalformedDiagram(f"unconnected inputs: {sorted(targets - seen_targets, key=str)}")
        self.topological_order()

    # --- graph views ---
    def topological_order(self) -> list[int]:
        """Nodes sorted so that every edge points forward; ties by index."""
        order = getattr(self, "_order", None)
        if order is not None:
            return list(order)
        indegree = [0] * len(self.nodes)
        successors = [[] for _ in self.nodes]
        for s, t in self.edges:
            if s.node is not None and t.node is not None:
                indegree[t.node] += 1
                successors[s.node].append(t.node)
        ready = [k for k, d in enumerate(indegree) if d == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            k = heapq.heappop(ready)
            order.append(k)
            for j in successors[k]:
                indegree[j] -= 1
                if indegree[j] == 0:
                    heapq.heappush(ready, j)
        if len(order) != len(self.nodes):
            raise MalformedDiagram("diagram has a cycle")
        object.__setattr__(self, "_order", tuple(order))
        return order

    def edge_into(self, port: Port) -> Edge:
        for e in self.edges:
            if e.target == port:
                return e
        raise KeyError(port)

    def edge_from(self, port: Port) -> Edge:
        for e in self.edges:
            if e.source == port:
                return e
        raise KeyError(port)

    def inputs_of(self, k: int) -> list[Edge]:
        by_target = {e.target: e for e in self.edges}
        return [by_target[Port(k, i)] for i in range(len(self.nodes[k].dom))]

    def outputs_of(self, k: int) -> list[Edge]:
        by_source = {e.source: e for e in self.edges}
        return [by_source[Port(k, i)] for i in range(len(self.nodes[k].cod))]

    def boundary_outputs(self) -> list[Edge]:
        by_target = {e.target: e for e in self.edges}
        return [by_target[Port(None, i)] for i in range(len(self.cod))]

    def boundary_inputs(self) -> list[Edge]:
        by_source = {e.source: e for e in self.edges}
        return [by_source[Port(None, i)] for i in range(len(self.dom))]

    def count(self, kind: str) -> int:
        return sum(1 for n in self.nodes if n.kind == kind)

    def box_names(self) -> set[str]:
        return {n.name for n in self.nodes if n.kind == BOX}

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return f"Diagram({self.dom} → {self.cod}, {len(self.nodes)} nodes, {len(self.edges)} wires)"

    # --- constructors ---
    @classmethod
    def id(cls, t) -> Diagram:
        t = as_port(t)
        return cls(t, t, [], [Edge(Port(None, i), Port(None, i)) for i in range(len(t))])

    @classmethod
    def single(cls, node: Node) -> Diagram:
        edges = [Edge(Port(None, i), Port(0, i)) for i in range(len(node.dom))]
        edges += [Edge(Port(0, i), Port(None, i)) for i in range(len(node.cod))]
        return cls(node.dom, node.cod, [node], edges)

    @classmethod
    def box(cls, name: str, dom, cod) -> Diagram:
        return cls.single(Node(BOX, as_port(dom), as_port(cod), name=name))

    @classmethod
    def literal(cls, relation: Relation, name: Optional[str] = None) -> Diagram:
        return cls.single(Node(LITERAL, relation.dom, relation.cod, name=name, relation=relation))

    @classmethod
    def state(cls, relation: Relation, name: Optional[str] = None) -> Diagram:
        if not relation.is_state:
            raise TypeMismatch(f"state literal needs dom ⟨⟩, got {relation.dom}")
        return cls.literal(relation, name)

    @classmethod
    def spider(cls, x: Carrier, m: int, n: int) -> Diagram:
        if m + n < 1:
            raise MalformedDiagram("spider needs at least one leg")
        return cls.single(Node(SPIDER, PortType((x,) * m), PortType((x,) * n)))

    @classmethod
    def cap(cls, x: Carrier) -> Diagram:
        return cls.single(Node(CAP, PortType.unit(), PortType((x, x))))

    @classmethod
    def cup(cls, x: Carrier) -> Diagram:
        return cls.single(Node(CUP, PortType((x, x)), PortType.unit()))

    @classmethod
    def permutation(cls, t, order: Sequence[int]) -> Diagram:
        """Wire ``order[i]`` of the input becomes output wire ``i``."""
        t = as_port(t)
        if sorted(order) != list(range(len(t))):
            raise MalformedDiagram(f"{list(order)} is not a permutation of {len(t)} wires")
        return cls(t, t.pick(order), [], [Edge(Port(None, o), Port(None, i)) for i, o in enumerate(order)])

    @classmethod
    def swap(cls, a, b) -> Diagram:
        a, b = as_port(a), as_port(b)
        order = list(range(len(a), len(a) + len(b))) + list(range(len(a)))
        return cls.permutation(a + b, order)

    # --- composition ---
    def then(self, other: Diagram) -> Diagram:
        if self.cod != other.dom:
            raise TypeMismatch(f"then: {self.cod} does not match {other.dom}")
        offset = len(self.nodes)
        feeding = {e.target.index: e.source for e in self.edges if e.target.node is None}
        edges = [e for e in self.edges if e.target.node is not None]
        for s, t in other.edges:
            s = feeding[s.index] if s.node is None else Port(s.node + offset, s.index)
            t = t if t.node is None else Port(t.node + offset, t.index)
            edges.append(Edge(s, t))
        return Diagram(self.dom, other.cod, self.nodes + other.nodes, edges)

    def tensor(self, other: Diagram) -> Diagram:
        offset, di, ci = len(self.nodes), len(self.dom), len(self.cod)
        edges = list(self.edges)
        for s, t in other.edges:
            s = Port(None, s.index + di) if s.node is None else Port(s.node + offset, s.index)
            t = Port(None, t.index + ci) if t.node is None else Port(t.node + offset, t.index)
            edges.append(Edge(s, t))
        return Diagram(self.dom + other.dom, self.cod + other.cod, self.nodes + other.nodes, edges)

    __rshift__ = then
    __matmul__ = tensor

    @staticmethod
    def tensor_all(diagrams: Sequence[Diagram]) -> Diagram:
        result = Diagram.id(PortType.unit())
        for d in diagrams:
            result = result.tensor(d)
        return result


class DiagramBuilder:
    """
    Dataflow-style construction: add nodes by naming the source ports that
    feed them, then close the diagram by naming its outputs.

        b = DiagramBuilder(dom)
        x, y = b.add(Node(...), b.inputs)
        diagram = b.build([y, x])
    """

    def __init__(self, dom=PortType.unit()):
        self.dom = as_port(dom)
        self.nodes: list[Node] = []
        self.edges: list[Edge] = []
        self._carriers: dict[Port, Carrier] = {Port(None, i): c for i, c in enumerate(self.dom)}

    @property
    def inputs(self) -> list[Port]:
        return [Port(None, i) for i in range(len(self.dom))]

    def add(self, node: Node, sources: Sequence[Port] = ()) -> list[Port]:
        sources = list(sources)
        if len(sources) != len(node.dom):
            raise MalformedDiagram(f"{node!r} takes {len(node.dom)} inputs, got {len(sources)}")
        k = len(self.nodes)
        self.nodes.append(node)
        for i, s in enumerate(sources):
            self.edges.append(Edge(s, Port(k, i)))
        outputs = [Port(k, j) for j in range(len(node.cod))]
        for j, p in enumerate(outputs):
            self._carriers[p] = node.cod[j]
        return outputs

    # shorthands
    def box(self, name: str, dom, cod, sources: Sequence[Port] = ()) -> list[Port]:
        return self.add(Node(BOX, as_port(dom), as_port(cod), name=name), sources)

    def literal(self, relation: Relation, sources: Sequence[Port] = (), name: Optional[str] = None) -> list[Port]:
        return self.add(Node(LITERAL, relation.dom, relation.cod, name=name, relation=relation), sources)

    def spider(self, x: Carrier, sources: Sequence[Port], n: int) -> list[Port]:
        return self.add(Node(SPIDER, PortType((x,) * len(sources)), PortType((x,) * n)), sources)

    def cap(self, x: Carrier) -> list[Port]:
        return self.add(Node(CAP, PortType.unit(), PortType((x, x))))

    def cup(self, x: Carrier, sources: Sequence[Port]) -> list[Port]:
        return self.add(Node(CUP, PortType((x, x)), PortType.unit()), sources)

    def embed(self, diagram: Diagram, sources: Sequence[Port] = ()) -> list[Port]:
        """Splice a whole diagram in, fed by ``sources``; returns its outputs."""
        sources = list(sources)
        if len(sources) != len(diagram.dom):
            raise MalformedDiagram(f"{diagram!r} takes {len(diagram.dom)} inputs, got {len(sources)}")
        offset = len(self.nodes)
        self.nodes.extend(diagram.nodes)
        for k, node in enumerate(diagram.nodes):
            for j, c in enumerate(node.cod):
                self._carriers[Port(k + offset, j)] = c
        outputs = [None] * len(diagram.cod)
        for s, t in diagram.edges:
            s = sources[s.index] if s.node is None else Port(s.node + offset, s.index)
            if t.node is None:
                outputs[t.index] = s
            else:
                self.edges.append(Edge(s, Port(t.node + offset, t.index)))
        return outputs

    def carrier(self, port: Port) -> Carrier:
        return self._carriers[port]

    def build(self, outputs: Sequence[Port]) -> Diagram:
        cod = PortType(self._carriers[p] for p in outputs)
        edges = self.edges + [Edge(p, Port(None, j)) for j, p in enumerate(outputs)]
        return Diagram(self.dom, cod, self.nodes, edges)
