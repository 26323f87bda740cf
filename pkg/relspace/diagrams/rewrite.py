# diagrams/rewrite.py
"""Evaluation-preserving rewrites: spider fusion and yanking."""
from __future__ import annotations

import logging

import numpy as np

from relations.carriers import PortType
from relations.core import Relation
from relations.exceptions import MalformedDiagram

from .diagram import CAP, CUP, LITERAL, SPIDER, Diagram, Edge, Node, Port

logger = logging.getLogger(__name__)


class _Graph:
    """Mutable working copy of a diagram; node ids are stable until rebuilt."""

    def __init__(self, diagram: Diagram):
        self.dom, self.cod = diagram.dom, diagram.cod
        self.nodes = dict(enumerate(diagram.nodes))
        self.edges = list(diagram.edges)

    def copy(self) -> _Graph:
        g = _Graph.__new__(_Graph)
        g.dom, g.cod = self.dom, self.cod
        g.nodes = dict(self.nodes)
        g.edges = list(self.edges)
        return g

    def into(self, k: int) -> list[Edge]:
        return sorted((e for e in self.edges if e.target.node == k), key=lambda e: e.target.index)

    def out_of(self, k: int) -> list[Edge]:
        return sorted((e for e in self.edges if e.source.node == k), key=lambda e: e.source.index)

    def diagram(self) -> Diagram:
        ids = sorted(self.nodes)
        remap = {old: new for new, old in enumerate(ids)}

        def port(p: Port) -> Port:
            return p if p.node is None else Port(remap[p.node], p.index)

        return Diagram(self.dom, self.cod, [self.nodes[k] for k in ids],
                       [Edge(port(s), port(t)) for s, t in self.edges])


def _merge(g: _Graph, u: int, v: int) -> _Graph:
    g = g.copy()
    pair = (u, v)
    inputs = [e for k in pair for e in g.into(k) if e.source.node not in pair]
    outputs = [e for k in pair for e in g.out_of(k) if e.target.node not in pair]
    x = g.nodes[u].carrier
    g.edges = [e for e in g.edges if e.source.node not in pair and e.target.node not in pair]
    del g.nodes[v]
    if not inputs and not outputs:
        # a closed network is the scalar "the carrier is inhabited"
        scalar = Relation(PortType.unit(), PortType.unit(), np.array(len(x) > 0))
        g.nodes[u] = Node(LITERAL, PortType.unit(), PortType.unit(), name="loop", relation=scalar)
        return g
    g.nodes[u] = Node(SPIDER, PortType((x,) * len(inputs)), PortType((x,) * len(outputs)))
    g.edges += [Edge(e.source, Port(u, i)) for i, e in enumerate(inputs)]
    g.edges += [Edge(Port(u, j), e.target) for j, e in enumerate(outputs)]
    return g


def fuse_spiders(diagram: Diagram) -> Diagram:
    """
    Merge spiders joined by a wire into one spider and drop plain
    ``spider(1, 1)`` wires. Merges that would close a cycle are skipped.
    """
    g = _Graph(diagram)
    blocked: set[tuple[int, int]] = set()
    merges = 0
    changed = True
    while changed:
        changed = False
        for s, t in g.edges:
            if s.node is None or t.node is None or s.node == t.node:
                continue
            if g.nodes[s.node].kind != SPIDER or g.nodes[t.node].kind != SPIDER:
                continue
            pair = (min(s.node, t.node), max(s.node, t.node))
            if pair in blocked:
                continue
            candidate = _merge(g, *pair)
            try:
                candidate.diagram()
            except MalformedDiagram:
                blocked.add(pair)
                continue
            g, merges, changed = candidate, merges + 1, True
            break

    dropped = 0
    for k in [k for k, n in g.nodes.items() if n.kind == SPIDER and len(n.dom) == 1 and len(n.cod) == 1]:
        (incoming,), (outgoing,) = g.into(k), g.out_of(k)
        g.edges = [e for e in g.edges if e not in (incoming, outgoing)] + [Edge(incoming.source, outgoing.target)]
        del g.nodes[k]
        dropped += 1
    logger.debug("fused %d spider pairs, dropped %d plain wires", merges, dropped)
    return g.diagram()


def yank(diagram: Diagram) -> Diagram:
    """Straighten cap-then-cup zigzags into plain wires."""
    g = _Graph(diagram)
    blocked: set[tuple[int, int]] = set()
    yanks = 0
    changed = True
    while changed:
        changed = False
        for edge in g.edges:
            c, u = edge.source.node, edge.target.node
            if c is None or u is None or (c, u) in blocked:
                continue
            if g.nodes[c].kind != CAP or g.nodes[u].kind != CUP:
                continue
            (other_leg,) = [e for e in g.out_of(c) if e != edge]
            (other_in,) = [e for e in g.into(u) if e != edge]
            if other_leg == other_in:
                # closed loop, nothing to straighten
                blocked.add((c, u))
                continue
            candidate = g.copy()
            candidate.edges = [e for e in g.edges if e not in (edge, other_leg, other_in)]
            candidate.edges.append(Edge(other_in.source, other_leg.target))
            del candidate.nodes[c], candidate.nodes[u]
            try:
                candidate.diagram()
            except MalformedDiagram:
                blocked.add((c, u))
                continue
            g, yanks, changed = candidate, yanks + 1, True
            break
    logger.debug("yanked %d zigzags", yanks)
    return g.diagram()


def normalize(diagram: Diagram) -> Diagram:
    return fuse_spiders(yank(diagram))
