# diagrams/serializers.py
from rest_framework import serializers

from relations.carriers import Carrier, PortType, decode_label, encode_label
from relations.core import Relation
from relations.exceptions import MalformedDiagram

from .diagram import KINDS, LITERAL, Diagram, Edge, Node, Port


# -------------------------
# Port / Edge / Boundary
# -------------------------
class PortSerializer(serializers.Serializer):
    node = serializers.IntegerField(allow_null=True, min_value=0)
    port = serializers.IntegerField(min_value=0)


class EdgeSerializer(serializers.Serializer):
    source = PortSerializer()
    target = PortSerializer()


class BoundarySerializer(serializers.Serializer):
    side = serializers.ChoiceField(choices=["dom", "cod"])
    carrier = serializers.CharField()


class NodeSerializer(serializers.Serializer):
    id = serializers.IntegerField(min_value=0)
    kind = serializers.ChoiceField(choices=list(KINDS))
    name = serializers.CharField(required=False, allow_null=True)
    dom = serializers.ListField(child=serializers.CharField())
    cod = serializers.ListField(child=serializers.CharField())
    # literal nodes only: [[dom labels], [cod labels]] pairs
    pairs = serializers.ListField(child=serializers.JSONField(), required=False, allow_null=True)

    def validate(self, attrs):
        if attrs["kind"] == LITERAL and attrs.get("pairs") is None:
            raise serializers.ValidationError({"pairs": "Un nœud littéral doit porter ses paires."})
        return attrs


# -------------------------
# Diagram
# -------------------------
class DiagramSerializer(serializers.Serializer):
    carriers = serializers.DictField(child=serializers.ListField(child=serializers.JSONField(), allow_empty=True))
    nodes = NodeSerializer(many=True)
    edges = EdgeSerializer(many=True)
    boundary = BoundarySerializer(many=True)

    def validate_nodes(self, value):
        ids = [n["id"] for n in value]
        if ids != list(range(len(ids))):
            raise serializers.ValidationError("node ids must be 0..n-1 in order")
        return value

    def validate(self, attrs):
        names = set(attrs["carriers"])
        used = {c for n in attrs["nodes"] for c in n["dom"] + n["cod"]}
        used |= {b["carrier"] for b in attrs["boundary"]}
        missing = used - names
        if missing:
            raise serializers.ValidationError({"carriers": f"undeclared carriers: {sorted(missing)}"})
        return attrs

    def to_diagram(self) -> Diagram:
        data = self.validated_data
        carriers = {name: Carrier(name, [decode_label(v) for v in labels])
                    for name, labels in data["carriers"].items()}

        def port(names):
            return PortType(carriers[n] for n in names)

        nodes = []
        for n in data["nodes"]:
            dom, cod = port(n["dom"]), port(n["cod"])
            relation = None
            if n["kind"] == LITERAL:
                relation = Relation.from_labels(
                    dom, cod, (([decode_label(x) for x in d], [decode_label(x) for x in c]) for d, c in n["pairs"])
                )
            nodes.append(Node(n["kind"], dom, cod, name=n.get("name"), relation=relation))
        edges = [Edge(Port(e["source"]["node"], e["source"]["port"]), Port(e["target"]["node"], e["target"]["port"]))
                 for e in data["edges"]]
        dom = port([b["carrier"] for b in data["boundary"] if b["side"] == "dom"])
        cod = port([b["carrier"] for b in data["boundary"] if b["side"] == "cod"])
        return Diagram(dom, cod, nodes, edges)


def diagram_to_json(diagram: Diagram) -> dict:
    carriers: dict[str, Carrier] = {}

    def names(port):
        for c in port:
            known = carriers.setdefault(c.name, c)
            if known != c:
                raise MalformedDiagram(f"two different carriers are both called {c.name!r}")
        return [c.name for c in port]

    nodes = []
    for k, node in enumerate(diagram.nodes):
        entry = {"id": k, "kind": node.kind, "name": node.name, "dom": names(node.dom), "cod": names(node.cod)}
        if node.kind == LITERAL:
            entry["pairs"] = [[encode_label(d), encode_label(c)] for d, c in node.relation.labelled_pairs()]
        nodes.append(entry)
    boundary = [{"side": "dom", "carrier": n} for n in names(diagram.dom)]
    boundary += [{"side": "cod", "carrier": n} for n in names(diagram.cod)]
    edges = [{"source": {"node": s.node, "port": s.index}, "target": {"node": t.node, "port": t.index}}
             for s, t in diagram.edges]
    return {
        "carriers": {name: [encode_label(x) for x in c.elements] for name, c in carriers.items()},
        "nodes": nodes,
        "edges": edges,
        "boundary": boundary,
    }


def diagram_from_json(data) -> Diagram:
    serializer = DiagramSerializer(data=data)
    if not serializer.is_valid():
        raise MalformedDiagram(f"invalid diagram JSON: {serializer.errors}")
    return serializer.to_diagram()
