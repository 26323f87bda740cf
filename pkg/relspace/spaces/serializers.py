# spaces/serializers.py
import json
import logging

from rest_framework import serializers

from relations.core import Relation
from relations.exceptions import SceneError

from .chess import Piece, build_chess
from .grid import Axis, Feature, GridSpec, build_grid, split_quantity
from .penrose import build_penrose
from .space import Scene
from .subway import TUEN_MA, build_subway

logger = logging.getLogger(__name__)

SPACE_KINDS = ("chess", "subway", "penrose", "grid")


# -------------------------
# Space parameters
# -------------------------
class PieceSerializer(serializers.Serializer):
    square = serializers.CharField()
    kind = serializers.CharField()
    colour = serializers.ChoiceField(choices=["white", "black"], default="white")


class AxisSerializer(serializers.Serializer):
    name = serializers.CharField()
    lo = serializers.IntegerField(default=0)
    hi = serializers.IntegerField()
    # "1 m", "30 s", "1/2 km" ...
    resolution = serializers.CharField(default="1 m")

    def validate(self, attrs):
        if attrs["hi"] < attrs["lo"]:
            raise serializers.ValidationError({"hi": "L'axe ne peut pas être vide."})
        try:
            amount, unit = split_quantity(attrs["resolution"], "m")
            attrs["axis"] = Axis(attrs["name"], attrs["lo"], attrs["hi"], amount, unit)
        except SceneError as exc:
            raise serializers.ValidationError({"resolution": str(exc)})
        return attrs


class FeatureSerializer(serializers.Serializer):
    name = serializers.CharField()
    values = serializers.ListField(child=serializers.JSONField(), allow_empty=False)
    unit = serializers.CharField(required=False, allow_null=True, default=None)


class RelationSpecSerializer(serializers.Serializer):
    name = serializers.CharField()
    kind = serializers.CharField()
    epsilon = serializers.CharField(required=False, allow_null=True)
    delta = serializers.CharField(required=False, allow_null=True)


class NounSerializer(serializers.Serializer):
    name = serializers.CharField()
    values = serializers.DictField(child=serializers.ListField(child=serializers.JSONField()), required=False)
    members = serializers.ListField(child=serializers.ListField(child=serializers.JSONField()), required=False)


class PredicateSerializer(serializers.Serializer):
    name = serializers.CharField()
    feature = serializers.CharField()
    values = serializers.ListField(child=serializers.JSONField(), allow_empty=False)


class SpaceSerializer(serializers.Serializer):
    kind = serializers.ChoiceField(choices=list(SPACE_KINDS))
    # chess
    fen = serializers.CharField(required=False, allow_null=True, default=None)
    pieces = PieceSerializer(many=True, required=False, default=list)
    # subway
    stations = serializers.ListField(child=serializers.CharField(), required=False)
    my_station = serializers.ListField(child=serializers.CharField(), required=False)
    # penrose
    steps = serializers.IntegerField(required=False, min_value=1)
    # grid
    axes = AxisSerializer(many=True, required=False)
    features = FeatureSerializer(many=True, required=False, default=list)
    relations = RelationSpecSerializer(many=True, required=False, default=list)
    nouns = NounSerializer(many=True, required=False, default=list)
    predicates = PredicateSerializer(many=True, required=False, default=list)

    def validate(self, attrs):
        if attrs["kind"] == "penrose" and "steps" not in attrs:
            raise serializers.ValidationError({"steps": "Nombre de marches requis."})
        if attrs["kind"] == "grid" and not attrs.get("axes"):
            raise serializers.ValidationError({"axes": "Au moins un axe requis."})
        return attrs


# -------------------------
# Inhabitants / regions
# -------------------------
class StateSpecSerializer(serializers.Serializer):
    """One of: registered ``relation`` name, element ``members``, or per-factor ``values``."""
    relation = serializers.CharField(required=False)
    members = serializers.ListField(child=serializers.ListField(child=serializers.JSONField()), required=False)
    values = serializers.DictField(child=serializers.ListField(child=serializers.JSONField()), required=False)

    def validate(self, attrs):
        given = [k for k in ("relation", "members", "values") if k in attrs]
        if len(given) > 1:
            raise serializers.ValidationError(f"choose one of relation/members/values, got {given}")
        return attrs


class InhabitantSerializer(serializers.Serializer):
    name = serializers.CharField()
    state = StateSpecSerializer(required=False, allow_null=True, default=None)


class RegionSerializer(serializers.Serializer):
    name = serializers.CharField()
    members = serializers.ListField(child=serializers.ListField(child=serializers.JSONField()), required=False)
    bounds = serializers.DictField(child=serializers.ListField(child=serializers.IntegerField(), min_length=2,
                                                               max_length=2), required=False)

    def validate(self, attrs):
        if ("members" in attrs) == ("bounds" in attrs):
            raise serializers.ValidationError("Une région a soit des membres, soit des bornes.")
        return attrs


class SceneSerializer(serializers.Serializer):
    name = serializers.CharField(required=False, default="")
    space = SpaceSerializer()
    inhabitants = InhabitantSerializer(many=True, required=False, default=list)
    regions = RegionSerializer(many=True, required=False, default=list)

    def validate_inhabitants(self, value):
        names = [i["name"].lower() for i in value]
        if len(set(names)) != len(names):
            raise serializers.ValidationError("Deux habitants portent le même nom.")
        return value

    def to_scene(self) -> Scene:
        data = self.validated_data
        scene = _build_space(data["space"], data["name"] or data["space"]["kind"])
        for region in data["regions"]:
            scene.register(region["name"], lambda region=region: _region(scene, region))
        for who in data["inhabitants"]:
            scene.add_inhabitant(who["name"], _state(scene, who["state"]) if who["state"] else None)
        logger.info("loaded %r", scene)
        return scene


# -------------------------
# builders
# -------------------------
def _build_space(space, name) -> Scene:
    kind = space["kind"]
    if kind == "chess":
        pieces = [Piece(p["square"], p["kind"], p["colour"]) for p in space["pieces"]]
        return build_chess(pieces, fen=space["fen"], name=name)
    if kind == "subway":
        options = {"my_station": space["my_station"]} if "my_station" in space else {}
        return build_subway(space.get("stations") or TUEN_MA, name=name, **options)
    if kind == "penrose":
        return build_penrose(space["steps"], name=name)
    spec = GridSpec(
        tuple(a["axis"] for a in space["axes"]),
        tuple(Feature(f["name"], tuple(f["values"]), f["unit"]) for f in space["features"]),
    )
    return build_grid(spec, name, relations=space["relations"], nouns=space["nouns"],
                      predicates=space["predicates"])


def _coerce(carrier, value):
    """JSON labels to carrier labels: ``"1"`` and ``1`` both name rank 1 or step 1."""
    for candidate in (value, str(value)):
        if candidate in carrier:
            return candidate
    try:
        if int(value) in carrier:
            return int(value)
    except (TypeError, ValueError):
        pass
    raise SceneError(f"{value!r} is not a value of {carrier.name!r}")


def _state(scene: Scene, spec) -> Relation:
    space, grid = scene.space, getattr(scene, "grid", None)
    if "relation" in spec:
        return scene.relation(spec["relation"])
    if grid is not None:
        return grid.noun(spec.get("values"), spec.get("members"))
    if "members" in spec:
        return space.state(tuple(_coerce(c, v) for c, v in zip(space.factors, m)) for m in spec["members"])
    return space.where({f: [_coerce(space.factor(f), v) for v in vs] for f, vs in spec.get("values", {}).items()})


def _region(scene: Scene, region) -> Relation:
    grid = getattr(scene, "grid", None)
    if grid is not None:
        return grid.region(region.get("members"), region.get("bounds"))
    if "bounds" in region:
        raise SceneError(f"region {region['name']!r}: bounds need a grid scene")
    return _state(scene, {"members": region["members"]})


def load_scene(data) -> Scene:
    if not isinstance(data, dict):
        raise SceneError("a scene is a JSON object")
    serializer = SceneSerializer(data=data)
    if not serializer.is_valid():
        raise SceneError(f"invalid scene: {dict(serializer.errors)}")
    return serializer.to_scene()


def read_scene(path) -> Scene:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SceneError(f"cannot read scene {path}: {exc}") from None
    return load_scene(data)
