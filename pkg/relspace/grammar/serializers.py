# grammar/serializers.py
import json

from rest_framework import serializers

from relations.exceptions import BadTypeString

from .lexicon import WIRINGS, Lexicon, LexiconEntry
from .types import parse_type


class LexiconEntrySerializer(serializers.Serializer):
    word = serializers.CharField()
    type = serializers.CharField()
    relation = serializers.CharField(required=False, allow_null=True, default=None)
    wiring = serializers.ChoiceField(choices=list(WIRINGS))
    # relative pronouns only: participants of the clause they open
    arity = serializers.IntegerField(required=False, default=2, min_value=1, max_value=2)

    def validate_word(self, value):
        value = " ".join(value.split())
        if not value:
            raise serializers.ValidationError("Le mot ne peut pas être vide.")
        return value

    def validate_type(self, value):
        try:
            return parse_type(value)
        except BadTypeString as exc:
            raise serializers.ValidationError(str(exc))

    def validate(self, attrs):
        try:
            attrs["entry"] = LexiconEntry(
                attrs["word"], attrs["type"], attrs["wiring"], attrs.get("relation"), attrs.get("arity", 2)
            )
        except BadTypeString as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def to_representation(self, instance):
        data = {"word": instance.word, "type": instance.type.code(), "relation": instance.relation,
                "wiring": instance.wiring}
        if instance.wiring == "relpron":
            data["arity"] = instance.arity
        return data


def load_lexicon(data) -> Lexicon:
    if not isinstance(data, list):
        raise BadTypeString("a lexicon is a JSON array of entries")
    serializer = LexiconEntrySerializer(data=data, many=True)
    if not serializer.is_valid():
        problems = {i: err for i, err in enumerate(serializer.errors) if err}
        raise BadTypeString(f"invalid lexicon: {problems}")
    return Lexicon(item["entry"] for item in serializer.validated_data)


def read_lexicon(path) -> Lexicon:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise BadTypeString(f"cannot read lexicon {path}: {exc}") from None
    return load_lexicon(data)


def dump_lexicon(lexicon: Lexicon) -> list:
    return LexiconEntrySerializer(list(lexicon), many=True).data
