import json

from django.core.management.base import BaseCommand

from diagrams.diagram import Diagram
from diagrams.rewrite import normalize
from diagrams.serializers import diagram_to_json
from grammar.lexicon import phrase_diagram
from grammar.types import N, S
from relations.exceptions import NoParse

from console.cli import load_inputs, reporting_errors


class Command(BaseCommand):
    help = "Afficher le diagramme d'une phrase (boîtes, câblé, puis réécrit) en JSON."

    def add_arguments(self, parser):
        parser.add_argument("--lexicon", required=True, help="lexicon JSON file")
        parser.add_argument("--phrase", required=True)
        parser.add_argument("--scene", help="optional scene JSON file; without it every wire is a placeholder")

    def handle(self, *args, **options):
        with reporting_errors():
            scene, lexicon = load_inputs(options.get("scene"), options["lexicon"])
            tokens = lexicon.tokenize(options["phrase"])
            boxes = self._phrase(tokens, lexicon, scene, expand=False)
            expanded = self._phrase(tokens, lexicon, scene, expand=True)
            rewritten = normalize(expanded)
            payload = {
                "phrase": " ".join(tokens),
                "diagram": diagram_to_json(boxes),
                "expanded": diagram_to_json(expanded),
                "rewritten": diagram_to_json(rewritten),
            }
        self.stdout.write(json.dumps(payload, indent=2, ensure_ascii=False))

    @staticmethod
    def _phrase(tokens, lexicon, scene, expand) -> Diagram:
        try:
            return phrase_diagram(tokens, lexicon, scene, expand=expand, target=N).diagram
        except NoParse:
            return phrase_diagram(tokens, lexicon, scene, expand=expand, target=S).diagram
