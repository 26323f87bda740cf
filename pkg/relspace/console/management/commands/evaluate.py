import json

from django.core.management.base import BaseCommand, CommandError

from diagrams.serializers import diagram_to_json
from grammar.lexicon import parse_and_evaluate, phrase_diagram
from grammar.types import N, S
from relations.exceptions import NoParse

from console.cli import BAD_INPUT, load_inputs, reporting_errors
from console.render import RENDER_FORMATS, as_json, render


class Command(BaseCommand):
    help = "Évaluer une phrase nominale ou une phrase dans une scène et afficher l'état obtenu."

    def add_arguments(self, parser):
        parser.add_argument("--scene", required=True, help="scene JSON file")
        parser.add_argument("--lexicon", required=True, help="lexicon JSON file")
        parser.add_argument("--phrase", required=True)
        parser.add_argument("--render", choices=RENDER_FORMATS, default="text")
        parser.add_argument("--dump-diagram", action="store_true", help="also print the phrase diagram as JSON")

    def handle(self, *args, **options):
        with reporting_errors():
            scene, lexicon = load_inputs(options["scene"], options["lexicon"])
            tokens = lexicon.tokenize(options["phrase"])
            state = parse_and_evaluate(tokens, lexicon, scene)
            diagram = None
            if options["dump_diagram"]:
                diagram = self._diagram(tokens, lexicon, scene)

        if options["render"] == "json":
            payload = {"phrase": " ".join(tokens), "state": as_json(state)}
            if diagram is not None:
                payload["diagram"] = diagram
            self.stdout.write(json.dumps(payload, indent=2, ensure_ascii=False))
            return
        for line in render(state, scene):
            self.stdout.write(line)
        if diagram is not None:
            self.stdout.write(json.dumps(diagram, indent=2, ensure_ascii=False))
        self.stdout.write(self.style.SUCCESS(f"{len(state)} élément(s)"))

    def _diagram(self, tokens, lexicon, scene):
        for target in (N, S):
            try:
                return diagram_to_json(phrase_diagram(tokens, lexicon, scene, target=target).diagram)
            except NoParse:
                continue
        raise CommandError("no parse", returncode=BAD_INPUT)
