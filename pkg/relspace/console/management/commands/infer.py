from django.core.management.base import BaseCommand, CommandError

from inference.knowledge import KnowledgeState, consistent, entails, update

from console.cli import NOT_ENTAILED, load_inputs, reporting_errors
from console.demos import consistency, verdict


class Command(BaseCommand):
    help = "Mettre à jour la connaissance avec des prémisses et tester une conclusion."

    def add_arguments(self, parser):
        parser.add_argument("--scene", required=True, help="scene JSON file")
        parser.add_argument("--lexicon", required=True, help="lexicon JSON file")
        parser.add_argument("--premise", action="append", default=[], help="repeatable")
        parser.add_argument("--conclusion", required=True)

    def handle(self, *args, **options):
        with reporting_errors():
            scene, lexicon = load_inputs(options["scene"], options["lexicon"])
            k = KnowledgeState.initial(scene, lexicon)
            for premise in options["premise"]:
                k = update(k, premise)
                self.stdout.write(f"{premise}: {len(k.joint)} world(s)")
            entailed = entails(k, options["conclusion"])

        if consistent(k):
            self.stdout.write(consistency(k))
        else:
            self.stdout.write(self.style.WARNING(consistency(k)))
        if entailed:
            self.stdout.write(self.style.SUCCESS(verdict(True)))
            return
        self.stdout.write(self.style.ERROR(verdict(False)))
        raise CommandError(f"{options['conclusion']!r} does not follow", returncode=NOT_ENTAILED)
