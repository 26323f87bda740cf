from django.core.management.base import BaseCommand, CommandError

from console.cli import NOT_ENTAILED, reporting_errors
from console.demos import DEMOS, run_demo


class Command(BaseCommand):
    help = "Rejouer un scénario intégré et comparer attendu et calculé."

    def add_arguments(self, parser):
        parser.add_argument("name", choices=list(DEMOS) + ["all"])

    def handle(self, *args, **options):
        names = list(DEMOS) if options["name"] == "all" else [options["name"]]
        failed = []
        for name in names:
            with reporting_errors():
                report = run_demo(name)
            self.stdout.write(self.style.MIGRATE_HEADING(f"== {name}"))
            for check in report.checks:
                line = f"{check.label}: expected {check.expected}, computed {check.computed}"
                self.stdout.write(self.style.SUCCESS(f"ok  {line}") if check.ok else self.style.ERROR(f"BAD {line}"))
            for line in report.lines:
                self.stdout.write(line)
            if not report.ok:
                failed.append(name)
        if failed:
            raise CommandError(f"mismatch in {', '.join(failed)}", returncode=NOT_ENTAILED)
