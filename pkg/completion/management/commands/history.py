from completion.models import ValidationRun
from django.core.management.base import BaseCommand


class Command(BaseCommand):
    help = "List recorded validation runs, newest first."

    def add_arguments(self, parser):
        parser.add_argument("--scenario", help="only runs of this scenario name")
        verdict = parser.add_mutually_exclusive_group()
        verdict.add_argument("--passed", action="store_true", help="only passed runs")
        verdict.add_argument("--failed", action="store_true", help="only failed runs")
        parser.add_argument("--limit", type=int, default=20)

    def handle(self, *args, **options):
        runs = ValidationRun.objects.all()
        if options["passed"]:
            runs = runs.passed()
        if options["failed"]:
            runs = runs.failed()
        if options["scenario"]:
            runs = runs.for_scenario(options["scenario"])
        runs = runs[: options["limit"]]

        if not runs:
            self.stdout.write("No validation runs recorded.")
            return
        for run in runs:
            self.stdout.write(
                f"{run.created_at:%Y-%m-%d %H:%M}  {run}  "
                f"z(E[R])={run.z_e_r:.3g}  z(E[R^2])={run.z_e_r2:.3g}  "
                f"max|z|={run.worst_z:.3g}/{run.z_threshold:g}"
            )
