import logging

from completion.models import ValidationRun
from completion.moment_engine import analyze
from completion.reports import render_validation
from completion.simulator import estimate_moments
from completion.validation import compare
from django.conf import settings
from django.core.management.base import CommandError

from ._base import EXIT_MISMATCH, SimulatingCommand, engine_options, translate_errors

logger = logging.getLogger(__name__)


class Command(SimulatingCommand):
    help = (
        "Compare the analytic E[R] and E[R^2] with the Monte Carlo oracle; "
        "exit 1 when either |z| exceeds the threshold."
    )

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--record",
            action="store_true",
            help="store the outcome in the run history database",
        )

    def handle(self, *args, **options):
        scenario_file = self.load(options["path"])
        run = self.simulation_settings(scenario_file, options)
        workers = self.worker_count(options)

        with translate_errors():
            report = analyze(scenario_file.scenario, **engine_options())
            estimate = estimate_moments(
                scenario_file.scenario,
                run.n,
                run.seed,
                run.max_attempts,
                workers=workers,
                histogram_bins=settings.SIMULATION_HISTOGRAM_BINS,
            )
        outcome = compare(report, estimate, settings.VALIDATION_Z_THRESHOLD)
        self.stdout.write(render_validation(scenario_file, estimate, outcome), ending="")

        if options["record"]:
            stored = ValidationRun.objects.record(scenario_file, estimate, outcome, workers)
            logger.info("recorded validation run %s", stored.pk)

        if not outcome.passed:
            worst = max(
                (row for row in outcome.rows if not row.informational),
                key=lambda row: abs(row.z),
            )
            raise CommandError(
                f"validation failed: {worst.quantity} z={worst.z:.3g}", returncode=EXIT_MISMATCH
            )
