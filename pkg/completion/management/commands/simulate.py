from completion.reports import render_simulation, to_json
from completion.simulator import estimate_moments
from django.conf import settings

from ._base import SimulatingCommand, translate_errors


class Command(SimulatingCommand):
    help = "Monte Carlo estimates of E[R], E[R^2] and the attempt count for a scenario file."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--json",
            action="store_true",
            dest="json_output",
            help="emit the SimulationEstimate as one JSON object",
        )

    def handle(self, *args, **options):
        scenario_file = self.load(options["path"])
        run = self.simulation_settings(scenario_file, options)
        with translate_errors():
            estimate = estimate_moments(
                scenario_file.scenario,
                run.n,
                run.seed,
                run.max_attempts,
                workers=self.worker_count(options),
                histogram_bins=settings.SIMULATION_HISTOGRAM_BINS,
            )

        if options["json_output"]:
            self.stdout.write(to_json(estimate.to_dict()), ending="")
        else:
            self.stdout.write(
                render_simulation(scenario_file, estimate, run.max_attempts), ending=""
            )
