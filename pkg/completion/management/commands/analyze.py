from completion.moment_engine import analyze
from completion.reports import render_analysis, to_json

from ._base import ScenarioCommand, engine_options, translate_errors


class Command(ScenarioCommand):
    help = "Exact E[R], E[R^2] and Var[R] of the completion time for a scenario file."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--json",
            action="store_true",
            dest="json_output",
            help="emit the MomentReport as one JSON object",
        )

    def handle(self, *args, **options):
        scenario_file = self.load(options["path"])
        with translate_errors():
            report = analyze(scenario_file.scenario, **engine_options())

        if options["json_output"]:
            self.stdout.write(to_json(report.to_dict()), ending="")
        else:
            self.stdout.write(render_analysis(scenario_file, report), ending="")
