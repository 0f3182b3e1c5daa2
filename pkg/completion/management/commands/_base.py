"""Shared plumbing for the scenario commands.

Exit codes are a stable contract:

    0  ok
    1  validation mismatch
    2  input error (unreadable, malformed or invalid scenario / arguments)
    3  degenerate model (q = 1, attempt cap exceeded, colliding atoms)
    4  numerical failure (quadrature, inconsistent moments)
"""

import logging
from contextlib import contextmanager

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from completion.exceptions import (
    AtomCollision,
    AttemptCapExceeded,
    CompletionError,
    InconsistentMoments,
    InvalidParameter,
    NeverCompletes,
    QuadratureFailure,
    ScenarioError,
    UndefinedMoment,
)
from completion.scenarios import load_scenario

logger = logging.getLogger(__name__)

EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_NUMERICAL = 4

EXIT_CODES = (
    (ScenarioError, EXIT_INPUT),
    (InvalidParameter, EXIT_INPUT),
    (NeverCompletes, EXIT_DEGENERATE),
    (AttemptCapExceeded, EXIT_DEGENERATE),
    (AtomCollision, EXIT_DEGENERATE),
    (UndefinedMoment, EXIT_DEGENERATE),
    (QuadratureFailure, EXIT_NUMERICAL),
    (InconsistentMoments, EXIT_NUMERICAL),
)


def exit_code_for(exc):
    for error_class, code in EXIT_CODES:
        if isinstance(exc, error_class):
            return code
    return EXIT_NUMERICAL


@contextmanager
def translate_errors():
    """Turn library errors into CommandError with the matching exit code."""
    try:
        yield
    except CompletionError as exc:
        raise CommandError(str(exc), returncode=exit_code_for(exc)) from exc


def engine_options():
    return {
        "near_degenerate": settings.NEAR_DEGENERATE_Q,
        "variance_slack": settings.VARIANCE_REL_SLACK,
        "abs_tol": settings.QUADRATURE_ABS_TOL,
        "rel_tol": settings.QUADRATURE_REL_TOL,
        "tail_mass": settings.QUADRATURE_TAIL_MASS,
        "limit": settings.QUADRATURE_SUBDIVISION_LIMIT,
    }


def simulation_defaults():
    return {
        "n": settings.SIMULATION_DEFAULT_N,
        "seed": settings.SIMULATION_DEFAULT_SEED,
        "max_attempts": settings.SIMULATION_MAX_ATTEMPTS,
    }


class ScenarioCommand(BaseCommand):
    """A command whose first argument is a scenario file."""

    requires_system_checks = []
    requires_migrations_checks = False

    def add_arguments(self, parser):
        parser.add_argument("path", help="scenario file (JSON)")

    def load(self, path):
        with translate_errors():
            scenario_file = load_scenario(path)
        logger.info("loaded scenario %s from %s", scenario_file.name, path)
        return scenario_file


class SimulatingCommand(ScenarioCommand):
    """A scenario command that also runs the Monte Carlo oracle."""

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--n", type=int, help="number of simulated paths")
        parser.add_argument("--seed", type=int, help="root seed of the campaign")
        parser.add_argument(
            "--max-attempts", type=int, dest="max_attempts", help="attempt cap per path"
        )
        parser.add_argument(
            "--workers",
            type=int,
            help="worker processes (default: BREAKDOWN_LAB_WORKERS or 1)",
        )

    def simulation_settings(self, scenario_file, options):
        overrides = {key: options.get(key) for key in ("n", "seed", "max_attempts")}
        with translate_errors():
            return scenario_file.simulation_settings(simulation_defaults(), overrides)

    def worker_count(self, options):
        workers = options.get("workers")
        if workers is None:
            workers = settings.SIMULATION_WORKERS
        if workers < 1:
            raise CommandError("workers must be ≥ 1", returncode=EXIT_INPUT)
        return workers
