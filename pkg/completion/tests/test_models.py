from datetime import timedelta

from django.test import TestCase
from django.utils import timezone

from completion.models import ValidationRun
from completion.scenarios import parse_scenario
from completion.simulator import SimulationEstimate
from completion.validation import ComparisonRow, ValidationOutcome

SCENARIO = parse_scenario(
    '{"name": "unit", "uptime": {"family": "exponential", "rate": 1.0},'
    ' "downtime": {"family": "deterministic", "value": 0.0},'
    ' "proc": {"family": "exponential", "rate": 1.0}}',
    path="unit.json",
)


def outcome(z_mean, z_square, threshold=5.0):
    rows = (
        ComparisonRow("E[R]", 1.0, 1.0 + z_mean * 0.01, 0.01, z_mean),
        ComparisonRow("E[R^2]", 2.0, 2.0 + z_square * 0.02, 0.02, z_square),
        ComparisonRow("E[N]", 2.0, 2.0, 0.01, 0.0, informational=True),
    )
    return ValidationOutcome(rows=rows, threshold=threshold)


def estimate(seed):
    return SimulationEstimate(
        n=1000,
        mean_r=1.0,
        mean_r2=2.0,
        se_mean=0.01,
        se_mean2=0.02,
        mean_attempts=2.0,
        se_attempts=0.01,
        max_attempts_hit=0,
        seed=seed,
    )


class ValidationRunTests(TestCase):
    def setUp(self):
        self.good = ValidationRun.objects.record(SCENARIO, estimate(1), outcome(0.5, -1.0))
        self.bad = ValidationRun.objects.record(SCENARIO, estimate(2), outcome(0.2, 7.5), workers=4)

    def test_record_copies_the_comparison(self):
        self.assertEqual(self.good.scenario_name, "unit")
        self.assertEqual(self.good.scenario_digest, SCENARIO.digest)
        self.assertEqual(self.good.analytic_e_r2, 2.0)
        self.assertEqual(self.good.z_e_r2, -1.0)
        self.assertTrue(self.good.passed)
        self.assertEqual(self.bad.workers, 4)
        self.assertFalse(self.bad.passed)

    def test_worst_z(self):
        self.assertEqual(self.good.worst_z, 1.0)
        self.assertEqual(self.bad.worst_z, 7.5)

    def test_queryset_filters(self):
        self.assertQuerySetEqual(ValidationRun.objects.passed(), [self.good])
        self.assertQuerySetEqual(ValidationRun.objects.failed(), [self.bad])
        self.assertEqual(ValidationRun.objects.for_scenario("unit").failed().count(), 1)
        self.assertFalse(ValidationRun.objects.for_scenario("other").exists())

    def test_newest_first(self):
        ValidationRun.objects.filter(pk=self.good.pk).update(
            created_at=timezone.now() - timedelta(hours=1)
        )
        self.assertEqual(list(ValidationRun.objects.all()), [self.bad, self.good])

    def test_str(self):
        self.assertEqual(str(self.bad), "unit n=1000 seed=2 FAIL")
