import json
import tempfile
from pathlib import Path

from django.conf import settings
from django.test import SimpleTestCase

from completion.distributions import DistributionSpec
from completion.exceptions import ScenarioError
from completion.scenarios import load_scenario, parse_scenario

SCENARIO_DIR = Path(settings.BASE_DIR) / "scenarios"
DEFAULTS = {"n": 100_000, "seed": 0, "max_attempts": 1_000_000}

VALID = """{
  "name": "sample",
  "uptime": {"family": "exponential", "rate": 1.0},
  "downtime": {"family": "deterministic", "value": 0.5},
  "proc": {"family": "gamma", "shape": 2.0, "scale": 1.0},
  "simulation": {"n": 5000, "seed": 3}
}
"""


class ParseScenarioTests(SimpleTestCase):
    def test_valid_file(self):
        scenario_file = parse_scenario(VALID, path="sample.json")
        self.assertEqual(scenario_file.name, "sample")
        self.assertEqual(scenario_file.scenario.uptime, DistributionSpec.exponential(1.0))
        self.assertEqual(scenario_file.scenario.proc, DistributionSpec.gamma(2.0, 1.0))
        self.assertEqual(len(scenario_file.digest), 64)

    def test_name_defaults_to_file_stem(self):
        data = json.loads(VALID)
        del data["name"]
        scenario_file = parse_scenario(json.dumps(data), path="scenarios/from_stem.json")
        self.assertEqual(scenario_file.name, "from_stem")

    def test_simulation_settings_precedence(self):
        scenario_file = parse_scenario(VALID, path="sample.json")
        run = scenario_file.simulation_settings(DEFAULTS)
        self.assertEqual((run.n, run.seed, run.max_attempts), (5000, 3, 1_000_000))
        run = scenario_file.simulation_settings(DEFAULTS, {"n": None, "seed": 9})
        self.assertEqual((run.n, run.seed), (5000, 9))

    def test_override_is_validated(self):
        scenario_file = parse_scenario(VALID, path="sample.json")
        with self.assertRaisesMessage(ScenarioError, "sample.json: simulation.n: n must be ≥ 2"):
            scenario_file.simulation_settings(DEFAULTS, {"n": 1})

    def test_invalid_json_points_at_the_line(self):
        text = VALID.replace('"rate": 1.0}', '"rate": 1.0')
        with self.assertRaises(ScenarioError) as caught:
            parse_scenario(text, path="broken.json")
        self.assertEqual(caught.exception.path, "broken.json")
        self.assertTrue(str(caught.exception).startswith("broken.json:"))
        self.assertIn("invalid JSON", str(caught.exception))

    def test_invalid_parameter_points_at_the_record(self):
        text = VALID.replace('"shape": 2.0', '"shape": -2.0')
        with self.assertRaisesMessage(ScenarioError, "bad.json:5: proc: shape must be > 0"):
            parse_scenario(text, path="bad.json")

    def test_unknown_family(self):
        text = VALID.replace('"family": "exponential"', '"family": "pareto"')
        with self.assertRaisesMessage(ScenarioError, "bad.json:3: uptime: unknown distribution family"):
            parse_scenario(text, path="bad.json")

    def test_small_sample_count(self):
        text = VALID.replace('"n": 5000', '"n": 1')
        with self.assertRaisesMessage(ScenarioError, "bad.json:6: simulation.n: n must be ≥ 2"):
            parse_scenario(text, path="bad.json")

    def test_unexpected_keys(self):
        text = VALID.replace('"name": "sample",', '"name": "sample",\n  "horizon": 3,')
        with self.assertRaisesMessage(ScenarioError, "bad.json:3: unexpected key 'horizon'"):
            parse_scenario(text, path="bad.json")
        text = VALID.replace('"seed": 3', '"seed": 3, "workers": 4')
        with self.assertRaisesMessage(ScenarioError, "simulation: unexpected key 'workers'"):
            parse_scenario(text, path="bad.json")

    def test_missing_law(self):
        data = json.loads(VALID)
        del data["downtime"]
        with self.assertRaisesMessage(ScenarioError, "missing distribution record 'downtime'"):
            parse_scenario(json.dumps(data), path="bad.json")

    def test_not_an_object(self):
        with self.assertRaisesMessage(ScenarioError, "bad.json:1: scenario must be a JSON object"):
            parse_scenario("[1, 2]", path="bad.json")


class LoadScenarioTests(SimpleTestCase):
    def test_missing_file(self):
        with self.assertRaisesMessage(ScenarioError, "cannot read scenario"):
            load_scenario("/nonexistent/scenario.json")

    def test_reads_from_disk(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "disk.json"
            path.write_text(VALID, encoding="utf-8")
            self.assertEqual(load_scenario(path).path, str(path))

    def test_golden_files_parse(self):
        for path in sorted(SCENARIO_DIR.glob("*.json")):
            with self.subTest(path=path.name):
                scenario_file = load_scenario(path)
                self.assertTrue(scenario_file.name)
