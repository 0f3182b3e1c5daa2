"""Scenario files: one JSON object per problem instance.

    {
      "name": "exp-det-fixed-job",
      "uptime":   {"family": "exponential", "rate": 1.0},
      "downtime": {"family": "deterministic", "value": 0.5},
      "proc":     {"family": "deterministic", "value": 0.6931471805599453},
      "simulation": {"n": 1000000, "seed": 7, "max_attempts": 1000000}
    }

The simulation block and every key inside it are optional.
"""

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from django import forms

from .distributions import DistributionSpec
from .exceptions import InvalidParameter, ScenarioError
from .moment_engine import EnvironmentScenario

LAWS = ("uptime", "downtime", "proc")
TOP_LEVEL_KEYS = {"name", "simulation", *LAWS}


class SimulationForm(forms.Form):
    n = forms.IntegerField(
        required=False, min_value=2, error_messages={"min_value": "n must be ≥ 2"}
    )
    seed = forms.IntegerField(
        required=False, min_value=0, error_messages={"min_value": "seed must be ≥ 0"}
    )
    max_attempts = forms.IntegerField(
        required=False,
        min_value=1,
        error_messages={"min_value": "max_attempts must be ≥ 1"},
    )


@dataclass(frozen=True)
class SimulationSettings:
    n: int
    seed: int
    max_attempts: int


@dataclass(frozen=True)
class ScenarioFile:
    name: str
    scenario: EnvironmentScenario
    simulation: dict
    path: str
    digest: str

    def simulation_settings(self, defaults, overrides=None):
        """Merge ``defaults`` < file block < ``overrides`` into SimulationSettings."""
        merged = dict(defaults)
        merged.update({k: v for k, v in self.simulation.items() if v is not None})
        if overrides:
            cleaned = _clean_simulation(
                {k: v for k, v in overrides.items() if v is not None}, self.path, None
            )
            merged.update({k: v for k, v in cleaned.items() if v is not None})
        return SimulationSettings(
            n=merged["n"], seed=merged["seed"], max_attempts=merged["max_attempts"]
        )


def _line_of(text, *keys):
    """1-based line of the last of ``keys``, each searched after the previous."""
    position = 0
    for key in keys:
        found = text.find(f'"{key}"', position)
        if found < 0:
            break
        position = found
    return text.count("\n", 0, position) + 1


def _clean_simulation(block, path, text):
    form = SimulationForm(data=block)
    if form.is_valid():
        return form.cleaned_data
    field, messages = next(iter(form.errors.items()))
    line = _line_of(text, "simulation", field) if text is not None else None
    raise ScenarioError(f"simulation.{field}: {messages[0]}", path=path, line=line)


def parse_scenario(text, path="<scenario>"):
    """Parse and validate scenario ``text``; raises ScenarioError."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno)
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object", path=path, line=1)

    unknown = sorted(set(data) - TOP_LEVEL_KEYS)
    if unknown:
        raise ScenarioError(
            f"unexpected key {unknown[0]!r}", path=path, line=_line_of(text, unknown[0])
        )

    laws = {}
    for key in LAWS:
        if key not in data:
            raise ScenarioError(f"missing distribution record {key!r}", path=path, line=1)
        record = data[key]
        if not isinstance(record, dict):
            raise ScenarioError(
                f"{key}: expected a distribution record", path=path, line=_line_of(text, key)
            )
        try:
            laws[key] = DistributionSpec.from_record(record)
        except InvalidParameter as exc:
            raise ScenarioError(
                f"{key}: {exc}", path=path, line=_line_of(text, key)
            ) from exc

    simulation = {}
    if "simulation" in data:
        block = data["simulation"]
        if not isinstance(block, dict):
            raise ScenarioError(
                "simulation: expected an object", path=path, line=_line_of(text, "simulation")
            )
        unknown = sorted(set(block) - set(SimulationForm.base_fields))
        if unknown:
            raise ScenarioError(
                f"simulation: unexpected key {unknown[0]!r}",
                path=path,
                line=_line_of(text, "simulation", unknown[0]),
            )
        simulation = _clean_simulation(block, path, text)

    name = data.get("name") or Path(path).stem
    if not isinstance(name, str):
        raise ScenarioError("name must be a string", path=path, line=_line_of(text, "name"))
    return ScenarioFile(
        name=name,
        scenario=EnvironmentScenario(name=name, **laws),
        simulation=simulation,
        path=str(path),
        digest=hashlib.sha256(text.encode("utf-8")).hexdigest(),
    )


def load_scenario(path):
    """Read and parse the scenario file at ``path``."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc.strerror}", path=path)
    return parse_scenario(text, path=str(path))
