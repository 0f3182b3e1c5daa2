"""Human-readable and JSON renderings of reports."""

import json

from django.template.loader import render_to_string


def to_json(payload):
    """Canonical JSON text: floats in shortest round-trip form, key order preserved."""
    return json.dumps(payload, indent=2, allow_nan=False, ensure_ascii=False) + "\n"


def render_analysis(scenario_file, report):
    return render_to_string(
        "completion/analysis.txt",
        {"name": scenario_file.name, "scenario": scenario_file.scenario, "report": report},
    )


def render_simulation(scenario_file, estimate, max_attempts):
    counts = [
        {"attempts": k, "paths": count, "share": count / estimate.n}
        for k, count in enumerate(estimate.attempt_counts, start=1)
    ]
    return render_to_string(
        "completion/simulation.txt",
        {
            "name": scenario_file.name,
            "estimate": estimate,
            "max_attempts": max_attempts,
            "counts": counts,
        },
    )


def render_validation(scenario_file, estimate, outcome):
    return render_to_string(
        "completion/validation.txt",
        {"name": scenario_file.name, "estimate": estimate, "outcome": outcome},
    )
