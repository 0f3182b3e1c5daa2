"""Analytic moments versus the Monte Carlo oracle."""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ComparisonRow:
    quantity: str
    analytic: float
    simulated: float
    standard_error: float
    z: float
    informational: bool = False

    def within(self, threshold):
        return abs(self.z) <= threshold


@dataclass(frozen=True)
class ValidationOutcome:
    rows: tuple
    threshold: float

    @property
    def passed(self):
        return all(row.within(self.threshold) for row in self.rows if not row.informational)

    def row(self, quantity):
        return next(row for row in self.rows if row.quantity == quantity)


def z_score(analytic, simulated, standard_error):
    """(simulated - analytic) / standard_error; a zero error only forgives exact agreement."""
    difference = simulated - analytic
    if standard_error > 0:
        return difference / standard_error
    if math.isclose(simulated, analytic, rel_tol=1e-12, abs_tol=1e-300):
        return 0.0
    return math.copysign(math.inf, difference)


def compare(report, estimate, threshold=5.0):
    """Rows for E[R] and E[R^2] (judged) and E[N] (informational)."""
    rows = []
    for quantity, analytic, simulated, error, informational in (
        ("E[R]", report.e_r, estimate.mean_r, estimate.se_mean, False),
        ("E[R^2]", report.e_r2, estimate.mean_r2, estimate.se_mean2, False),
        ("E[N]", report.expected_attempts, estimate.mean_attempts, estimate.se_attempts, True),
    ):
        rows.append(
            ComparisonRow(
                quantity=quantity,
                analytic=analytic,
                simulated=simulated,
                standard_error=error,
                z=z_score(analytic, simulated, error),
                informational=informational,
            )
        )
    return ValidationOutcome(rows=tuple(rows), threshold=threshold)
