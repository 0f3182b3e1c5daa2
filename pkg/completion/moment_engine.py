"""First and second moments of the completion time R of a preempt-repeat job.

With r = q / (1 - q) the expected number of interrupted attempts:

    E[R]   = a + (b + mu) r
    E[R^2] = c + (2ab + 2 mu a + 2 mu b + d + nu) r + 2 (mu + b)^2 r^2

where mu and nu are the first two raw moments of the downtime.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field

from .conditional_moments import ConditionalMoments, Method, conditional_stats
from .distributions import DistributionSpec, raw_moment
from .exceptions import (
    InconsistentMoments,
    InvalidParameter,
    NearDegenerateWarning,
    NeverCompletes,
)

logger = logging.getLogger(__name__)

DEFAULT_NEAR_DEGENERATE_Q = 1.0 - 1e-12
DEFAULT_VARIANCE_REL_SLACK = 1e-9


@dataclass(frozen=True)
class EnvironmentScenario:
    """Laws of the uptimes U_k, downtimes D_k and processing times p_k."""

    uptime: DistributionSpec
    downtime: DistributionSpec
    proc: DistributionSpec
    name: str = ""

    def to_dict(self):
        return {
            "name": self.name,
            "uptime": self.uptime.to_record(),
            "downtime": self.downtime.to_record(),
            "proc": self.proc.to_record(),
        }


@dataclass(frozen=True)
class MomentReport:
    q: float
    e_r: float
    e_r2: float
    var_r: float
    cm: ConditionalMoments
    expected_attempts: float
    instantaneous_e_r: float
    instantaneous_e_r2: float
    provenance: dict = field(default_factory=dict)
    warnings: tuple = ()

    def to_dict(self):
        return {
            "q": self.q,
            "e_r": self.e_r,
            "e_r2": self.e_r2,
            "var_r": self.var_r,
            "cm": self.cm.to_dict(),
            "expected_attempts": self.expected_attempts,
            "instantaneous_e_r": self.instantaneous_e_r,
            "instantaneous_e_r2": self.instantaneous_e_r2,
            "provenance": dict(self.provenance),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data["cm"] = ConditionalMoments.from_dict(data["cm"])
        data["warnings"] = tuple(data.get("warnings", ()))
        return cls(**data)


def _retry_factor(q, success=None, near_degenerate=DEFAULT_NEAR_DEGENERATE_Q):
    """q / (1 - q), the expected number of interrupted attempts.

    ``success`` is 1 - q when the caller has it computed directly.
    """
    if not 0.0 <= q <= 1.0:
        raise InvalidParameter(f"q must lie in [0, 1], got {q!r}")
    if success is None:
        success = 1.0 - q
    if q >= 1.0 or success <= 0.0:
        raise NeverCompletes()
    if q > near_degenerate:
        message = f"q={q!r} exceeds {near_degenerate!r}; moments are dominated by q/(1-q)"
        logger.warning(message)
        warnings.warn(message, NearDegenerateWarning, stacklevel=3)
    return q / success


def _check_downtime_moment(name, value):
    if not (math.isfinite(value) and value >= 0):
        raise InvalidParameter(f"{name} must be finite and >= 0, got {value!r}")


def expected_completion(cm, mu, *, near_degenerate=DEFAULT_NEAR_DEGENERATE_Q):
    """E[R] from the conditional moments and the mean downtime ``mu``.

    Only the first downtime moment is needed.
    """
    _check_downtime_moment("mu", mu)
    factor = _retry_factor(cm.q, cm.success_prob, near_degenerate)
    a = cm.require("a")
    if cm.q == 0.0:
        return a
    return a + (cm.require("b") + mu) * factor


def second_moment(cm, mu, nu, *, near_degenerate=DEFAULT_NEAR_DEGENERATE_Q):
    """E[R^2] from the conditional moments and the downtime moments ``mu``, ``nu``."""
    _check_downtime_moment("mu", mu)
    _check_downtime_moment("nu", nu)
    if nu < mu * mu * (1.0 - 1e-12):
        raise InvalidParameter(f"nu must be >= mu^2, got mu={mu!r}, nu={nu!r}")
    factor = _retry_factor(cm.q, cm.success_prob, near_degenerate)
    c = cm.require("c")
    if cm.q == 0.0:
        return c
    a, b, d = cm.require("a"), cm.require("b"), cm.require("d")
    linear = 2.0 * a * b + 2.0 * mu * a + 2.0 * mu * b + d + nu
    return c + linear * factor + 2.0 * (mu + b) ** 2 * factor * factor


def completion_variance(e_r, e_r2, *, rel_slack=DEFAULT_VARIANCE_REL_SLACK):
    """Var[R] = E[R^2] - E[R]^2, clamped to 0 within ``rel_slack`` of zero."""
    variance = e_r2 - e_r * e_r
    if variance >= 0:
        return variance
    if -variance <= rel_slack * max(abs(e_r2), e_r * e_r):
        logger.warning("clamping variance %r to 0", variance)
        return 0.0
    raise InconsistentMoments(
        f"E[R^2]={e_r2!r} is below E[R]^2={e_r * e_r!r}; the moments are inconsistent"
    )


def exponential_uptime_closed_form(rate, t, mu):
    """E[R] = (1/rate + mu)(exp(rate t) - 1) for Exp(rate) uptimes and a fixed job length t."""
    if not (math.isfinite(rate) and rate > 0):
        raise InvalidParameter(f"rate must be > 0, got {rate!r}")
    if not (math.isfinite(t) and t > 0):
        raise InvalidParameter(f"t must be > 0, got {t!r}")
    _check_downtime_moment("mu", mu)
    return (1.0 / rate + mu) * math.expm1(rate * t)


def instantaneous_approximation(cm, *, near_degenerate=DEFAULT_NEAR_DEGENERATE_Q):
    """(E[R], E[R^2]) when breakdowns cost no time (mu = nu = 0)."""
    return (
        expected_completion(cm, 0.0, near_degenerate=near_degenerate),
        second_moment(cm, 0.0, 0.0, near_degenerate=near_degenerate),
    )


def expected_attempts(q, success_prob=None):
    """E[N] = 1 / (1 - q) for the index N of the first completed attempt."""
    return 1.0 + _retry_factor(q, success_prob, near_degenerate=1.0)


def attempt_pmf(q, k):
    """P{N = k} = (1 - q) q^(k - 1)."""
    if not 0.0 <= q <= 1.0:
        raise InvalidParameter(f"q must lie in [0, 1], got {q!r}")
    if k < 1 or int(k) != k:
        raise InvalidParameter(f"k must be a positive integer, got {k!r}")
    return (1.0 - q) * q ** (k - 1)


def scenario_expected_completion(scenario, **options):
    """E[R] for ``scenario``; the downtime's second moment is never queried."""
    near_degenerate = options.pop("near_degenerate", DEFAULT_NEAR_DEGENERATE_Q)
    cm = conditional_stats(scenario.uptime, scenario.proc, **options)
    return expected_completion(
        cm, raw_moment(scenario.downtime, 1), near_degenerate=near_degenerate
    )


def analyze(
    scenario,
    *,
    near_degenerate=DEFAULT_NEAR_DEGENERATE_Q,
    variance_slack=DEFAULT_VARIANCE_REL_SLACK,
    **quadrature_options,
):
    """Full MomentReport for ``scenario``.

    Raises NeverCompletes when q = 1, plus whatever conditional_stats raises.
    """
    cm = conditional_stats(scenario.uptime, scenario.proc, **quadrature_options)
    mu = raw_moment(scenario.downtime, 1)
    nu = raw_moment(scenario.downtime, 2)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NearDegenerateWarning)
        e_r = expected_completion(cm, mu, near_degenerate=near_degenerate)
        e_r2 = second_moment(cm, mu, nu, near_degenerate=near_degenerate)
        instant_e_r, instant_e_r2 = instantaneous_approximation(
            cm, near_degenerate=near_degenerate
        )
    notes = list(dict.fromkeys(str(w.message) for w in caught))
    notes.extend(cm.violations(variance_slack))

    variance = completion_variance(e_r, e_r2, rel_slack=variance_slack)
    if variance == 0.0 and e_r2 != e_r * e_r:
        notes.append("variance clamped to 0")

    source = "degenerate" if cm.q == 0.0 else Method(cm.method).value
    return MomentReport(
        q=cm.q,
        e_r=e_r,
        e_r2=e_r2,
        var_r=variance,
        cm=cm,
        expected_attempts=expected_attempts(cm.q, cm.success_prob),
        instantaneous_e_r=instant_e_r,
        instantaneous_e_r2=instant_e_r2,
        provenance={
            "conditional_moments": Method(cm.method).value,
            "e_r": source,
            "e_r2": source,
            "var_r": source,
        },
        warnings=tuple(notes),
    )
