"""Distribution families for uptimes, downtimes and processing times.

Every law is nonnegative. All but Deterministic are continuous; Deterministic
is a single atom with a step CDF and no density.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from django.db import models
from scipy import special, stats

from .exceptions import InvalidParameter, UnsupportedForDeterministic


class Family(models.TextChoices):
    EXPONENTIAL = "exponential", "Exponential"
    UNIFORM = "uniform", "Uniform"
    GAMMA = "gamma", "Gamma"
    WEIBULL = "weibull", "Weibull"
    LOGNORMAL = "lognormal", "LogNormal"
    DETERMINISTIC = "deterministic", "Deterministic"


# Parameter names, in the order they are stored in DistributionSpec.params
PARAMETERS = {
    Family.EXPONENTIAL: ("rate",),
    Family.UNIFORM: ("lo", "hi"),
    Family.GAMMA: ("shape", "scale"),
    Family.WEIBULL: ("shape", "scale"),
    Family.LOGNORMAL: ("log_mean", "log_sd"),
    Family.DETERMINISTIC: ("value",),
}


def _check_parameters(family, values):
    """Raise InvalidParameter unless ``values`` are admissible for ``family``."""
    named = dict(zip(PARAMETERS[family], values))
    for name, value in named.items():
        if not math.isfinite(value):
            raise InvalidParameter(f"{name} must be finite, got {value!r}")

    if family == Family.EXPONENTIAL:
        if named["rate"] <= 0:
            raise InvalidParameter(f"rate must be > 0, got {named['rate']!r}")
    elif family == Family.UNIFORM:
        if named["lo"] < 0:
            raise InvalidParameter(f"lo must be >= 0, got {named['lo']!r}")
        if named["hi"] <= named["lo"]:
            raise InvalidParameter(
                f"hi must be > lo, got lo={named['lo']!r}, hi={named['hi']!r}"
            )
    elif family in (Family.GAMMA, Family.WEIBULL):
        for name in ("shape", "scale"):
            if named[name] <= 0:
                raise InvalidParameter(f"{name} must be > 0, got {named[name]!r}")
    elif family == Family.LOGNORMAL:
        if named["log_sd"] <= 0:
            raise InvalidParameter(f"log_sd must be > 0, got {named['log_sd']!r}")
    elif family == Family.DETERMINISTIC:
        if named["value"] < 0:
            raise InvalidParameter(f"value must be >= 0, got {named['value']!r}")


@dataclass(frozen=True)
class DistributionSpec:
    """A validated, immutable distribution law on [0, +inf)."""

    family: Family
    params: tuple

    def __post_init__(self):
        try:
            family = Family(self.family)
        except ValueError:
            raise InvalidParameter(f"unknown distribution family {self.family!r}")
        names = PARAMETERS[family]
        if len(self.params) != len(names):
            raise InvalidParameter(
                f"{family.value} expects parameters {', '.join(names)}"
            )
        try:
            values = tuple(float(value) for value in self.params)
        except (TypeError, ValueError):
            raise InvalidParameter(f"{family.value} parameters must be numbers")
        _check_parameters(family, values)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", values)

    # Convenience constructors

    @classmethod
    def exponential(cls, rate):
        return cls(Family.EXPONENTIAL, (rate,))

    @classmethod
    def uniform(cls, lo, hi):
        return cls(Family.UNIFORM, (lo, hi))

    @classmethod
    def gamma(cls, shape, scale):
        return cls(Family.GAMMA, (shape, scale))

    @classmethod
    def weibull(cls, shape, scale):
        return cls(Family.WEIBULL, (shape, scale))

    @classmethod
    def lognormal(cls, log_mean, log_sd):
        return cls(Family.LOGNORMAL, (log_mean, log_sd))

    @classmethod
    def deterministic(cls, value):
        return cls(Family.DETERMINISTIC, (value,))

    @classmethod
    def from_record(cls, record):
        """Build a spec from a tagged record such as ``{"family": "gamma", "shape": 2, "scale": 1}``."""
        if "family" not in record:
            raise InvalidParameter("distribution record needs a 'family' key")
        try:
            family = Family(record["family"])
        except ValueError:
            raise InvalidParameter(
                f"unknown distribution family {record['family']!r}; "
                f"expected one of {', '.join(Family.values)}"
            )
        names = PARAMETERS[family]
        unknown = sorted(set(record) - set(names) - {"family"})
        if unknown:
            raise InvalidParameter(
                f"unexpected key(s) for {family.value}: {', '.join(unknown)}"
            )
        missing = [name for name in names if name not in record]
        if missing:
            raise InvalidParameter(
                f"{family.value} is missing parameter(s): {', '.join(missing)}"
            )
        return cls(family, tuple(record[name] for name in names))

    def to_record(self):
        record = {"family": self.family.value}
        record.update(self.parameters)
        return record

    @property
    def parameters(self):
        return dict(zip(PARAMETERS[self.family], self.params))

    @property
    def is_deterministic(self):
        return self.family == Family.DETERMINISTIC

    def __str__(self):
        args = ", ".join(f"{name}={value:g}" for name, value in self.parameters.items())
        return f"{self.family.label}({args})"


def _require_finite(x):
    if not math.isfinite(x):
        raise InvalidParameter(f"x must be finite, got {x!r}")


def pdf(dist, x):
    """Density at ``x``; zero outside the support."""
    _require_finite(x)
    family = dist.family
    if family == Family.DETERMINISTIC:
        raise UnsupportedForDeterministic(f"{dist} has no density")
    if x < 0:
        return 0.0

    if family == Family.EXPONENTIAL:
        (rate,) = dist.params
        return rate * math.exp(-rate * x)
    if family == Family.UNIFORM:
        lo, hi = dist.params
        return 1.0 / (hi - lo) if lo <= x <= hi else 0.0
    if family == Family.LOGNORMAL:
        log_mean, log_sd = dist.params
        if x == 0:
            return 0.0
        z = (math.log(x) - log_mean) / log_sd
        return math.exp(-0.5 * z * z) / (x * log_sd * math.sqrt(2.0 * math.pi))

    shape, scale = dist.params
    if x == 0:
        if shape < 1:
            return math.inf
        return 1.0 / scale if shape == 1 else 0.0
    if family == Family.GAMMA:
        log_density = (
            special.xlogy(shape - 1.0, x)
            - x / scale
            - special.gammaln(shape)
            - shape * math.log(scale)
        )
        return float(math.exp(log_density))
    # Weibull
    z = x / scale
    return (shape / scale) * z ** (shape - 1.0) * math.exp(-(z**shape))


def cdf(dist, x):
    """P{X <= x}."""
    _require_finite(x)
    family = dist.family
    if family == Family.DETERMINISTIC:
        (value,) = dist.params
        return 1.0 if x >= value else 0.0
    if x <= 0:
        return 0.0

    if family == Family.EXPONENTIAL:
        (rate,) = dist.params
        return -math.expm1(-rate * x)
    if family == Family.UNIFORM:
        lo, hi = dist.params
        return min(max((x - lo) / (hi - lo), 0.0), 1.0)
    if family == Family.GAMMA:
        shape, scale = dist.params
        return float(special.gammainc(shape, x / scale))
    if family == Family.WEIBULL:
        shape, scale = dist.params
        return -math.expm1(-((x / scale) ** shape))
    log_mean, log_sd = dist.params
    return float(special.ndtr((math.log(x) - log_mean) / log_sd))


def survival(dist, x):
    """P{X > x}, the exact complement of :func:`cdf`."""
    return 1.0 - cdf(dist, x)


def prob_below(dist, x):
    """P{X < x}. Differs from :func:`cdf` only at a Deterministic atom."""
    if dist.family == Family.DETERMINISTIC:
        _require_finite(x)
        return 1.0 if x > dist.params[0] else 0.0
    return cdf(dist, x)


def prob_at_least(dist, x):
    """P{X >= x}, the complement of :func:`prob_below`."""
    return 1.0 - prob_below(dist, x)


def raw_moment(dist, k):
    """E[X^k] for k in {1, 2}."""
    if k not in (1, 2):
        raise InvalidParameter(f"moment order must be 1 or 2, got {k!r}")
    family = dist.family

    if family == Family.DETERMINISTIC:
        (value,) = dist.params
        return value**k
    if family == Family.EXPONENTIAL:
        (rate,) = dist.params
        return math.factorial(k) / rate**k
    if family == Family.UNIFORM:
        lo, hi = dist.params
        if k == 1:
            return 0.5 * (lo + hi)
        return (lo * lo + lo * hi + hi * hi) / 3.0
    if family == Family.GAMMA:
        shape, scale = dist.params
        return float(special.poch(shape, k)) * scale**k
    if family == Family.WEIBULL:
        shape, scale = dist.params
        return scale**k * float(special.gamma(1.0 + k / shape))
    log_mean, log_sd = dist.params
    return math.exp(k * log_mean + 0.5 * k * k * log_sd * log_sd)


def partial_moment(dist, k, x):
    """Lower partial moment E[X^k ; X < x] for k in {0, 1, 2}.

    ``partial_moment(d, 0, x)`` is P{X < x}.
    """
    if k not in (0, 1, 2):
        raise InvalidParameter(f"partial moment order must be 0, 1 or 2, got {k!r}")
    _require_finite(x)
    family = dist.family
    if family == Family.DETERMINISTIC:
        (value,) = dist.params
        return value**k if value < x else 0.0
    if x <= 0:
        return 0.0

    if family == Family.EXPONENTIAL:
        (rate,) = dist.params
        shape, scale = 1.0, 1.0 / rate
        family = Family.GAMMA
    elif family in (Family.GAMMA, Family.WEIBULL):
        shape, scale = dist.params

    if family == Family.GAMMA:
        return (
            scale**k
            * float(special.poch(shape, k))
            * float(special.gammainc(shape + k, x / scale))
        )
    if family == Family.WEIBULL:
        return (
            scale**k
            * float(special.gamma(1.0 + k / shape))
            * float(special.gammainc(1.0 + k / shape, (x / scale) ** shape))
        )
    if family == Family.UNIFORM:
        lo, hi = dist.params
        upper = min(max(x, lo), hi)
        return (upper ** (k + 1) - lo ** (k + 1)) / ((k + 1) * (hi - lo))
    log_mean, log_sd = dist.params
    return math.exp(k * log_mean + 0.5 * k * k * log_sd * log_sd) * float(
        special.ndtr((math.log(x) - log_mean - k * log_sd * log_sd) / log_sd)
    )


@lru_cache(maxsize=256)
def _frozen(dist):
    family = dist.family
    if family == Family.EXPONENTIAL:
        (rate,) = dist.params
        return stats.expon(scale=1.0 / rate)
    if family == Family.UNIFORM:
        lo, hi = dist.params
        return stats.uniform(loc=lo, scale=hi - lo)
    if family == Family.GAMMA:
        shape, scale = dist.params
        return stats.gamma(shape, scale=scale)
    if family == Family.WEIBULL:
        shape, scale = dist.params
        return stats.weibull_min(shape, scale=scale)
    log_mean, log_sd = dist.params
    return stats.lognorm(log_sd, scale=math.exp(log_mean))


def quantile(dist, prob):
    """Smallest x with cdf(dist, x) >= prob."""
    if not 0.0 <= prob <= 1.0:
        raise InvalidParameter(f"prob must lie in [0, 1], got {prob!r}")
    if dist.family == Family.DETERMINISTIC:
        return dist.params[0]
    return float(_frozen(dist).ppf(prob))


def upper_quantile(dist, tail):
    """The x leaving mass ``tail`` above it; accurate for tiny tails."""
    if not 0.0 < tail <= 1.0:
        raise InvalidParameter(f"tail must lie in (0, 1], got {tail!r}")
    if dist.family == Family.DETERMINISTIC:
        return dist.params[0]
    return float(_frozen(dist).isf(tail))


def _inverse_cdf(dist, u):
    family = dist.family
    if family == Family.EXPONENTIAL:
        (rate,) = dist.params
        return -np.log1p(-u) / rate
    if family == Family.UNIFORM:
        lo, hi = dist.params
        return lo + (hi - lo) * u
    # Weibull
    shape, scale = dist.params
    return scale * (-np.log1p(-u)) ** (1.0 / shape)


def sample(dist, rng, size=None):
    """Draw from ``dist`` with the numpy Generator ``rng``.

    Exponential, Uniform and Weibull use inverse-CDF on one ``rng.random``
    draw each; Gamma and LogNormal use numpy's own samplers. Deterministic
    consumes nothing from ``rng``.
    """
    family = dist.family
    if family == Family.DETERMINISTIC:
        (value,) = dist.params
        return value if size is None else np.full(size, value)
    if family == Family.GAMMA:
        shape, scale = dist.params
        draw = rng.gamma(shape, scale, size)
    elif family == Family.LOGNORMAL:
        log_mean, log_sd = dist.params
        draw = rng.lognormal(log_mean, log_sd, size)
    else:
        draw = _inverse_cdf(dist, rng.random(size))
    return float(draw) if size is None else draw
