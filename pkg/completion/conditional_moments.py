"""Success probability and conditional moments of a single attempt.

For independent uptime U and processing time p:

    q = P{U < p}              probability that an attempt is cut by a breakdown
    a = E[p   | U >= p]       c = E[p^2 | U >= p]
    b = E[U   | U <  p]       d = E[U^2 | U <  p]

A tie U = p counts as a completed attempt.
"""

import logging
import math
from dataclasses import asdict, dataclass

from django.db import models
from scipy import integrate

from . import distributions as dists
from .distributions import Family
from .exceptions import AtomCollision, QuadratureFailure, UndefinedMoment

logger = logging.getLogger(__name__)

DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-10
DEFAULT_TAIL_MASS = 1e-12
DEFAULT_LIMIT = 200


class Method(models.TextChoices):
    CLOSED_FORM = "closed_form", "Closed form"
    QUADRATURE = "quadrature", "Quadrature"


@dataclass(frozen=True)
class ConditionalMoments:
    """The quintuple (q, a, b, c, d) with its provenance.

    ``a`` and ``c`` are None when q = 1, ``b`` and ``d`` are None when q = 0.
    ``success_prob`` is P{U >= p} = 1 - q, kept separately because it is
    computed directly and stays accurate when q rounds to 1.
    """

    q: float
    a: float | None
    b: float | None
    c: float | None
    d: float | None
    method: Method = Method.CLOSED_FORM
    est_abs_error: float = 0.0
    success_prob: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.success_prob is None:
            object.__setattr__(self, "success_prob", 1.0 - self.q)

    def require(self, name):
        value = getattr(self, name)
        if value is None:
            event = "U >= p" if name in ("a", "c") else "U < p"
            raise UndefinedMoment(
                f"conditional moment {name} is undefined: P{{{event}}} = 0 (q={self.q!r})"
            )
        return value

    def violations(self, rel_slack=1e-9):
        """Conditional Jensen inequalities that fail by more than ``rel_slack``."""
        problems = []
        for mean, square in (("a", "c"), ("b", "d")):
            m, s = getattr(self, mean), getattr(self, square)
            if m is None or s is None:
                continue
            if s < m * m * (1.0 - rel_slack):
                problems.append(f"{square} < {mean}^2 ({s!r} < {m * m!r})")
        return problems

    def to_dict(self):
        data = asdict(self)
        data["method"] = self.method.value
        return data

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


def _finish(q, success, num_a, num_c, num_b, num_d, method, est_abs_error=0.0):
    """Divide the partial expectations by their conditioning probabilities."""
    a = c = b = d = None
    success = min(max(success, 0.0), 1.0)
    if success > 0:
        a, c = num_a / success, num_c / success
    else:
        q = 1.0
    if q > 0:
        b, d = num_b / q, num_d / q
    return ConditionalMoments(
        q=min(max(q, 0.0), 1.0),
        a=a,
        b=b,
        c=c,
        d=d,
        method=method,
        est_abs_error=est_abs_error,
        success_prob=success,
    )


def _deterministic_pair(uptime, proc):
    (u,) = uptime.params
    (t,) = proc.params
    if u == t:
        raise AtomCollision(
            f"uptime and processing time are both the atom {u!r}; P{{U = p}} = 1 "
            "is outside the continuous model"
        )
    if u < t:
        return ConditionalMoments(q=1.0, a=None, b=u, c=None, d=u * u, success_prob=0.0)
    return ConditionalMoments(q=0.0, a=t, b=None, c=t * t, d=None, success_prob=1.0)


def _closed_form(uptime, proc):
    """Closed forms for the pairs that have one, else None."""
    if uptime.family == Family.EXPONENTIAL and proc.family == Family.DETERMINISTIC:
        (rate,) = uptime.params
        (t,) = proc.params
        q = -math.expm1(-rate * t)
        success = math.exp(-rate * t)
        a = c = b = d = None
        if success > 0:
            a, c = t, t * t
        else:
            q = 1.0
        if q > 0:
            b = 1.0 / rate - t / math.expm1(rate * t)
            d = dists.partial_moment(uptime, 2, t) / q
        return ConditionalMoments(q=q, a=a, b=b, c=c, d=d, success_prob=success)

    if uptime.family == Family.EXPONENTIAL and proc.family == Family.EXPONENTIAL:
        (rate_u,) = uptime.params
        (rate_p,) = proc.params
        total = rate_u + rate_p
        # min(U, p) ~ Exp(total), independent of which one came first
        first, second = 1.0 / total, 2.0 / (total * total)
        return ConditionalMoments(
            q=rate_u / total,
            a=first,
            b=first,
            c=second,
            d=second,
            success_prob=rate_p / total,
        )

    if uptime.family == Family.DETERMINISTIC:
        (u,) = uptime.params
        q = dists.survival(proc, u)
        return _finish(
            q=q,
            success=dists.cdf(proc, u),
            num_a=dists.partial_moment(proc, 1, u),
            num_c=dists.partial_moment(proc, 2, u),
            num_b=u * q,
            num_d=u * u * q,
            method=Method.CLOSED_FORM,
        )

    if proc.family == Family.DETERMINISTIC:
        (t,) = proc.params
        q = dists.cdf(uptime, t)
        success = dists.survival(uptime, t)
        return _finish(
            q=q,
            success=success,
            num_a=t * success,
            num_c=t * t * success,
            num_b=dists.partial_moment(uptime, 1, t),
            num_d=dists.partial_moment(uptime, 2, t),
            method=Method.CLOSED_FORM,
        )
    return None


# lower quantiles and upper tails at which each continuous law is split, so
# that every subinterval QUADPACK starts from holds a known share of the mass
_LOWER_PROBS = (1e-9, 1e-6, 1e-3, 0.1, 0.5, 0.9)
_UPPER_TAILS = (1e-2, 1e-3, 1e-6, 1e-9)


def _support(dist, tail_mass):
    family = dist.family
    if family == Family.UNIFORM:
        return dist.params
    if family == Family.DETERMINISTIC:
        return dist.params[0], dist.params[0]
    return 0.0, dists.upper_quantile(dist, tail_mass)


def _landmarks(dist, tail_mass):
    """Points where the law's CDF is not smooth, or that split its mass."""
    if dist.family == Family.UNIFORM:
        return list(dist.params)
    if dist.family == Family.DETERMINISTIC:
        return [dist.params[0]]
    return (
        [dists.quantile(dist, prob) for prob in _LOWER_PROBS]
        + [dists.upper_quantile(dist, tail) for tail in _UPPER_TAILS]
        + [dists.upper_quantile(dist, tail_mass)]
    )


class _Integrator:
    """Stieltjes integrals over one law, truncated at a common horizon.

    Both laws' landmarks are breakpoints: the integrating law's locate its
    mass and the other law's locate where the integrand turns.
    """

    def __init__(self, uptime, proc, abs_tol, rel_tol, tail_mass, limit):
        self.abs_tol = abs_tol
        self.rel_tol = rel_tol
        self.limit = limit
        self.horizon = max(_support(uptime, tail_mass)[1], _support(proc, tail_mass)[1])
        self.breakpoints = sorted(
            set(_landmarks(uptime, tail_mass) + _landmarks(proc, tail_mass))
        )

    def expect(self, fn, dist, label, scale=1.0):
        """Integral of ``fn`` against dF_dist, as (value, abs_error)."""
        if dist.is_deterministic:
            return fn(dist.params[0]), 0.0

        if dist.family == Family.UNIFORM:
            lo, hi = dist.params
        else:
            lo, hi = 0.0, self.horizon
        points = sorted({x for x in self.breakpoints if lo < x < hi}) or None
        epsabs = self.abs_tol * scale
        result = integrate.quad(
            lambda x: fn(x) * dists.pdf(dist, x),
            lo,
            hi,
            points=points,
            epsabs=epsabs,
            epsrel=self.rel_tol,
            limit=self.limit,
            full_output=1,
        )
        value, abs_error = result[0], result[1]
        if len(result) > 3 and abs_error > max(epsabs, self.rel_tol * abs(value)):
            raise QuadratureFailure(
                f"integral {label} over [{lo:g}, {hi:g}] did not converge: {result[3]}",
                abs_error=abs_error,
            )
        logger.debug("quadrature %s = %r (abs error %.3g)", label, value, abs_error)
        return value, abs_error


def _check_mass(q, success, abs_tol, tail_mass):
    """q and 1 - q are integrated separately and must add up to one."""
    slack = tail_mass + 10.0 * abs_tol
    missing = 1.0 - (q + success)
    if abs(missing) > slack:
        raise QuadratureFailure(
            f"q + (1-q) = {q + success!r}: quadrature lost {missing:.3g} of the "
            f"probability mass (allowed {slack:.3g})",
            abs_error=abs(missing),
        )


def _quadrature(uptime, proc, abs_tol, rel_tol, tail_mass, limit):
    integrator = _Integrator(uptime, proc, abs_tol, rel_tol, tail_mass, limit)
    expect = integrator.expect

    q, err_q = expect(lambda t: dists.prob_below(uptime, t), proc, "q")
    success, err_s = expect(lambda t: dists.prob_at_least(uptime, t), proc, "1-q")
    _check_mass(q, success, abs_tol, tail_mass)
    errors = [err_q, err_s]

    num_a = num_c = num_b = num_d = 0.0
    if success > 0:
        num_a, err = expect(
            lambda t: t * dists.prob_at_least(uptime, t), proc, "a(1-q)", scale=success
        )
        errors.append(err / success)
        num_c, err = expect(
            lambda t: t * t * dists.prob_at_least(uptime, t), proc, "c(1-q)", scale=success
        )
        errors.append(err / success)
    if q > 0:
        num_b, err = expect(lambda u: u * dists.survival(proc, u), uptime, "bq", scale=q)
        errors.append(err / q)
        num_d, err = expect(lambda u: u * u * dists.survival(proc, u), uptime, "dq", scale=q)
        errors.append(err / q)

    return _finish(
        q=q,
        success=success,
        num_a=num_a,
        num_c=num_c,
        num_b=num_b,
        num_d=num_d,
        method=Method.QUADRATURE,
        est_abs_error=max(errors),
    )


def conditional_stats(
    uptime,
    proc,
    *,
    force_quadrature=False,
    abs_tol=DEFAULT_ABS_TOL,
    rel_tol=DEFAULT_REL_TOL,
    tail_mass=DEFAULT_TAIL_MASS,
    limit=DEFAULT_LIMIT,
):
    """Compute (q, a, b, c, d) for independent ``uptime`` and ``proc`` laws.

    Closed forms are used for (Exponential, Deterministic), (Exponential,
    Exponential), (Deterministic, continuous) and (continuous, Deterministic);
    every other pair, or any pair when ``force_quadrature`` is set, goes
    through adaptive Gauss-Kronrod quadrature truncated at the larger law's
    ``1 - tail_mass`` quantile.

    Raises AtomCollision when both laws are the same atom and
    QuadratureFailure when an integral misses its tolerance or when q and
    1 - q, integrated separately, do not add up to one.
    """
    if uptime.is_deterministic and proc.is_deterministic:
        return _deterministic_pair(uptime, proc)

    if not force_quadrature:
        closed = _closed_form(uptime, proc)
        if closed is not None:
            logger.debug("closed form for uptime=%s proc=%s", uptime, proc)
            return closed

    logger.debug("quadrature for uptime=%s proc=%s", uptime, proc)
    return _quadrature(uptime, proc, abs_tol, rel_tol, tail_mass, limit)


def success_probability(uptime, proc, **options):
    """q = P{U < p}, the probability that an attempt is interrupted."""
    return conditional_stats(uptime, proc, **options).q
