"""Monte Carlo oracle for the completion time of a preempt-repeat job.

Each attempt draws, in this order, the processing time p, the uptime U and,
only if the attempt is interrupted (U < p), the downtime D. The successful
attempt's downtime is never drawn.

Path ``i`` of a campaign seeded with ``seed`` uses its own generator,
``path_rng(seed, i)``, so estimates do not depend on how paths are spread
over worker processes.
"""

import logging
import math
from dataclasses import asdict, dataclass
from multiprocessing import Pool

import numpy as np
import simpy

from .distributions import sample
from .exceptions import AttemptCapExceeded, InvalidParameter

logger = logging.getLogger(__name__)

DEFAULT_MAX_ATTEMPTS = 1_000_000
DEFAULT_HISTOGRAM_BINS = 10


@dataclass(frozen=True)
class SimulationEstimate:
    n: int
    mean_r: float
    mean_r2: float
    se_mean: float
    se_mean2: float
    mean_attempts: float
    se_attempts: float
    max_attempts_hit: int
    seed: int
    attempt_counts: tuple = ()

    def to_dict(self):
        data = asdict(self)
        data["attempt_counts"] = list(self.attempt_counts)
        return data

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data["attempt_counts"] = tuple(data.get("attempt_counts", ()))
        return cls(**data)


def path_rng(seed, index):
    """Independent generator for path ``index`` of the campaign ``seed``."""
    sequence = np.random.SeedSequence(seed, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(sequence))


def _check_cap(max_attempts):
    if max_attempts < 1:
        raise InvalidParameter(f"max_attempts must be >= 1, got {max_attempts!r}")


def simulate_completion(scenario, rng, max_attempts=DEFAULT_MAX_ATTEMPTS):
    """One realisation of (R, attempts).

    R = p_n + sum over k < n of (U_k + D_k), accumulated left to right,
    where n is the first attempt with U_n >= p_n.
    """
    _check_cap(max_attempts)
    elapsed = 0.0
    for attempt in range(1, max_attempts + 1):
        p = sample(scenario.proc, rng)
        u = sample(scenario.uptime, rng)
        if u >= p:
            return elapsed + p, attempt
        elapsed += u
        elapsed += sample(scenario.downtime, rng)
    raise AttemptCapExceeded(max_attempts)


class BreakdownMachine:
    """Event-driven timeline of one job on a machine that keeps breaking.

    The job restarts from scratch each time the machine comes back up; it is
    done once an uptime lasts at least as long as the current attempt's work.
    """

    def __init__(self, env, scenario, rng, max_attempts):
        self.env = env
        self.scenario = scenario
        self.rng = rng
        self.max_attempts = max_attempts
        self.attempts = 0
        self.completed_at = None
        self.process = env.process(self.run_job())

    def run_job(self):
        while self.attempts < self.max_attempts:
            self.attempts += 1
            duration = sample(self.scenario.proc, self.rng)
            uptime = sample(self.scenario.uptime, self.rng)
            work = self.env.timeout(duration)
            breakdown = self.env.timeout(uptime)
            yield work | breakdown
            # events that land on the same clock reading: the job survives
            # only if the uptime covers its work
            if work.processed and (not breakdown.processed or uptime >= duration):
                self.completed_at = self.env.now
                return
            yield self.env.timeout(sample(self.scenario.downtime, self.rng))


def event_driven_replay(scenario, rng, max_attempts=DEFAULT_MAX_ATTEMPTS):
    """R obtained by running the machine clock through up and down phases.

    Consumes ``rng`` in the same order as :func:`simulate_completion`, so the
    two return bit-identical completion times.
    """
    _check_cap(max_attempts)
    env = simpy.Environment()
    machine = BreakdownMachine(env, scenario, rng, max_attempts)
    env.run(until=machine.process)
    if machine.completed_at is None:
        raise AttemptCapExceeded(max_attempts)
    return machine.completed_at


def _simulate_chunk(args):
    """Paths ``start .. stop - 1`` and the number of them that hit the cap."""
    scenario, seed, start, stop, max_attempts = args
    completion = np.empty(stop - start)
    attempts = np.empty(stop - start, dtype=np.int64)
    truncated = 0
    for offset, index in enumerate(range(start, stop)):
        try:
            completion[offset], attempts[offset] = simulate_completion(
                scenario, path_rng(seed, index), max_attempts
            )
        except AttemptCapExceeded:
            truncated += 1
    return completion, attempts, truncated


def _chunks(n, workers):
    bounds = np.linspace(0, n, workers + 1).astype(int)
    return [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]


def estimate_moments(
    scenario,
    n,
    seed,
    max_attempts=DEFAULT_MAX_ATTEMPTS,
    *,
    workers=1,
    histogram_bins=DEFAULT_HISTOGRAM_BINS,
):
    """Monte Carlo estimates of E[R], E[R^2] and E[N] from ``n`` paths.

    Deterministic in (scenario, n, seed, max_attempts) whatever ``workers`` is.
    Every path is run to completion or to the cap; if any hit the cap the
    campaign raises AttemptCapExceeded carrying how many did.
    """
    if n < 2:
        raise InvalidParameter(f"n must be >= 2, got {n!r}")
    if seed < 0:
        raise InvalidParameter(f"seed must be >= 0, got {seed!r}")
    _check_cap(max_attempts)
    workers = max(1, min(int(workers), n))

    logger.info(
        "simulating %s: n=%d seed=%d workers=%d", scenario.name or "scenario", n, seed, workers
    )
    tasks = [(scenario, seed, lo, hi, max_attempts) for lo, hi in _chunks(n, workers)]
    if workers == 1:
        results = [_simulate_chunk(task) for task in tasks]
    else:
        with Pool(processes=workers) as pool:
            results = pool.map(_simulate_chunk, tasks)

    truncated = sum(result[2] for result in results)
    if truncated:
        logger.warning("%d path(s) hit max_attempts=%d", truncated, max_attempts)
        raise AttemptCapExceeded(max_attempts, failed_paths=truncated, n=n)

    completion = np.concatenate([result[0] for result in results])
    attempts = np.concatenate([result[1] for result in results])
    squares = completion * completion
    root_n = math.sqrt(n)
    counts = np.bincount(attempts, minlength=histogram_bins + 1)[1 : histogram_bins + 1]

    estimate = SimulationEstimate(
        n=n,
        mean_r=float(completion.mean()),
        mean_r2=float(squares.mean()),
        se_mean=float(completion.std(ddof=1)) / root_n,
        se_mean2=float(squares.std(ddof=1)) / root_n,
        mean_attempts=float(attempts.mean()),
        se_attempts=float(attempts.std(ddof=1)) / root_n,
        max_attempts_hit=0,
        seed=seed,
        attempt_counts=tuple(int(count) for count in counts),
    )
    logger.info("simulated mean R=%r (se %r)", estimate.mean_r, estimate.se_mean)
    return estimate


def estimate_conditional_moments(uptime, proc, n, seed):
    """Rejection-sampling estimates of (q, a, b, c, d), each with a standard error.

    Returns a dict mapping each name to ``(estimate, standard_error)``; a
    conditional moment whose conditioning event never occurred maps to None.
    """
    if n < 2:
        raise InvalidParameter(f"n must be >= 2, got {n!r}")
    rng = np.random.default_rng(seed)
    p = np.asarray(sample(proc, rng, size=n), dtype=float)
    u = np.asarray(sample(uptime, rng, size=n), dtype=float)
    interrupted = u < p

    q = float(interrupted.mean())
    estimates = {"q": (q, math.sqrt(q * (1.0 - q) / n))}
    for mean_name, square_name, values in (
        ("a", "c", p[~interrupted]),
        ("b", "d", u[interrupted]),
    ):
        for name, draws in ((mean_name, values), (square_name, values * values)):
            if draws.size < 2:
                estimates[name] = None
            else:
                estimates[name] = (
                    float(draws.mean()),
                    float(draws.std(ddof=1)) / math.sqrt(draws.size),
                )
    return estimates
