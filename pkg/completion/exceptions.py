"""Errors raised by the completion-time library.

Management commands map each of these onto a stable exit code, see
``completion.management.commands._base``.
"""

from django.core.exceptions import ValidationError


class CompletionError(Exception):
    """Base class for every error raised by this app."""


class InvalidParameter(CompletionError, ValidationError):
    """A distribution or operation parameter is outside its allowed range."""

    def __init__(self, message):
        ValidationError.__init__(self, message, code="invalid_parameter")

    def __str__(self):
        return self.message


class UnsupportedForDeterministic(CompletionError):
    """A Deterministic law has no density."""


class AtomCollision(CompletionError):
    """Uptime and processing time are the same atom, so P{U = p} = 1."""


class QuadratureFailure(CompletionError):
    """The adaptive integrator could not reach the requested tolerance."""

    def __init__(self, message, abs_error=None):
        super().__init__(message)
        self.abs_error = abs_error


class NeverCompletes(CompletionError):
    """Every attempt fails almost surely (q = 1)."""

    def __init__(self, message="job never completes (q=1)"):
        super().__init__(message)


class UndefinedMoment(CompletionError):
    """A conditional moment is needed but its conditioning event has probability 0."""


class InconsistentMoments(CompletionError):
    """E[R^2] - E[R]^2 is materially negative."""


class AttemptCapExceeded(CompletionError):
    """A simulated path did not succeed within ``max_attempts`` attempts."""

    def __init__(self, max_attempts, failed_paths=1, n=None):
        self.max_attempts = max_attempts
        self.failed_paths = failed_paths
        self.n = n
        if n is None:
            message = f"no successful attempt within max_attempts={max_attempts}"
        else:
            message = (
                f"{failed_paths} of {n} paths exceeded max_attempts={max_attempts}"
            )
        super().__init__(message)


class ScenarioError(CompletionError):
    """A scenario file could not be read, parsed, or validated."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        self.detail = message
        prefix = ""
        if path is not None:
            prefix = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(prefix + message)


class NearDegenerateWarning(UserWarning):
    """q is so close to 1 that the geometric factor q/(1-q) is enormous."""
