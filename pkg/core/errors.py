"""
Exception hierarchy for SqueezeLab.

Library code raises these; only main.py turns them into exit codes.
"""


class SqueezeLabError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class DomainError(SqueezeLabError, ValueError):
    """Raised when a mathematical precondition is violated (|C| >= K, r >= 1, E < m, ...)."""

    exit_code = 3


class UsageError(SqueezeLabError):
    """Raised when CLI input is malformed or out of range."""

    exit_code = 2
