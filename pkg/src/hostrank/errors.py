"""Exception types shared across the toolkit.

The CLI maps these onto distinct exit codes, so library code should
pick the class by what went wrong, not by where it happened.
"""


class ConfigError(ValueError):
    """A configuration file or CLI argument is malformed or points at a missing path."""


class ValidationError(ValueError):
    """Input data violates a documented contract (shape, sign, coverage, consistency)."""


class NumericError(ArithmeticError):
    """A numeric routine failed: singular system, non-convergence, degenerate input."""
