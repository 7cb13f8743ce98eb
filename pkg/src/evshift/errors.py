"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, configuration
and data problems exit 2, solver failures exit 3.
"""


class EvShiftError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(EvShiftError):
    """Bad command-line invocation (unknown flag combos, invalid step sizes)."""


class ConfigError(EvShiftError):
    """A configuration value or file violates its contract."""


class DataError(EvShiftError):
    """A data file or in-memory series violates its contract."""


class SolverError(EvShiftError):
    """The LP solver failed or returned an unusable solution."""
