"""Exception hierarchy for adder-capacity.

Every error raised by the library derives from CapacityError (itself a
ValueError, so callers that only know about ValueError keep working). Each
class carries the process exit code the CLI uses when the error escapes a
command handler.
"""


class CapacityError(ValueError):
    """Base class for all adder-capacity errors."""

    exit_code = 3


class DomainError(CapacityError):
    """A numeric argument lies outside the domain of an operation."""

    exit_code = 3


class ChannelConfigError(CapacityError):
    """Invalid (Q, S) channel instance."""

    exit_code = 3


class DistributionError(CapacityError):
    """An input distribution violates its invariants."""

    exit_code = 3


class ConfigError(CapacityError):
    """Malformed configuration file or numeric control."""

    exit_code = 3


class GridError(CapacityError):
    """Invalid gamma grid specification (a usage error)."""

    exit_code = 2


class SeriesConvergenceError(CapacityError):
    """An infinite series did not meet its stop rule within max_terms."""

    exit_code = 4


class OptimizerError(CapacityError):
    """The golden-section search could not bracket an interior maximum."""

    exit_code = 4


class EnumerationLimitError(CapacityError):
    """An exact enumeration would exceed its state cap."""

    exit_code = 5


class SimulationError(CapacityError):
    """The Monte Carlo simulator refused its configuration."""

    exit_code = 5


class VerificationError(CapacityError):
    """At least one verification case failed."""

    exit_code = 1
