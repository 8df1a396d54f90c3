"""Shared exception types."""


class CircuitError(ValueError):
    """A circuit references invalid qubits, slots, or gate parameters."""


class ConfigurationError(ValueError):
    """An operation was called with invalid or inconsistent parameters."""


class EmptyDataError(ValueError):
    """An estimator received no samples."""
