"""mrviol: macrorealism-violation experiments on a driven qubit.

Simulates the two standard tests at shot level: sequential-measurement
correlator inequalities (K strings over omega*tau) and detector-based
quasi-probability reconstruction with negativity detection, plus a
parametric NISQ noise model and resource accounting for comparing the two.
"""
from . import harness, lg, qndm, simcore, spectral
from .errors import CircuitError, ConfigurationError, EmptyDataError

__version__ = "0.1.0"

__all__ = [
    "CircuitError",
    "ConfigurationError",
    "EmptyDataError",
    "harness",
    "lg",
    "qndm",
    "simcore",
    "spectral",
]
