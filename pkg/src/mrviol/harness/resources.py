"""Circuit-evaluation accounting for the two protocols.

The correlator method runs 3 circuits per estimate; the detector method
runs 2 circuits (one per quadrature) for each of the lambda_max /
delta_lambda coupling steps.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

N_MEAS_LG = 3
N_MEAS_QNDM = 2


@dataclass(frozen=True)
class ResourceReport:
    n_meas_lg: int
    n_meas_qndm: int
    n_steps_lambda: int
    n_lg: int
    n_qndm: int

    def as_dict(self) -> dict:
        return asdict(self)


def resource_counts(shots_lg: int, shots_qndm: int, lambda_max: float,
                    delta_lambda: float) -> ResourceReport:
    n_steps = int(round(lambda_max / delta_lambda))
    return ResourceReport(
        n_meas_lg=N_MEAS_LG,
        n_meas_qndm=N_MEAS_QNDM,
        n_steps_lambda=n_steps,
        n_lg=N_MEAS_LG * shots_lg,
        n_qndm=N_MEAS_QNDM * n_steps * shots_qndm,
    )


def resource_report(config) -> ResourceReport:
    """Totals for a config; compare mode uses the same shots for both."""
    return resource_counts(config.shots, config.shots, config.lambda_max,
                           config.delta_lambda)
