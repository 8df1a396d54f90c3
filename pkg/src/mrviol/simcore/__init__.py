"""Dense exact simulation of few-qubit circuits.

Two backends: a pure statevector with mid-circuit collapse and shot
sampling, and a density matrix with parametric noise channels. States and
circuits are immutable values; every operation is a pure function of its
inputs and seed, safe to evaluate concurrently.
"""
from .circuit import Circuit, GateOp, Measure, ShotCounts
from .density import MixedState, NoiseModel, evolve_density, run_density
from .gates import (
    build_evolution,
    build_initial_state,
    build_interaction,
    cx,
    expanded_matrix,
    gate_matrix,
    h,
    rz,
    szz,
    u1,
    u2,
)
from .statevector import (
    PureState,
    apply_gate,
    exact_probabilities,
    final_state,
    run_shots,
    sample_counts,
)

__all__ = [
    "Circuit",
    "GateOp",
    "Measure",
    "MixedState",
    "NoiseModel",
    "PureState",
    "ShotCounts",
    "apply_gate",
    "build_evolution",
    "build_initial_state",
    "build_interaction",
    "cx",
    "evolve_density",
    "exact_probabilities",
    "expanded_matrix",
    "final_state",
    "gate_matrix",
    "h",
    "run_density",
    "run_shots",
    "rz",
    "sample_counts",
    "szz",
    "u1",
    "u2",
]
