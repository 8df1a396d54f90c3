"""Pure-state backend: dense statevector with mid-circuit collapse.

``run_shots`` samples the Born distribution at every measurement event and
collapses the state (measure-and-continue). ``exact_probabilities`` sums
over all collapse branches instead and serves as the sampling oracle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import CircuitError
from .circuit import Circuit, GateOp, Measure, ShotCounts
from .gates import expanded_matrix

_NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PureState:
    """Complex amplitude vector over 2^n basis states, unit norm."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (1 << self.n_qubits,):
            raise CircuitError(
                f"amplitude vector of length {amps.shape} does not match "
                f"{self.n_qubits} qubit(s)"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-9:
            raise CircuitError(f"state norm {norm} is not 1")

    @classmethod
    def zero(cls, n_qubits: int) -> "PureState":
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    def _bit_mask(self, qubit: int) -> np.ndarray:
        shift = self.n_qubits - 1 - qubit
        return (np.arange(self.amplitudes.size) >> shift) & 1

    def outcome_masses(self, qubit: int) -> tuple[float, float]:
        """Amplitude mass on the 0- and 1-slices of ``qubit``.

        Computed per slice (not as 1 - other) so float drift of the overall
        norm cannot fabricate a phantom branch.
        """
        idx = self._bit_mask(qubit)
        m = np.abs(self.amplitudes) ** 2
        return float(m[idx == 0].sum()), float(m[idx == 1].sum())

    def probability_one(self, qubit: int) -> float:
        """Born probability of reading 1 on ``qubit``."""
        m0, m1 = self.outcome_masses(qubit)
        return m1 / (m0 + m1)

    def collapsed(self, qubit: int, outcome: int) -> "PureState":
        amps = np.where(self._bit_mask(qubit) == outcome,
                        self.amplitudes, 0.0)
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise CircuitError(f"collapse onto an empty branch of qubit {qubit}")
        return PureState(self.n_qubits, amps / norm)


def apply_gate(state: PureState, gate: GateOp) -> PureState:
    """Apply a unitary gate; norm is preserved up to round-off."""
    if any(q >= state.n_qubits for q in gate.qubits):
        raise CircuitError(
            f"gate on qubits {gate.qubits} does not fit a "
            f"{state.n_qubits}-qubit state"
        )
    u = expanded_matrix(gate, state.n_qubits)
    return PureState(state.n_qubits, u @ state.amplitudes)


def run_shots(circuit: Circuit, shots: int, seed) -> ShotCounts:
    """Sample ``shots`` end-to-end runs of the circuit.

    Each measurement event samples the Born distribution of the measured
    qubit, collapses the state and writes the record slot. Deterministic
    given (circuit, shots, seed).
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    counts: dict[str, int] = {}
    for _ in range(shots):
        state = PureState.zero(circuit.n_qubits)
        record = [""] * circuit.n_slots
        for ev in circuit.events:
            if isinstance(ev, GateOp):
                state = apply_gate(state, ev)
            else:
                outcome = 1 if rng.random() < state.probability_one(ev.qubit) else 0
                state = state.collapsed(ev.qubit, outcome)
                record[ev.slot] = str(outcome)
        key = "".join(record)
        counts[key] = counts.get(key, 0) + 1
    return ShotCounts(counts, shots)


def exact_probabilities(circuit: Circuit, prune: float = 1e-12) -> dict[str, float]:
    """Exact outcome distribution over record bitstrings (branch sum).

    Walks the full tree of measurement collapses, no sampling. Oracle for
    ``run_shots`` and for the noiseless density backend. Branches whose
    probability falls below ``prune`` (float-noise level) are dropped.
    """
    if circuit.n_slots == 0:
        raise CircuitError("circuit has no measurement events")
    probs: dict[str, float] = {}

    def walk(state: PureState, idx: int, record: list, weight: float):
        for i in range(idx, len(circuit.events)):
            ev = circuit.events[i]
            if isinstance(ev, GateOp):
                state = apply_gate(state, ev)
                continue
            m0, m1 = state.outcome_masses(ev.qubit)
            total = m0 + m1
            for outcome, mass in ((0, m0), (1, m1)):
                p = mass / total
                if p <= prune:
                    continue
                record[ev.slot] = str(outcome)
                walk(state.collapsed(ev.qubit, outcome), i + 1,
                     record, weight * p)
            return
        key = "".join(record)
        probs[key] = probs.get(key, 0.0) + weight

    walk(PureState.zero(circuit.n_qubits), 0, [""] * circuit.n_slots, 1.0)
    return probs


def final_state(circuit: Circuit) -> PureState:
    """Apply all gates of a measurement-free circuit to |0...0>."""
    state = PureState.zero(circuit.n_qubits)
    for ev in circuit.events:
        if isinstance(ev, Measure):
            raise CircuitError("final_state requires a measurement-free circuit")
        state = apply_gate(state, ev)
    return state


def sample_counts(probs: dict[str, float], shots: int, rng) -> ShotCounts:
    """Multinomial draw from an exact outcome distribution.

    Statistically identical to ``run_shots`` on the corresponding circuit;
    used by the sweep drivers so exact distributions can be computed once
    and resampled cheaply.
    """
    keys = sorted(probs)
    pvals = np.array([probs[k] for k in keys])
    pvals = pvals / pvals.sum()
    draws = rng.multinomial(shots, pvals)
    return ShotCounts({k: int(c) for k, c in zip(keys, draws) if c > 0}, shots)
