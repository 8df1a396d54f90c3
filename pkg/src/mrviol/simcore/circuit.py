"""Circuit representation: gate operations, measurement events, shot records.

Bit conventions used throughout the package:

* qubit 0 is the most significant bit of a basis-state index, so for two
  qubits the basis order is ``|00>, |01>, |10>, |11>`` with qubit 0 written
  first (qubit 0 = system, qubit 1 = detector in the protocol circuits);
* classical records are strings with slot 0 leftmost.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import CircuitError

#: gate kinds and their arity
GATE_ARITY = {"h": 1, "u1": 1, "u2": 1, "rz": 1, "cx": 2, "szz": 2}

#: number of angle parameters per kind
GATE_NPARAMS = {"h": 0, "u1": 1, "u2": 2, "rz": 1, "cx": 0, "szz": 1}


@dataclass(frozen=True)
class GateOp:
    """A single unitary applied to an ordered tuple of qubits.

    ``kind`` is one of ``h``, ``u1``, ``u2``, ``rz``, ``cx``, ``szz``;
    ``params`` holds angles in radians. For ``cx`` the qubit order is
    (control, target); ``szz`` is symmetric.
    """

    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != GATE_ARITY[self.kind]:
            raise CircuitError(
                f"{self.kind} expects {GATE_ARITY[self.kind]} qubit(s), "
                f"got {self.qubits}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"repeated qubit in {self.qubits}")
        if len(self.params) != GATE_NPARAMS[self.kind]:
            raise CircuitError(
                f"{self.kind} expects {GATE_NPARAMS[self.kind]} parameter(s)"
            )
        if not all(math.isfinite(p) for p in self.params):
            raise CircuitError(f"non-finite parameter in {self.params}")


@dataclass(frozen=True)
class Measure:
    """Projective measurement of ``qubit`` recorded into classical ``slot``."""

    qubit: int
    slot: int


@dataclass(frozen=True)
class Circuit:
    """Ordered list of gate applications and measurement events.

    Immutable after construction; all simulation backends treat circuits
    as pure values.
    """

    n_qubits: int
    events: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= 3:
            raise CircuitError("dense backends support 1..3 qubits")
        object.__setattr__(self, "events", tuple(self.events))
        slots = []
        for ev in self.events:
            if isinstance(ev, GateOp):
                qs = ev.qubits
            elif isinstance(ev, Measure):
                qs = (ev.qubit,)
                slots.append(ev.slot)
            else:
                raise CircuitError(f"unknown event {ev!r}")
            for q in qs:
                if not 0 <= q < self.n_qubits:
                    raise CircuitError(
                        f"event {ev!r} references qubit {q} outside "
                        f"0..{self.n_qubits - 1}"
                    )
        if len(slots) != len(set(slots)):
            raise CircuitError("measurement slots must be distinct")
        if slots and sorted(slots) != list(range(len(slots))):
            raise CircuitError("measurement slots must be 0..n_measures-1")

    @property
    def n_slots(self) -> int:
        return sum(1 for ev in self.events if isinstance(ev, Measure))

    @property
    def measures(self) -> tuple[Measure, ...]:
        return tuple(ev for ev in self.events if isinstance(ev, Measure))


@dataclass
class ShotCounts:
    """Outcome histogram of a sampled run: record bitstring -> count."""

    outcomes: dict[str, int]
    total: int

    def __post_init__(self):
        if sum(self.outcomes.values()) != self.total:
            raise ValueError("counts do not sum to total")

    def frequencies(self) -> dict[str, float]:
        return {k: v / self.total for k, v in self.outcomes.items()}
