"""Density-matrix backend with a parametric NISQ noise model.

After every gate the backend applies, in order: the gate unitary, a
depolarizing channel (p1 or p2 by gate arity) on the touched qubits, and a
thermal-relaxation channel on each touched qubit using (t1, t2, gate
duration). Measurements branch the density matrix projectively
(measure-and-continue); the readout confusion matrix is composed into the
reported record distribution only, the post-measurement state keeps the
true outcome.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import CircuitError, ConfigurationError
from .circuit import Circuit, GateOp
from .gates import expanded_matrix

#: gate duration classes
ONE_QUBIT = "1q"
TWO_QUBIT = "2q"


def _check_confusion(m: np.ndarray):
    m = np.asarray(m, dtype=float)
    if m.shape != (2, 2) or np.any(m < 0) or np.max(np.abs(m.sum(axis=1) - 1)) > 1e-12:
        raise ConfigurationError("readout confusion must be 2x2 row-stochastic")
    return m


@dataclass(frozen=True)
class NoiseModel:
    """Per-gate-class error channels.

    p1/p2 are depolarizing probabilities for one-/two-qubit gates; t1, t2
    are relaxation and dephasing times in seconds (t2 <= 2*t1);
    gate_durations maps the duration class to seconds; readout_confusion is
    a row-stochastic 2x2 matrix P(report r | true t) applied to every
    measured qubit (a per-qubit mapping may be given instead).
    """

    p1: float = 1e-3
    p2: float = 1e-2
    t1: float = 100e-6
    t2: float = 80e-6
    gate_durations: dict = field(
        default_factory=lambda: {ONE_QUBIT: 50e-9, TWO_QUBIT: 300e-9}
    )
    readout_confusion: object = field(
        default_factory=lambda: np.array([[0.98, 0.02], [0.02, 0.98]])
    )

    def __post_init__(self):
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2 <= 1.0):
            raise ConfigurationError("depolarizing probabilities must be in [0, 1]")
        if self.t1 <= 0 or self.t2 <= 0:
            raise ConfigurationError("t1 and t2 must be positive")
        if self.t2 > 2 * self.t1 + 1e-18:
            raise ConfigurationError("t2 must not exceed 2*t1")
        for cls in (ONE_QUBIT, TWO_QUBIT):
            if self.gate_durations.get(cls, -1) < 0:
                raise ConfigurationError(f"missing or negative duration for {cls}")
        if isinstance(self.readout_confusion, dict):
            conf = {q: _check_confusion(m) for q, m in self.readout_confusion.items()}
        else:
            conf = _check_confusion(self.readout_confusion)
        object.__setattr__(self, "readout_confusion", conf)

    @classmethod
    def nisq_default(cls) -> "NoiseModel":
        """Preset with magnitudes typical of a small superconducting QPU."""
        return cls()

    def with_scaled_depolarizing(self, factor: float) -> "NoiseModel":
        """Copy with p1 and p2 multiplied by ``factor`` (capped at 1)."""
        return NoiseModel(
            p1=min(1.0, self.p1 * factor),
            p2=min(1.0, self.p2 * factor),
            t1=self.t1,
            t2=self.t2,
            gate_durations=dict(self.gate_durations),
            readout_confusion=self.readout_confusion,
        )

    def confusion_for(self, qubit: int) -> np.ndarray:
        if isinstance(self.readout_confusion, dict):
            try:
                return self.readout_confusion[qubit]
            except KeyError:
                raise ConfigurationError(f"no readout confusion for qubit {qubit}")
        return self.readout_confusion

    def cache_key(self) -> tuple:
        """Hashable fingerprint for memoizing noise-dependent results."""
        if isinstance(self.readout_confusion, dict):
            conf = tuple(
                (q, m.tobytes()) for q, m in sorted(self.readout_confusion.items())
            )
        else:
            conf = self.readout_confusion.tobytes()
        return (
            self.p1, self.p2, self.t1, self.t2,
            tuple(sorted(self.gate_durations.items())), conf,
        )


@dataclass(frozen=True, eq=False)
class MixedState:
    """Density operator over 2^n basis states."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        dim = 1 << self.n_qubits
        if m.shape != (dim, dim):
            raise CircuitError("density matrix shape does not match qubit count")

    def validate(self, tol: float = 1e-12):
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > tol:
            raise CircuitError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > tol:
            raise CircuitError("density matrix trace is not 1")
        if np.linalg.eigvalsh(m).min() < -1e-10:
            raise CircuitError("density matrix has a negative eigenvalue")

    @classmethod
    def zero(cls, n_qubits: int) -> "MixedState":
        dim = 1 << n_qubits
        m = np.zeros((dim, dim), dtype=complex)
        m[0, 0] = 1.0
        return cls(n_qubits, m)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


# ---------------------------------------------------------------------------
# channels

def _depolarize(rho: np.ndarray, qubits: tuple[int, ...], p: float,
                n: int) -> np.ndarray:
    """Replace the touched-qubit marginal with the maximally mixed state
    with probability p."""
    if p == 0.0:
        return rho
    t = rho.reshape([2] * (2 * n))
    # trace out the touched qubits, then re-tensor I/2^k in their place
    k = len(qubits)
    traced = t
    for q in sorted(qubits, reverse=True):
        traced = np.trace(traced, axis1=q, axis2=q + traced.ndim // 2)
    mixed = traced / (1 << k)
    # re-tensor I/2^k on the touched qubits (diagonal sub-blocks only)
    out = np.zeros_like(t)
    for sub in range(1 << k):
        idx = [slice(None)] * (2 * n)
        for b, q in enumerate(sorted(qubits)):
            bit = (sub >> (k - 1 - b)) & 1
            idx[q] = bit
            idx[q + n] = bit
        out[tuple(idx)] += mixed
    return (1 - p) * rho + p * out.reshape(rho.shape)


@lru_cache(maxsize=256)
def _relaxation_kraus(t1: float, t2: float, duration: float):
    """Amplitude damping toward |0> followed by pure dephasing.

    The combined channel decays populations with exp(-d/t1) and coherences
    with exp(-d/t2); t2 <= 2*t1 keeps the dephasing rate non-negative.
    """
    gamma = 1.0 - np.exp(-duration / t1)
    lam = 1.0 - np.exp(-2.0 * duration * (1.0 / t2 - 1.0 / (2.0 * t1)))
    ad = [
        np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex),
        np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex),
    ]
    pd = [
        np.array([[1, 0], [0, np.sqrt(1 - lam)]], dtype=complex),
        np.array([[0, 0], [0, np.sqrt(lam)]], dtype=complex),
    ]
    return ad, pd


def _apply_kraus_1q(rho: np.ndarray, kraus, qubit: int, n: int) -> np.ndarray:
    out = np.zeros_like(rho)
    for kmat in kraus:
        full = _embed_1q(kmat, qubit, n)
        out += full @ rho @ full.conj().T
    return out


def _embed_1q(m: np.ndarray, qubit: int, n: int) -> np.ndarray:
    return _embed_1q_cached(m.tobytes(), qubit, n)


@lru_cache(maxsize=4096)
def _embed_1q_cached(mbytes: bytes, qubit: int, n: int) -> np.ndarray:
    m = np.frombuffer(mbytes, dtype=complex).reshape(2, 2)
    full = np.array([[1.0]], dtype=complex)
    for q in range(n):
        full = np.kron(full, m if q == qubit else np.eye(2, dtype=complex))
    return full


def _apply_gate_with_noise(rho: np.ndarray, op: GateOp, n: int,
                           noise: NoiseModel | None) -> np.ndarray:
    u = expanded_matrix(op, n)
    rho = u @ rho @ u.conj().T
    if noise is None:
        return rho
    if len(op.qubits) == 1:
        p, cls = noise.p1, ONE_QUBIT
    else:
        p, cls = noise.p2, TWO_QUBIT
    rho = _depolarize(rho, op.qubits, p, n)
    ad, pd = _relaxation_kraus(noise.t1, noise.t2, noise.gate_durations[cls])
    for q in op.qubits:
        rho = _apply_kraus_1q(rho, ad, q, n)
        rho = _apply_kraus_1q(rho, pd, q, n)
    return rho


def _projectors(qubit: int, n: int):
    shift = n - 1 - qubit
    bits = (np.arange(1 << n) >> shift) & 1
    p0 = np.diag((bits == 0).astype(complex))
    p1 = np.diag((bits == 1).astype(complex))
    return p0, p1


# ---------------------------------------------------------------------------
# drivers

def run_density(circuit: Circuit, noise: NoiseModel | None = None,
                prune: float = 1e-12) -> dict[str, float]:
    """Exact reported-outcome distribution on the density backend.

    With ``noise=None`` the result matches ``exact_probabilities`` from the
    statevector backend up to round-off.
    """
    slot_qubit: dict[int, int] = {}
    results: dict[str, float] = {}

    def walk(rho: np.ndarray, idx: int, record: list, weight: float):
        for i in range(idx, len(circuit.events)):
            ev = circuit.events[i]
            if isinstance(ev, GateOp):
                rho = _apply_gate_with_noise(rho, ev, circuit.n_qubits, noise)
                continue
            slot_qubit[ev.slot] = ev.qubit
            p0, p1 = _projectors(ev.qubit, circuit.n_qubits)
            for outcome, proj in ((0, p0), (1, p1)):
                branch = proj @ rho @ proj
                p = np.trace(branch).real
                if p <= prune:
                    continue
                record[ev.slot] = outcome
                walk(branch / p, i + 1, record, weight * p)
            return
        key = tuple(record)
        results[key] = results.get(key, 0.0) + weight

    walk(MixedState.zero(circuit.n_qubits).matrix, 0,
         [0] * circuit.n_slots, 1.0)

    if circuit.n_slots == 0:
        return {"": 1.0}
    if noise is None:
        return {"".join(map(str, k)): v for k, v in results.items()}
    # compose readout confusion slot by slot
    reported: dict[str, float] = {}
    n_slots = circuit.n_slots
    for true_rec, p in results.items():
        partial = {(): p}
        for slot in range(n_slots):
            conf = noise.confusion_for(slot_qubit[slot])
            nxt = {}
            for rec, w in partial.items():
                for r in (0, 1):
                    nxt[rec + (r,)] = nxt.get(rec + (r,), 0.0) + w * conf[true_rec[slot], r]
            partial = nxt
        for rec, w in partial.items():
            key = "".join(map(str, rec))
            reported[key] = reported.get(key, 0.0) + w
    return reported


def evolve_density(circuit: Circuit, noise: NoiseModel | None = None) -> MixedState:
    """Final density matrix; measurement events dephase projectively."""
    rho = MixedState.zero(circuit.n_qubits).matrix
    for ev in circuit.events:
        if isinstance(ev, GateOp):
            rho = _apply_gate_with_noise(rho, ev, circuit.n_qubits, noise)
        else:
            p0, p1 = _projectors(ev.qubit, circuit.n_qubits)
            rho = p0 @ rho @ p0 + p1 @ rho @ p1
    state = MixedState(circuit.n_qubits, rho)
    state.validate(tol=1e-9)
    return state
