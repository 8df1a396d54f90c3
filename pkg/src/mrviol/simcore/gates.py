"""Gate matrices and the standard circuit fragments of the protocol.

The fragment builders return tuples of :class:`GateOp` in application order
(leftmost applied first). Global phases are never tracked; equality of the
produced unitaries is always understood modulo a phase.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .circuit import GateOp

_SQRT2 = np.sqrt(2.0)


def h(qubit: int) -> GateOp:
    return GateOp("h", (qubit,))


def u1(alpha: float, qubit: int) -> GateOp:
    """Phase gate diag(1, e^{i alpha})."""
    return GateOp("u1", (qubit,), (float(alpha),))


def u2(alpha: float, beta: float, qubit: int) -> GateOp:
    """(1/sqrt2) [[1, -e^{i beta}], [e^{i alpha}, e^{i(alpha+beta)}]]."""
    return GateOp("u2", (qubit,), (float(alpha), float(beta)))


def rz(theta: float, qubit: int) -> GateOp:
    """Rotation about z: diag(e^{-i theta/2}, e^{i theta/2})."""
    return GateOp("rz", (qubit,), (float(theta),))


def cx(control: int, target: int) -> GateOp:
    return GateOp("cx", (control, target))


def szz(lam: float, qubit_a: int, qubit_b: int) -> GateOp:
    """Symmetric two-qubit phase coupling exp{i (lam/2) Z (x) Z}.

    Diagonal in the computational basis with phases +lam/2 on |00>, |11>
    and -lam/2 on |01>, |10>.
    """
    return GateOp("szz", (qubit_a, qubit_b), (float(lam),))


def gate_matrix(op: GateOp) -> np.ndarray:
    """Unitary matrix of a gate op on its own qubits (2x2 or 4x4)."""
    if op.kind == "h":
        return np.array([[1, 1], [1, -1]], dtype=complex) / _SQRT2
    if op.kind == "u1":
        (a,) = op.params
        return np.array([[1, 0], [0, np.exp(1j * a)]], dtype=complex)
    if op.kind == "u2":
        a, b = op.params
        return np.array(
            [[1, -np.exp(1j * b)], [np.exp(1j * a), np.exp(1j * (a + b))]],
            dtype=complex,
        ) / _SQRT2
    if op.kind == "rz":
        (t,) = op.params
        return np.array(
            [[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]], dtype=complex
        )
    if op.kind == "cx":
        return np.array(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
            dtype=complex,
        )
    if op.kind == "szz":
        (lam,) = op.params
        p, m = np.exp(1j * lam / 2), np.exp(-1j * lam / 2)
        return np.diag([p, m, m, p]).astype(complex)
    raise AssertionError(op.kind)


@lru_cache(maxsize=65536)
def expanded_matrix(op: GateOp, n_qubits: int) -> np.ndarray:
    """Embed a gate into the full 2^n-dimensional space.

    Qubit 0 is the most significant index bit; ``op.qubits[0]`` maps to the
    most significant bit of the small matrix. Results are cached; callers
    must treat them as read-only.
    """
    m = gate_matrix(op)
    k = len(op.qubits)
    dim = 1 << n_qubits
    full = np.zeros((dim, dim), dtype=complex)
    shifts = [n_qubits - 1 - q for q in op.qubits]
    for col in range(dim):
        sub_in = 0
        for s in shifts:
            sub_in = (sub_in << 1) | ((col >> s) & 1)
        for sub_out in range(1 << k):
            amp = m[sub_out, sub_in]
            if amp == 0:
                continue
            row = col
            for b, s in enumerate(shifts):
                bit = (sub_out >> (k - 1 - b)) & 1
                row = (row & ~(1 << s)) | (bit << s)
            full[row, col] += amp
    return full


def build_initial_state(theta: float, phi: float, qubit: int = 0) -> tuple[GateOp, ...]:
    """Fragment preparing cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.

    Composed as U1(phi + pi/2) H U1(theta) H acting on |0>, up to a global
    phase.
    """
    return (h(qubit), u1(theta, qubit), h(qubit), u1(phi + np.pi / 2, qubit))


def build_evolution(alpha: float, qubit: int = 0) -> tuple[GateOp, ...]:
    """Fragment implementing exp(-i alpha X) = H Rz(2 alpha) H.

    For evolution over a time tau under H = omega X / 2 the caller passes
    alpha = omega*tau/2.
    """
    return (h(qubit), rz(2 * alpha, qubit), h(qubit))


def build_interaction(lam: float, system: int = 0, detector: int = 1) -> tuple[GateOp, ...]:
    """Fragment implementing exp{i (lam/2) Z (x) Z} up to a global phase.

    Decomposed as CX (I (x) U1(-lam)) CX with the system qubit as control.
    The phase gate argument is -lam (not -2*lam) because the coupling here
    carries the lam/2 convention of the detector protocol.
    """
    return (cx(system, detector), u1(-lam, detector), cx(system, detector))
