"""Shared test helpers: oracles and comparison utilities."""
import numpy as np

from mrviol import lg, qndm
from mrviol.simcore import Measure, expanded_matrix


def compose_fragment(events, n_qubits):
    """Total unitary of a gate fragment (application order -> left product)."""
    total = np.eye(1 << n_qubits, dtype=complex)
    for op in events:
        total = expanded_matrix(op, n_qubits) @ total
    return total


def assert_unitary_equal_up_to_phase(actual, expected, tol=1e-10):
    """Compare unitaries modulo a global phase."""
    idx = np.unravel_index(np.argmax(np.abs(expected)), expected.shape)
    assert abs(actual[idx]) > 1e-12, "matrices differ in support"
    phase = expected[idx] / actual[idx]
    assert abs(abs(phase) - 1.0) < 1e-6, "relative factor is not a phase"
    np.testing.assert_allclose(phase * actual, expected, atol=tol)


def assert_state_equal_up_to_phase(actual, expected, tol=1e-10):
    actual = np.asarray(actual, dtype=complex)
    expected = np.asarray(expected, dtype=complex)
    idx = int(np.argmax(np.abs(expected)))
    phase = expected[idx] / actual[idx]
    np.testing.assert_allclose(phase * actual, expected, atol=tol)


def tvd(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def exact_g_path_sum(lam: float, omega_tau: float) -> complex:
    """Independent oracle for the quasi-characteristic function.

    Double path sum over the measurement branches: each cross term between
    the two detector branches carries the phase e^{i lam D} with
    D = a_k + (a_i + a_j + a_l + a_m)/2, conjugated to match the package's
    coherence orientation.
    """
    a = np.array([1.0, -1.0])
    half = omega_tau / 2.0
    u = np.array([[np.cos(half), -1j * np.sin(half)],
                  [-1j * np.sin(half), np.cos(half)]])
    psi = np.array([1.0, 1j]) / np.sqrt(2.0)
    total = 0.0 + 0.0j
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    for m in range(2):
                        delta = a[k] + (a[i] + a[j] + a[l] + a[m]) / 2.0
                        amp = (u[k, j] * u[j, i] * psi[i]
                               * np.conj(u[k, m] * u[m, l] * psi[l]))
                        total += np.exp(1j * lam * delta) * amp
    return np.conj(total)


def circuit_corpus():
    """Representative circuits exercised by both backends."""
    circuits = []
    for pair in lg.PAIRS:
        for x in (0.0, 0.7, 1.5, np.pi / 2, 2.4, 5.0):
            circuits.append(lg.build_lg_circuit(pair, x))
    for lam in (0.0, 0.5, 1.0, 2.0):
        for part in (qndm.QndmPart.REAL, qndm.QndmPart.IMAG):
            circuits.append(qndm.build_qndm_circuit(lam, 1.5, part))
    # small ad-hoc circuits with mid-circuit measurement on 3 qubits
    from mrviol.simcore import Circuit, cx, h, rz, u1

    circuits.append(Circuit(3, (
        h(0), cx(0, 1), Measure(1, 0), rz(0.3, 2), cx(1, 2), h(2),
        Measure(2, 1), u1(1.1, 0), Measure(0, 2),
    )))
    circuits.append(Circuit(2, (h(0), Measure(0, 0), h(0), Measure(0, 1))))
    return circuits
