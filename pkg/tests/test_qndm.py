"""Detector interferometry: circuits, exact oracle, sampled sweeps."""
import numpy as np
import pytest

from mrviol import qndm
from mrviol.errors import ConfigurationError
from mrviol.simcore import Measure, exact_probabilities
from util import exact_g_path_sum


def test_circuit_structure():
    circ = qndm.build_qndm_circuit(0.7, 1.5, qndm.QndmPart.REAL)
    kinds = [ev.kind for ev in circ.events if not isinstance(ev, Measure)]
    assert kinds.count("cx") == 6          # three coupling blocks
    assert sum(1 for ev in circ.events if isinstance(ev, Measure)) == 1
    assert circ.events[-1].qubit == qndm.DETECTOR
    assert kinds[-1] == "h"                # real-part readout rotation

    circ_im = qndm.build_qndm_circuit(0.7, 1.5, qndm.QndmPart.IMAG)
    kinds_im = [ev.kind for ev in circ_im.events if not isinstance(ev, Measure)]
    assert kinds_im[-1] == "u2"


def test_zero_coupling_real_circuit_is_deterministic():
    circ = qndm.build_qndm_circuit(0.0, 1.5, qndm.QndmPart.REAL)
    probs = exact_probabilities(circ)
    assert probs == pytest.approx({"0": 1.0})


def test_zero_coupling_imag_part_vanishes():
    circ = qndm.build_qndm_circuit(0.0, 1.5, qndm.QndmPart.IMAG)
    probs = exact_probabilities(circ)
    assert probs.get("0", 0.0) - probs.get("1", 0.0) == pytest.approx(0.0, abs=1e-12)


def test_exact_g_against_path_sum_oracle():
    for omega_tau in (0.0, 0.6, 1.5, 2.8):
        for lam in np.linspace(0.0, 7.0, 23):
            got = qndm.exact_g(lam, omega_tau)
            want = exact_g_path_sum(lam, omega_tau)
            assert got == pytest.approx(want, abs=1e-12)


def test_exact_g_frozen_dynamics():
    # commuting dynamics: G(lam, 0) = cos(3 lam)
    for lam in (0.0, 0.3, 1.0, 2.5):
        assert qndm.exact_g(lam, 0.0) == pytest.approx(
            np.cos(3 * lam), abs=1e-12)


def test_exact_g_normalization_periodicity_symmetry():
    for omega_tau in (0.0, 1.5, 4.0):
        assert qndm.exact_g(0.0, omega_tau) == pytest.approx(1.0, abs=1e-14)
    for lam in (0.3, 1.7):
        a = qndm.exact_g(lam + 2 * np.pi, 1.5)
        b = qndm.exact_g(lam, 1.5)
        assert a == pytest.approx(b, abs=1e-10)
        assert qndm.exact_g(-lam, 1.5) == pytest.approx(
            np.conj(qndm.exact_g(lam, 1.5)), abs=1e-10)


def test_exact_g_bounded_on_dense_scan():
    lams = np.linspace(0, 40, 10_000)
    vals = np.array([qndm.exact_g(l, 1.5) for l in lams])
    assert np.abs(vals).max() <= 1 + 1e-10


def test_circuit_readout_matches_exact_g():
    # the measured quadratures of the gate-level circuits reproduce the
    # joint-state formula exactly
    for omega_tau in (0.4, 1.5, 3.0):
        for lam in np.linspace(0, 2 * np.pi, 9):
            got = qndm.quadrature_expectations(lam, omega_tau)
            want = qndm.exact_g(lam, omega_tau)
            assert got == pytest.approx(want, abs=1e-12)


def test_estimate_g_point_examples():
    g, re_err, im_err = qndm.estimate_g_point(0.0, 1.5, 1000, seed=0)
    assert g.real == pytest.approx(1.0)
    assert abs(g.imag) <= 3 * max(im_err, 1 / np.sqrt(1000))

    g, re_err, im_err = qndm.estimate_g_point(2 * np.pi, 0.9, 1000, seed=1)
    assert abs(g.real - 1.0) <= 3 * max(re_err, 1 / np.sqrt(1000))
    assert abs(g.imag) <= 3 * max(im_err, 1 / np.sqrt(1000))

    exact = qndm.exact_g(1.0, 1.5)
    g, re_err, im_err = qndm.estimate_g_point(1.0, 1.5, 1000, seed=2)
    assert abs(g.real - exact.real) <= 5 * max(re_err, 1e-3)
    assert abs(g.imag - exact.imag) <= 5 * max(im_err, 1e-3)


def test_sweep_shapes_and_grid():
    gc = qndm.sweep_g(1.5, lambda_max=100.0, delta_lambda=0.1, shots=10, seed=0)
    assert len(gc.lambda_grid) == 1001
    assert gc.lambda_grid[0] == 0.0
    assert gc.delta_lambda == pytest.approx(0.1)

    gc = qndm.sweep_g(1.5, lambda_max=100.0, delta_lambda=1.0, shots=10, seed=0)
    assert len(gc.lambda_grid) == 101
    assert gc.shots_per_point == 10


def test_sweep_preconditions():
    with pytest.raises(ConfigurationError):
        qndm.sweep_g(1.5, lambda_max=-1.0)
    with pytest.raises(ConfigurationError):
        qndm.sweep_g(1.5, lambda_max=10.0, delta_lambda=20.0)
    with pytest.raises(ConfigurationError):
        qndm.estimate_g_point(1.0, 1.5, shots=0, seed=0)


def test_sweep_deterministic():
    a = qndm.sweep_g(1.5, 5.0, 0.5, 200, seed=3)
    b = qndm.sweep_g(1.5, 5.0, 0.5, 200, seed=3)
    np.testing.assert_array_equal(a.values, b.values)
    c = qndm.sweep_g(1.5, 5.0, 0.5, 200, seed=4)
    assert np.any(c.values != a.values)


def test_sampled_sweep_within_five_sigma_of_exact():
    shots = 1000
    gc = qndm.sweep_g(1.5, lambda_max=10.0, delta_lambda=0.1, shots=shots, seed=5)
    good = total = 0
    for lam, val in zip(gc.lambda_grid, gc.values):
        exact = qndm.exact_g(lam, 1.5)
        for got, want in ((val.real, exact.real), (val.imag, exact.imag)):
            sigma = np.sqrt(max(1e-9, 1 - want ** 2) / shots)
            total += 1
            good += abs(got - want) <= 5 * sigma
    assert good / total >= 0.99


def test_quasi_characteristic_invariants():
    gc = qndm.sweep_g(1.5, lambda_max=20.0, delta_lambda=0.1, shots=500, seed=6)
    assert gc.values[0].real == pytest.approx(1.0)
    assert abs(gc.values[0].imag) <= 3 * max(gc.im_err[0], 1 / np.sqrt(500))
    bound = 1.0 + 3 * np.maximum(gc.std_errors, 1 / np.sqrt(500))
    assert np.all(np.abs(gc.values) <= bound)
    steps = np.diff(gc.lambda_grid)
    assert steps.max() - steps.min() <= 1e-12


def test_quasi_characteristic_validation():
    grid = np.array([0.0, 0.1, 0.25])
    with pytest.raises(ConfigurationError):
        qndm.QuasiCharacteristic(grid, np.ones(3, complex),
                                 np.zeros(3), np.zeros(3), 1)
    grid = np.array([0.5, 1.0, 1.5])
    with pytest.raises(ConfigurationError):
        qndm.QuasiCharacteristic(grid, np.ones(3, complex),
                                 np.zeros(3), np.zeros(3), 1)


def test_exact_sweep_has_zero_errors():
    gc = qndm.exact_sweep(1.5, 10.0, 0.5)
    assert np.all(gc.std_errors == 0.0)
    assert gc.values[0] == pytest.approx(1.0)
