"""Inverse transform, noise floor, Nyquist analysis, negativity detection."""
import numpy as np
import pytest

from mrviol import qndm, spectral
from mrviol.errors import ConfigurationError


def synthetic_gc(fn, lambda_max=100.0, delta_lambda=0.1, err=0.0):
    grid = qndm.lambda_grid(lambda_max, delta_lambda)
    values = np.array([fn(l) for l in grid], dtype=complex)
    errs = np.full(len(grid), err)
    return qndm.QuasiCharacteristic(grid, values, errs, errs, 0)


def commensurate_grid_sweep(omega_tau, m=32, K=100):
    """Sweep whose extended grid spans exactly m full 2*pi periods.

    (2K+1) * dl = 2*pi*m makes the discrete kernel vanish at every integer
    offset, so integer-location values are leakage-free.
    """
    dl = 2 * np.pi * m / (2 * K + 1)
    grid = np.arange(K + 1) * dl
    values = np.array([qndm.exact_g(l, omega_tau) for l in grid])
    zeros = np.zeros(K + 1)
    return qndm.QuasiCharacteristic(grid, values, zeros, zeros, 0)


def test_constant_g_concentrates_at_zero():
    gc = synthetic_gc(lambda l: 1.0)
    qpd = spectral.inverse_qpd(gc)
    weights = spectral.integer_peak_weights(qpd)
    assert weights[0] == pytest.approx(1.0, abs=0.02)
    for d, w in weights.items():
        if d != 0:
            assert abs(w) < 0.02
    i = int(np.argmax(qpd.values))
    assert abs(qpd.delta_grid[i]) < 0.01 + 1e-12


def test_two_phase_superposition_splits_evenly():
    gc = synthetic_gc(lambda l: np.cos(2 * l))
    qpd = spectral.inverse_qpd(gc)
    weights = spectral.integer_peak_weights(qpd)
    assert weights[2] == pytest.approx(0.5, abs=0.02)
    assert weights[-2] == pytest.approx(0.5, abs=0.02)
    assert abs(weights[0]) < 0.02


def test_exact_sweep_negative_peak_location():
    gc = qndm.exact_sweep(1.5, 100.0, 0.1)
    qpd = spectral.inverse_qpd(gc)
    verdict = spectral.detect_negativity(qpd)
    assert verdict.violated
    assert verdict.min_location == pytest.approx(2.0, abs=0.011)
    assert verdict.min_value < -10.0


def test_noise_floor_examples():
    gc = qndm.exact_sweep(1.5, 10.0, 0.5)
    assert spectral.noise_floor(gc) == 0.0
    gc = synthetic_gc(lambda l: np.cos(l), lambda_max=20.0, delta_lambda=1.0,
                      err=0.1)
    assert spectral.noise_floor(gc) == pytest.approx(0.1)
    gc2 = synthetic_gc(lambda l: np.cos(l), lambda_max=20.0, delta_lambda=2.0,
                       err=0.1)
    assert spectral.noise_floor(gc2) == pytest.approx(0.2)


def test_nyquist_spacing():
    assert spectral.nyquist_max_spacing(3.0) == pytest.approx(np.pi / 3)
    assert spectral.nyquist_max_spacing(np.pi) == pytest.approx(1.0)
    assert spectral.nyquist_max_spacing(1.0) == pytest.approx(np.pi)
    with pytest.raises(ConfigurationError):
        spectral.nyquist_max_spacing(0.0)


def test_classical_dynamics_not_flagged():
    # commuting evolution gives a genuine probability (atoms at +-3 with
    # weight 1/2); on a commensurate grid the integer-location values are
    # leakage-free, so no negative region is detected
    gc = commensurate_grid_sweep(0.0)
    qpd = spectral.inverse_qpd(gc, delta_grid=np.arange(-3.0, 4.0))
    verdict = spectral.detect_negativity(qpd)
    assert not verdict.violated
    assert verdict.threshold == pytest.approx(1e-9)
    weights = spectral.fit_peak_weights(gc)
    assert weights.min() > -1e-9
    assert weights[0] == pytest.approx(0.5, abs=1e-9)   # atom at -3
    assert weights[-1] == pytest.approx(0.5, abs=1e-9)  # atom at +3


def test_detect_negativity_validation():
    gc = qndm.exact_sweep(1.5, 10.0, 0.5)
    qpd = spectral.inverse_qpd(gc)
    with pytest.raises(ConfigurationError):
        spectral.detect_negativity(qpd, n_sigma=0.0)
    shifted = spectral.inverse_qpd(gc, delta_grid=np.array([2.0, 3.0]))
    with pytest.raises(ConfigurationError):
        spectral.detect_negativity(shifted, delta_max=1.0)


def test_integral_is_one_for_exact_inputs():
    for dl in (0.1, 1.0):
        gc = qndm.exact_sweep(1.5, 100.0, dl)
        qpd = spectral.inverse_qpd(gc)
        assert abs(qpd.integral - 1.0) <= 1e-6


def test_integral_tolerates_sampled_inputs():
    gc = qndm.sweep_g(1.5, 100.0, 1.0, shots=100, seed=17)
    qpd = spectral.inverse_qpd(gc)
    sigma_p = qpd.noise_floor
    tol = max(0.02, 5 * sigma_p * np.sqrt(len(qpd.delta_grid)) * 0.01)
    assert abs(qpd.integral - 1.0) <= tol


def test_non_uniform_grid_rejected():
    grid = np.array([0.0, 0.1, 0.21, 0.3])
    with pytest.raises(ConfigurationError):
        qndm.QuasiCharacteristic(grid, np.ones(4, complex), np.zeros(4),
                                 np.zeros(4), 0)


def test_linearity_of_transform():
    gc1 = synthetic_gc(lambda l: np.cos(2 * l), lambda_max=30.0)
    gc2 = synthetic_gc(lambda l: np.exp(1j * l) * 0.5, lambda_max=30.0)
    a, b = 0.7, -0.4
    combined = qndm.QuasiCharacteristic(
        gc1.lambda_grid, a * gc1.values + b * gc2.values,
        np.zeros(len(gc1.lambda_grid)), np.zeros(len(gc1.lambda_grid)), 0)
    lhs = spectral.inverse_qpd(combined).values
    rhs = (a * spectral.inverse_qpd(gc1).values
           + b * spectral.inverse_qpd(gc2).values)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_round_trip_weights_reproduce_g():
    gc = qndm.exact_sweep(1.5, 100.0, 0.1)
    assert abs(spectral.inverse_qpd(gc).integral - 1.0) <= 1e-6
    weights = spectral.fit_peak_weights(gc)
    deltas = np.arange(-3, 4)
    fresh = np.linspace(0.0, 25.0, 173)
    forward = np.exp(1j * np.outer(fresh, deltas)) @ weights
    exact = np.array([qndm.exact_g(l, 1.5) for l in fresh])
    assert np.abs(forward - exact).max() <= 1e-3
    assert weights.sum() == pytest.approx(1.0, abs=1e-9)


def test_window_weights_close_to_fitted_weights():
    gc = qndm.exact_sweep(1.5, 100.0, 0.1)
    qpd = spectral.inverse_qpd(gc)
    window = spectral.integer_peak_weights(qpd)
    fitted = dict(zip(range(-3, 4), spectral.fit_peak_weights(gc)))
    for d in range(-3, 4):
        assert window[d] == pytest.approx(fitted[d], abs=0.05)


def test_peak_support_confined_to_spectrum():
    # signed window weight at locations beyond the +-3 spectrum stays below
    # 1% of the total absolute weight
    gc = qndm.exact_sweep(1.5, 100.0, 0.1)
    wide = np.arange(-600, 601) / 100.0
    qpd = spectral.inverse_qpd(gc, delta_grid=wide)
    weights = spectral.integer_peak_weights(qpd)
    total_abs = sum(abs(weights[d]) for d in range(-3, 4))
    for d in (-5, -4, 4, 5):
        assert abs(weights[d]) <= 0.01 * total_abs


def test_peak_locations_stable_across_resolutions():
    fine = spectral.inverse_qpd(qndm.exact_sweep(1.5, 100.0, 0.1))
    coarse = spectral.inverse_qpd(qndm.exact_sweep(1.5, 100.0, 1.0))
    step = 0.01
    for qpd_pair in ((fine, coarse),):
        a, b = qpd_pair
        mask = np.abs(a.delta_grid) <= 3.0
        assert abs(a.delta_grid[mask][np.argmin(a.values[mask])]
                   - b.delta_grid[mask][np.argmin(b.values[mask])]) <= step + 1e-12
        assert abs(a.delta_grid[np.argmax(a.values)]
                   - b.delta_grid[np.argmax(b.values)]) <= step + 1e-12


def test_sampling_noise_attenuated_outside_spectrum():
    # sampled reconstructions deviate from the exact one outside |D| <= 3.5
    # by no more than 5x the propagated per-point error in >= 95% of trials
    exact_gc = qndm.exact_sweep(1.5, 100.0, 0.1)
    exact_vals = spectral.inverse_qpd(exact_gc).values
    grid = spectral.default_delta_grid()
    outside = np.abs(grid) > 3.5
    good = 0
    for seed in range(100):
        gc = qndm.sweep_g(1.5, 100.0, 0.1, shots=1000, seed=seed)
        qpd = spectral.inverse_qpd(gc)
        bound = 5 * spectral.propagated_noise_std(gc)
        if np.all(np.abs(qpd.values[outside] - exact_vals[outside]) <= bound):
            good += 1
    assert good >= 95
