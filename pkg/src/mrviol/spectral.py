"""Inverse Fourier reconstruction of the quasi-probability distribution.

The quasi-characteristic function is measured on lambda >= 0 only; the
reconstruction extends it Hermitianly (G(-lam) = conj(G(lam)), exact for
any genuine quasi-characteristic function) so the distribution comes out
real:

    P(D) = (dl / 2 pi) * [Re G_0 + 2 sum_{k>=1} Re(e^{-i lam_k D} G_k)]

This is the plain Riemann sum of the inverse transform. The distribution's
support lies on the integers -3..3; a truncated trigonometric sum renders
each atom as a narrow kernel lobe of width ~2 pi / lambda_max with
oscillatory tails, so reported densities on a fine grid carry that kernel
structure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .qndm import QuasiCharacteristic


def default_delta_grid() -> np.ndarray:
    """Reporting grid: -4 to 4 in steps of 0.01 (spectrum plus guard band)."""
    return np.arange(-400, 401) / 100.0


@dataclass(frozen=True, eq=False)
class QuasiProbability:
    """Real-valued reconstruction on a delta grid.

    ``integral`` is the Riemann sum of the reconstruction over one full
    alias period 2 pi / dl of the trigonometric sum (the reported window is
    a sub-interval of that period), which equals Re G_0 up to round-off and
    is 1 for exact inputs. ``noise_floor`` is the statistical scale
    sigma_P = dl * median(per-point G errors).
    """

    delta_grid: np.ndarray
    values: np.ndarray
    noise_floor: float
    integral: float


@dataclass(frozen=True)
class NegativityVerdict:
    violated: bool
    min_value: float
    min_location: float
    noise_floor: float
    threshold: float


def _reconstruct(gc: QuasiCharacteristic, deltas: np.ndarray) -> np.ndarray:
    dl = gc.delta_lambda
    lams = gc.lambda_grid[1:]
    values = gc.values[1:]
    phases = np.outer(deltas, lams)
    acc = np.cos(phases) @ values.real + np.sin(phases) @ values.imag
    return (dl / (2 * np.pi)) * (gc.values[0].real + 2.0 * acc)


def inverse_qpd(gc: QuasiCharacteristic, delta_grid=None) -> QuasiProbability:
    """Discrete inverse Fourier transform of a G sweep.

    The characteristic grid must be uniform and include lambda = 0 (checked
    at construction of ``QuasiCharacteristic``; re-validated here).
    """
    grid = default_delta_grid() if delta_grid is None else np.asarray(delta_grid, float)
    steps = np.diff(gc.lambda_grid)
    if steps.max() - steps.min() > 1e-12:
        raise ConfigurationError("lambda grid must be uniform")
    values = _reconstruct(gc, grid)

    # integral over one full alias period on a commensurate grid: every
    # oscillatory term sums to zero exactly, leaving Re G_0
    n_pts = 2 * len(gc.lambda_grid)
    period = 2 * np.pi / gc.delta_lambda
    d_int = period / n_pts
    period_grid = -period / 2 + d_int * np.arange(n_pts)
    integral = float(_reconstruct(gc, period_grid).sum() * d_int)

    return QuasiProbability(grid, values, noise_floor(gc), integral)


def noise_floor(gc: QuasiCharacteristic) -> float:
    """Statistical noise scale of the reconstruction, sigma_P = dl * sigma_G.

    sigma_G is the median per-point quadrature error; exact sweeps give 0.
    """
    return float(gc.delta_lambda * np.median(gc.std_errors))


def propagated_noise_std(gc: QuasiCharacteristic) -> float:
    """Propagated standard error of one reconstructed point.

    Var P(D) = (dl/2pi)^2 * 4 * sum_k sigma_k^2 for independently sampled
    quadratures; an upper bound uniform in D. Used to bound sampled-minus-
    exact increments; thresholds for negativity use ``noise_floor``.
    """
    var = float(np.sum(gc.std_errors[1:] ** 2))
    return (gc.delta_lambda / np.pi) * math.sqrt(var)


def nyquist_max_spacing(delta_max: float) -> float:
    """Largest lambda spacing that avoids aliasing of frequency delta_max."""
    if delta_max <= 0:
        raise ConfigurationError("delta_max must be positive")
    return 2 * np.pi / (2 * delta_max)


def detect_negativity(qpd: QuasiProbability, n_sigma: float = 3.0,
                      delta_max: float = 3.0) -> NegativityVerdict:
    """Decide whether the distribution has a significant negative region.

    Searches |D| <= delta_max; violated when the minimum lies below
    -n_sigma * noise_floor. For exact inputs (noise floor 0) an absolute
    tolerance of 1e-9 is used.
    """
    if n_sigma <= 0:
        raise ConfigurationError("n_sigma must be positive")
    mask = np.abs(qpd.delta_grid) <= delta_max + 1e-12
    if not mask.any():
        raise ConfigurationError("delta grid has no points inside delta_max")
    vals = qpd.values[mask]
    locs = qpd.delta_grid[mask]
    i = int(np.argmin(vals))
    threshold = n_sigma * qpd.noise_floor if qpd.noise_floor > 0 else 1e-9
    return NegativityVerdict(
        violated=bool(vals[i] < -threshold),
        min_value=float(vals[i]),
        min_location=float(locs[i]),
        noise_floor=qpd.noise_floor,
        threshold=float(threshold),
    )


def integer_peak_weights(qpd: QuasiProbability, window: float = 0.5) -> dict[int, float]:
    """Riemann-sum weight in a +-window band around each integer location.

    Reporting helper; the window integral of a truncated-kernel atom
    carries O(1/lambda_max) tail error, so these weights are approximate.
    """
    grid = qpd.delta_grid
    step = float(np.median(np.diff(grid)))
    weights = {}
    lo, hi = grid.min(), grid.max()
    for d0 in range(math.ceil(lo), math.floor(hi) + 1):
        if d0 - window < lo - 1e-12 or d0 + window > hi + 1e-12:
            continue
        mask = np.abs(grid - d0) <= window + 1e-12
        weights[d0] = float(qpd.values[mask].sum() * step)
    return weights


def fit_peak_weights(gc: QuasiCharacteristic, deltas=range(-3, 4)) -> np.ndarray:
    """Least-squares atom weights of G on the given integer support.

    Solves G(lam_k) ~ sum_D w_D e^{i lam_k D}; for exact sweeps this
    recovers the weights to round-off, free of truncation-kernel tails.
    """
    deltas = np.asarray(list(deltas), dtype=float)
    basis = np.exp(1j * np.outer(gc.lambda_grid, deltas))
    w, *_ = np.linalg.lstsq(basis, gc.values, rcond=None)
    return w.real
