"""Leggett-Garg protocol: two-time correlators and K-string scans.

A correlator circuit prepares the fixed initial state, evolves in steps of
duration tau, and projectively measures Z at the two requested times
(measure-and-continue). Outcomes are encoded as a = +1 for record bit 0 and
a = -1 for bit 1. The two-time correlator is the expectation of the product
of the two outcomes, and the K strings are the signed sums

    K1 =  C12 - C01 + C02
    K2 = -C12 - C01 - C02
    K3 =  C01 + C12 - C02
    Kn =  sum_{k<n-1} C_{k,k+1} - C_{0,n-1}

each bounded by 1 for any macrorealist outcome assignment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, EmptyDataError
from .seeding import child_rng
from .simcore import Circuit, Measure, NoiseModel, ShotCounts
from .simcore import build_evolution, build_initial_state, run_density

PAIRS = ((0, 1), (1, 2), (0, 2))

#: state preparation angles: (|0> + i|1>)/sqrt(2)
THETA0 = np.pi / 2
PHI0 = np.pi / 2


@dataclass(frozen=True)
class CorrelatorEstimate:
    """Estimated two-time correlator for measurement-time pair (i, j)."""

    pair: tuple[int, int]
    value: float
    std_error: float
    shots: int


@dataclass(frozen=True)
class LGPoint:
    """K-string estimates at one omega*tau grid point."""

    omega_tau: float
    k1: float
    k1_err: float
    k2: float
    k2_err: float
    k3: float
    k3_err: float
    violated_k3: bool
    n_reps: int


@dataclass(frozen=True)
class ViolationScan:
    grid: np.ndarray
    points: tuple[LGPoint, ...]
    confident_fraction: float


def build_lg_circuit(pair: tuple[int, int], omega_tau: float) -> Circuit:
    """Single-qubit circuit measuring at times t_i = i*tau and t_j = j*tau.

    Exactly two measurement events; evolution is composed from steps of
    exp(-i (omega*tau/2) X), one per tau.
    """
    if tuple(pair) not in PAIRS:
        raise ConfigurationError(f"pair must be one of {PAIRS}, got {pair}")
    i, j = pair
    events = list(build_initial_state(THETA0, PHI0, qubit=0))
    for _ in range(i):
        events += build_evolution(omega_tau / 2, qubit=0)
    events.append(Measure(0, 0))
    for _ in range(j - i):
        events += build_evolution(omega_tau / 2, qubit=0)
    events.append(Measure(0, 1))
    return Circuit(1, tuple(events))


def correlator_from_probs(probs: dict[str, float]) -> float:
    """Expectation of the outcome product from a record distribution."""
    total = sum(probs.values())
    return sum((1.0 if r[0] == r[1] else -1.0) * p for r, p in probs.items()) / total


def estimate_correlator(counts: ShotCounts,
                        pair: tuple[int, int] = (0, 1)) -> CorrelatorEstimate:
    """Correlator estimate from two-measurement shot counts.

    value = sum_r s(r) count(r) / total with s = +1 when the records agree,
    std_error = sqrt((1 - value^2)/total).
    """
    if counts.total == 0:
        raise EmptyDataError("no shots recorded")
    if any(len(r) != 2 for r in counts.outcomes):
        raise ConfigurationError("counts must come from a 2-measurement circuit")
    value = correlator_from_probs({r: float(c) for r, c in counts.outcomes.items()})
    err = math.sqrt(max(0.0, 1.0 - value * value) / counts.total)
    return CorrelatorEstimate(tuple(pair), value, err, counts.total)


def analytic_correlator(omega: float, ti: float, tj: float) -> float:
    """Closed-form two-time correlator cos(omega (ti - tj)); test oracle."""
    return math.cos(omega * (ti - tj))


def _k_terms(variant) -> tuple[dict[tuple[int, int], float], str]:
    if isinstance(variant, str):
        v = variant.lower()
        if v == "k1":
            return {(1, 2): 1.0, (0, 1): -1.0, (0, 2): 1.0}, "K1"
        if v == "k2":
            return {(1, 2): -1.0, (0, 1): -1.0, (0, 2): -1.0}, "K2"
        if v == "k3":
            return {(0, 1): 1.0, (1, 2): 1.0, (0, 2): -1.0}, "K3"
        raise ConfigurationError(f"unknown K-string variant {variant!r}")
    n = int(variant)
    if n < 3:
        raise ConfigurationError("Kn requires n >= 3")
    terms = {(k, k + 1): 1.0 for k in range(n - 1)}
    terms[(0, n - 1)] = terms.get((0, n - 1), 0.0) - 1.0
    return terms, f"K{n}"


def compute_k_string(correlators, variant) -> tuple[float, float]:
    """Signed sum of correlators for a K-string variant.

    ``variant`` is one of "K1", "K2", "K3" or an integer n >= 3 selecting
    the n-measurement string. Returns (value, std_error) with the error
    from the quadrature sum of the component errors.
    """
    by_pair = {tuple(c.pair): c for c in correlators}
    terms, _ = _k_terms(variant)
    value = 0.0
    var = 0.0
    for pair, sign in terms.items():
        if pair not in by_pair:
            raise ConfigurationError(f"missing correlator for pair {pair}")
        est = by_pair[pair]
        value += sign * est.value
        var += est.std_error ** 2
    return value, math.sqrt(var)


def default_grid(n_points: int = 101) -> np.ndarray:
    """Uniform omega*tau grid on [0, 2*pi)."""
    return np.arange(n_points) * (2 * np.pi / n_points)


def pair_distributions(omega_tau: float,
                       noise: NoiseModel | None = None) -> dict[tuple, dict]:
    """Exact record distributions of the three correlator circuits."""
    return {
        pair: run_density(build_lg_circuit(pair, omega_tau), noise)
        for pair in PAIRS
    }


def _value_key(omega_tau: float) -> int:
    """Seed key derived from the grid value, not its position.

    Keying streams by value makes per-point results, and therefore the
    confident fraction, invariant under grid-order permutation.
    """
    return int(np.float64(omega_tau).view(np.uint64))


def evaluate_point(omega_tau: float, shots: int, n_reps: int, n_sigma: float,
                   noise: NoiseModel | None, seed: int) -> LGPoint:
    """One grid point of a violation scan.

    Draws ``n_reps`` independent K-string estimates, each from shots-sized
    runs of the three correlator circuits (all three resampled per
    repetition), and flags a confident violation when
    mean(K3) - n_sigma * std(K3) > 1 with the sample standard deviation
    over repetitions.
    """
    from .simcore import sample_counts

    dists = pair_distributions(omega_tau, noise)
    key = _value_key(omega_tau)
    k_samples = {"k1": [], "k2": [], "k3": []}
    for rep in range(n_reps):
        rng = child_rng(seed, key, rep)
        ests = [
            estimate_correlator(sample_counts(dists[pair], shots, rng), pair)
            for pair in PAIRS
        ]
        for variant in k_samples:
            k_samples[variant].append(compute_k_string(ests, variant)[0])
    stats = {}
    for variant, vals in k_samples.items():
        arr = np.asarray(vals)
        stats[variant] = (float(arr.mean()), float(arr.std(ddof=1)))
    k3_mean, k3_std = stats["k3"]
    return LGPoint(
        omega_tau=float(omega_tau),
        k1=stats["k1"][0], k1_err=stats["k1"][1],
        k2=stats["k2"][0], k2_err=stats["k2"][1],
        k3=k3_mean, k3_err=k3_std,
        violated_k3=bool(k3_mean - n_sigma * k3_std > 1.0),
        n_reps=n_reps,
    )


def scan_violation(grid, shots: int, n_reps: int, n_sigma: float = 1.0,
                   noise: NoiseModel | None = None, seed: int = 0,
                   point_fn=None) -> ViolationScan:
    """Confidence-aware violation scan over an omega*tau grid.

    ``point_fn`` lets a caller substitute a parallel map over
    ``evaluate_point``; results are independent of evaluation order.
    """
    if shots < 1:
        raise ConfigurationError("shots must be >= 1")
    if n_reps < 2:
        raise ConfigurationError("n_reps must be >= 2 for a sample std")
    grid = np.asarray(grid, dtype=float)
    if point_fn is None:
        points = [
            evaluate_point(x, shots, n_reps, n_sigma, noise, seed)
            for x in grid
        ]
    else:
        points = point_fn(grid, shots, n_reps, n_sigma, noise, seed)
    frac = sum(p.violated_k3 for p in points) / len(points)
    return ViolationScan(grid, tuple(points), float(frac))


def ideal_scan(grid) -> ViolationScan:
    """Exact-limit scan: analytic correlators, zero statistical error."""
    grid = np.asarray(grid, dtype=float)
    points = []
    for x in grid:
        ests = [
            CorrelatorEstimate(pair, analytic_correlator(x, float(pair[0]),
                                                         float(pair[1])), 0.0, 0)
            for pair in PAIRS
        ]
        k1, _ = compute_k_string(ests, "k1")
        k2, _ = compute_k_string(ests, "k2")
        k3, _ = compute_k_string(ests, "k3")
        points.append(LGPoint(float(x), k1, 0.0, k2, 0.0, k3, 0.0,
                              bool(k3 > 1.0), 0))
    frac = sum(p.violated_k3 for p in points) / len(points)
    return ViolationScan(grid, tuple(points), float(frac))
