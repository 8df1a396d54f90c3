"""Experiment configuration: defaults, config files, CLI merging.

Precedence is CLI flag > config-file entry > built-in default. Config and
noise-parameter files share a flat ``key = value`` line format with ``#``
comments.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError
from ..lg import default_grid
from ..simcore import NoiseModel

MODES = ("lg-scan", "qndm-run", "compare")

#: default single omega*tau for detector sweeps
DEFAULT_QNDM_OMEGA_TAU = 1.5


@dataclass
class ExperimentConfig:
    mode: str
    omega_tau: str | None = None
    shots: int = 1000
    n_reps: int = 100
    delta_lambda: float = 0.1
    lambda_max: float = 100.0
    n_sigma_lg: float = 1.0
    n_sigma_qpd: float = 3.0
    noise: str = "none"
    seed: int = 0
    out_dir: str = "out"
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"mode must be one of {MODES}")
        for name in ("shots", "n_reps", "workers"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ConfigurationError(f"{name} must be a positive integer")
        for name in ("delta_lambda", "lambda_max", "n_sigma_lg", "n_sigma_qpd"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive")
        if self.delta_lambda > self.lambda_max:
            raise ConfigurationError("delta_lambda cannot exceed lambda_max")
        if self.omega_tau is not None:
            parse_omega_tau(self.omega_tau)
        resolve_noise(self.noise)

    def lg_grid(self) -> np.ndarray:
        """Grid for the scan modes: parsed spec or the default 101 points."""
        if self.omega_tau is None:
            return default_grid()
        return parse_omega_tau(self.omega_tau)

    def qndm_omega_tau(self) -> float:
        """Single omega*tau for the detector sweep."""
        if self.omega_tau is not None:
            grid = parse_omega_tau(self.omega_tau)
            if grid.size == 1:
                return float(grid[0])
        return DEFAULT_QNDM_OMEGA_TAU

    def noise_model(self) -> NoiseModel | None:
        return resolve_noise(self.noise)

    def as_dict(self) -> dict:
        return asdict(self)


def parse_omega_tau(spec: str) -> np.ndarray:
    """Parse a single value or a ``start:stop:n`` grid (stop exclusive)."""
    text = str(spec).strip()
    try:
        if ":" in text:
            start_s, stop_s, n_s = text.split(":")
            start, stop, n = float(start_s), float(stop_s), int(n_s)
            if n < 1 or stop <= start:
                raise ValueError
            return start + (stop - start) * np.arange(n) / n
        return np.array([float(text)])
    except (ValueError, TypeError):
        raise ConfigurationError(
            f"omega-tau must be a number or start:stop:n, got {spec!r}"
        )


def parse_kv_file(path) -> dict[str, str]:
    entries = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        entries[key.strip().replace("-", "_")] = value.strip()
    return entries


_INT_KEYS = {"shots", "n_reps", "seed", "workers"}
_FLOAT_KEYS = {"delta_lambda", "lambda_max", "n_sigma_lg", "n_sigma_qpd"}


def coerce_entries(entries: dict[str, str]) -> dict:
    out: dict = {}
    for key, value in entries.items():
        try:
            if key in _INT_KEYS:
                out[key] = int(value)
            elif key in _FLOAT_KEYS:
                out[key] = float(value)
            else:
                out[key] = value
        except ValueError:
            raise ConfigurationError(f"bad value for {key}: {value!r}")
    return out


def resolve_noise(spec: str) -> NoiseModel | None:
    """Map a noise spec to a model: none, nisq-default, or a parameter file."""
    if spec is None or spec == "none":
        return None
    if spec == "nisq-default":
        return NoiseModel.nisq_default()
    entries = parse_kv_file(spec)
    kwargs: dict = {}
    durations = {"1q": 50e-9, "2q": 300e-9}
    readout = None
    for key, value in entries.items():
        try:
            num = float(value)
        except ValueError:
            raise ConfigurationError(f"bad noise value for {key}: {value!r}")
        if key in ("p1", "p2", "t1", "t2"):
            kwargs[key] = num
        elif key == "gate_time_1q":
            durations["1q"] = num
        elif key == "gate_time_2q":
            durations["2q"] = num
        elif key == "readout_error":
            readout = np.array([[1 - num, num], [num, 1 - num]])
        else:
            raise ConfigurationError(f"unknown noise parameter {key!r}")
    kwargs["gate_durations"] = durations
    if readout is not None:
        kwargs["readout_confusion"] = readout
    return NoiseModel(**kwargs)


def build_config(mode: str, cli_options: dict, config_file=None) -> ExperimentConfig:
    """Merge file entries under CLI options and construct a config."""
    merged: dict = {}
    if config_file is not None:
        merged.update(coerce_entries(parse_kv_file(config_file)))
    merged.update({k: v for k, v in cli_options.items() if v is not None})
    merged.pop("mode", None)
    merged.pop("config", None)
    unknown = set(merged) - set(ExperimentConfig.__dataclass_fields__)
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    return ExperimentConfig(mode=mode, **merged)
