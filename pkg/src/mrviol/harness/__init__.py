"""Experiment harness: configuration, resource accounting, CLI, outputs."""
from .config import ExperimentConfig, build_config, parse_omega_tau, resolve_noise
from .resources import ResourceReport, resource_counts, resource_report
from .cli import main, run_experiment

__all__ = [
    "ExperimentConfig",
    "ResourceReport",
    "build_config",
    "main",
    "parse_omega_tau",
    "resolve_noise",
    "resource_counts",
    "resource_report",
    "run_experiment",
]
