"""Command-line entry point.

    mrviol <lg-scan|qndm-run|compare> [--omega-tau V|start:stop:n]
           [--shots N] [--reps N] [--dlambda X] [--lambda-max X]
           [--noise none|nisq-default|FILE] [--n-sigma X] [--seed N]
           [--out-dir PATH] [--config FILE] [--workers N]

Outputs: k3_scan.csv, g_lambda.csv, qpd.csv, summary.json and SVG plots in
the output directory. Identical configs (including seed) produce
byte-identical CSV/JSON regardless of worker count.
"""
from __future__ import annotations

import argparse
import sys
from functools import partial
from pathlib import Path

from .. import lg, qndm, spectral
from ..errors import ConfigurationError
from .config import ExperimentConfig, build_config
from .outputs import (
    SCHEMA_VERSION,
    plot_k3_scan,
    plot_qpd,
    write_csv,
    write_summary,
)
from .resources import resource_report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mrviol",
        description="Macrorealism-violation experiments on a driven qubit",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode, help_text in (
        ("lg-scan", "correlator-inequality scan over omega*tau"),
        ("qndm-run", "detector sweep and quasi-probability reconstruction"),
        ("compare", "run both protocols and report resources"),
    ):
        p = sub.add_parser(mode, help=help_text)
        p.add_argument("--omega-tau", dest="omega_tau", metavar="V|START:STOP:N",
                       help="single value, or grid with STOP exclusive")
        p.add_argument("--shots", type=int)
        p.add_argument("--reps", dest="n_reps", type=int)
        p.add_argument("--dlambda", dest="delta_lambda", type=float)
        p.add_argument("--lambda-max", dest="lambda_max", type=float)
        p.add_argument("--noise", help="none, nisq-default, or parameter file")
        p.add_argument("--n-sigma", dest="n_sigma", type=float,
                       help="sets both confidence multipliers")
        p.add_argument("--n-sigma-lg", dest="n_sigma_lg", type=float)
        p.add_argument("--n-sigma-qpd", dest="n_sigma_qpd", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--out-dir", dest="out_dir")
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--workers", type=int)
    return parser


def _pmap(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    from concurrent.futures import ProcessPoolExecutor

    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _lg_task(x, shots, n_reps, n_sigma, noise, seed):
    return lg.evaluate_point(x, shots, n_reps, n_sigma, noise, seed)


def _qndm_task(task, omega_tau, shots, seed, noise):
    index, lam = task
    return qndm.estimate_g_point(lam, omega_tau, shots, seed, noise,
                                 keys=(index,))


def run_lg_scan(config: ExperimentConfig):
    noise = config.noise_model()
    grid = config.lg_grid()

    def point_fn(grid_, shots, n_reps, n_sigma, noise_, seed):
        fn = partial(_lg_task, shots=shots, n_reps=n_reps, n_sigma=n_sigma,
                     noise=noise_, seed=seed)
        return _pmap(fn, list(grid_), config.workers)

    return lg.scan_violation(grid, config.shots, config.n_reps,
                             config.n_sigma_lg, noise, config.seed,
                             point_fn=point_fn)


def run_qndm(config: ExperimentConfig):
    noise = config.noise_model()
    omega_tau = config.qndm_omega_tau()

    def point_fn(grid, omega_tau_, shots, seed, noise_):
        fn = partial(_qndm_task, omega_tau=omega_tau_, shots=shots, seed=seed,
                     noise=noise_)
        return _pmap(fn, list(enumerate(grid)), config.workers)

    gc = qndm.sweep_g(omega_tau, config.lambda_max, config.delta_lambda,
                      config.shots, config.seed, noise, point_fn=point_fn)
    qpd = spectral.inverse_qpd(gc)
    verdict = spectral.detect_negativity(qpd, n_sigma=config.n_sigma_qpd)
    return gc, qpd, verdict


def run_experiment(config: ExperimentConfig) -> dict:
    """Dispatch a configured experiment and write its output files.

    On failure every file written so far is removed before the exception
    propagates.
    """
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(name, writer, *args) -> None:
        path = out_dir / name
        writer(path, *args)
        written.append(path)

    summary: dict = {
        "schema_version": SCHEMA_VERSION,
        "mode": config.mode,
        "config": config.as_dict(),
        "resources": resource_report(config).as_dict(),
    }
    try:
        if config.mode in ("lg-scan", "compare"):
            scan = run_lg_scan(config)
            rows = [
                (p.omega_tau, p.k1, p.k1_err, p.k2, p.k2_err, p.k3, p.k3_err,
                 p.violated_k3)
                for p in scan.points
            ]
            emit("k3_scan.csv", write_csv,
                 ["omega_tau", "k1", "k1_err", "k2", "k2_err", "k3", "k3_err",
                  "violated"], rows)
            summary["lg"] = {
                "confident_fraction": scan.confident_fraction,
                "grid_points": len(scan.points),
                "n_violated": sum(p.violated_k3 for p in scan.points),
            }
            if plot_k3_scan(out_dir / "k3_scan.svg", scan):
                written.append(out_dir / "k3_scan.svg")
        if config.mode in ("qndm-run", "compare"):
            gc, qpd, verdict = run_qndm(config)
            emit("g_lambda.csv", write_csv,
                 ["lambda", "re", "re_err", "im", "im_err"],
                 [
                     (lam, v.real, re, v.imag, im)
                     for lam, v, re, im in zip(gc.lambda_grid, gc.values,
                                               gc.re_err, gc.im_err)
                 ])
            emit("qpd.csv", write_csv, ["delta", "value"],
                 list(zip(qpd.delta_grid, qpd.values)))
            summary["qndm"] = {
                "omega_tau": config.qndm_omega_tau(),
                "lambda_points": len(gc.lambda_grid),
                "qpd_integral": qpd.integral,
                "verdict": {
                    "violated": verdict.violated,
                    "min_value": verdict.min_value,
                    "min_location": verdict.min_location,
                    "noise_floor": verdict.noise_floor,
                    "threshold": verdict.threshold,
                },
            }
            if plot_qpd(out_dir / "qpd.svg", qpd, verdict):
                written.append(out_dir / "qpd.svg")
        emit("summary.json", write_summary, summary)
    except Exception:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return summary


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    options = vars(args).copy()
    mode = options.pop("mode")
    config_file = options.pop("config", None)
    n_sigma = options.pop("n_sigma", None)
    if n_sigma is not None:
        if options.get("n_sigma_lg") is None:
            options["n_sigma_lg"] = n_sigma
        if options.get("n_sigma_qpd") is None:
            options["n_sigma_qpd"] = n_sigma
    try:
        config = build_config(mode, options, config_file)
        run_experiment(config)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
