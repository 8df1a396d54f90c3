"""Output writers: CSV, JSON summary, SVG line plots.

Data files are the primary artifact and are byte-deterministic for a given
config; plotting failures are logged and never fail a run.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

SCHEMA_VERSION = "1"


def fmt(x) -> str:
    """Floats at 12 significant digits; bools as 0/1; ints verbatim."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return f"{float(x):.12g}"


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def write_summary(path, summary: dict) -> None:
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


def _get_pyplot():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "mrviol"
    import matplotlib.pyplot as plt

    return plt


def plot_k3_scan(path, scan) -> bool:
    try:
        plt = _get_pyplot()
        x = [p.omega_tau for p in scan.points]
        k3 = [p.k3 for p in scan.points]
        err = [p.k3_err for p in scan.points]
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(x, k3, lw=1.2, label="K3")
        ax.fill_between(x, [v - e for v, e in zip(k3, err)],
                        [v + e for v, e in zip(k3, err)], alpha=0.3)
        ax.axhline(1.0, color="k", lw=0.8, ls="--")
        ax.set_xlabel("omega * tau")
        ax.set_ylabel("K3")
        ax.legend(loc="lower left")
        fig.savefig(path, metadata={"Date": None})
        plt.close(fig)
        return True
    except Exception as exc:  # plots are best-effort
        print(f"warning: could not write {path}: {exc}", file=sys.stderr)
        return False


def plot_qpd(path, qpd, verdict=None) -> bool:
    try:
        plt = _get_pyplot()
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(qpd.delta_grid, qpd.values, lw=1.0)
        ax.axhline(0.0, color="k", lw=0.8)
        if verdict is not None and verdict.threshold > 0:
            ax.axhline(-verdict.threshold, color="r", lw=0.8, ls="--")
        ax.set_xlabel("accumulated outcome")
        ax.set_ylabel("quasi-probability density")
        fig.savefig(path, metadata={"Date": None})
        plt.close(fig)
        return True
    except Exception as exc:
        print(f"warning: could not write {path}: {exc}", file=sys.stderr)
        return False
