"""Figure rendering for the CLI report path.

Every report CSV the CLI writes can be rendered as a PNG next to it.  Output
is deterministic: fixed dpi, fixed metadata, no timestamps.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SAVEFIG_KWARGS = {"dpi": 150, "metadata": {"Software": "statemix"}}


def _new_axes(n_rows: int, height: float = 2.4):
    fig, axes = plt.subplots(n_rows, 1, figsize=(6.4, height * n_rows), sharex=False)
    return fig, np.atleast_1d(axes)


def save_trajectory_figure(times, entropy, energy, dist_to_canonical, path) -> Path:
    """Entropy / energy / distance-to-canonical panels over time."""
    path = Path(path)
    fig, (ax_s, ax_e, ax_d) = _new_axes(3)
    ax_s.plot(times, entropy, color="tab:blue")
    ax_s.set_ylabel("entropy  [k_B]")
    ax_e.plot(times, energy, color="tab:orange")
    ax_e.set_ylabel("energy")
    dist = np.asarray(dist_to_canonical, dtype=float)
    positive = dist > 0.0
    if np.any(positive):
        ax_d.semilogy(np.asarray(times)[positive], dist[positive], color="tab:green")
    else:
        ax_d.plot(times, dist, color="tab:green")
    ax_d.set_ylabel("dist. to canonical")
    ax_d.set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path, **SAVEFIG_KWARGS)
    plt.close(fig)
    return path


def save_coin_figure(result, path) -> Path:
    """Posterior histogram by true coin type, annotated with the accuracy."""
    path = Path(path)
    fig, (ax,) = _new_axes(1, height=3.2)
    bins = np.linspace(0.0, 1.0, 41)
    ax.hist(result.posterior_a[result.is_type_a], bins=bins, alpha=0.6,
            label="true type A", color="tab:blue")
    ax.hist(result.posterior_a[~result.is_type_a], bins=bins, alpha=0.6,
            label="true type B", color="tab:red")
    ax.set_xlabel("posterior P(type A | tosses)")
    ax.set_ylabel("coins")
    ax.set_title(f"k = {result.k} tosses/coin, accuracy = {result.accuracy:.4f}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **SAVEFIG_KWARGS)
    plt.close(fig)
    return path


def save_measure_figure(report, path) -> Path:
    """Outcome z-scores per observable for both compared measures."""
    path = Path(path)
    fig, (ax,) = _new_axes(1, height=3.2)
    for label, color in (("a", "tab:blue"), ("b", "tab:red")):
        xs = [row.observable_id for row in report.rows if row.measure == label]
        zs = [row.z_score for row in report.rows if row.measure == label]
        ax.scatter(xs, zs, s=14, alpha=0.7, label=f"measure {label}", color=color)
    for level in (-4.0, 4.0):
        ax.axhline(level, color="gray", lw=0.8, ls="--")
    ax.set_xlabel("observable")
    ax.set_ylabel("outcome z-score")
    ax.set_title(f"max |z| = {report.max_abs_z:.3f} over {report.trials} trials")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **SAVEFIG_KWARGS)
    plt.close(fig)
    return path
