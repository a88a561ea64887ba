"""Matplotlib renderings of the report outputs (written next to the CSVs)."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import TwoSlopeNorm

from .risk import GridPoint
from .simulate import SimReport


def decision_space_heatmap(
    points: list[GridPoint],
    axis1: str,
    axis2: str,
    path: str | Path,
    title: str = "Decision space",
):
    """Launch/roll-back heatmap, diverging colors anchored at risk 0.

    Blue (risk < 0) is the launch region, red the roll-back region,
    with the zero-risk boundary drawn when both regions are present.
    """
    xs = sorted({p.lambda1 for p in points})
    ys = sorted({p.lambda2 for p in points})
    grid = np.full((len(ys), len(xs)), np.nan)
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    for p in points:
        if not math.isnan(p.risk_launch):
            grid[yi[p.lambda2], xi[p.lambda1]] = p.risk_launch
    finite = grid[np.isfinite(grid)]
    span = float(np.abs(finite).max()) if finite.size else 1.0
    span = max(span, 1e-12)
    norm = TwoSlopeNorm(vmin=-span, vcenter=0.0, vmax=span)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    mesh = ax.pcolormesh(xs, ys, grid, norm=norm, cmap="RdBu_r", shading="nearest")
    if finite.size and finite.min() < 0.0 < finite.max():
        ax.contour(xs, ys, grid, levels=[0.0], colors="black", linewidths=1.0)
    fig.colorbar(mesh, ax=ax, label="expected risk of launch")
    ax.set_xlabel(axis1)
    ax.set_ylabel(axis2)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def prior_sweep_figure(
    ks: list[float], means: np.ndarray, sds: np.ndarray, metrics, path: str | Path
):
    """Prior mean and standard deviation per metric as functions of k."""
    means = np.asarray(means)
    sds = np.asarray(sds)
    fig, (ax_mean, ax_sd) = plt.subplots(1, 2, figsize=(8.0, 3.5), sharex=True)
    for j, name in enumerate(metrics):
        ax_mean.plot(ks, means[:, j], marker="o", label=name)
        ax_sd.plot(ks, sds[:, j], marker="o", label=name)
    ax_mean.set_xlabel("k")
    ax_mean.set_ylabel("prior mean")
    ax_sd.set_xlabel("k")
    ax_sd.set_ylabel("prior sd")
    ax_sd.set_yscale("log")
    ax_mean.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def simulation_figure(report: SimReport, path: str | Path):
    """Side-by-side MSE (log scale) and coverage bars per metric and k."""
    fig, (ax_mse, ax_cov) = plt.subplots(1, 2, figsize=(8.5, 3.5))
    n_metric = len(report.metrics)
    x = np.arange(n_metric)
    width = 0.8 / max(len(report.k_labels), 1)
    for i, k in enumerate(report.k_labels):
        offs = (i - (len(report.k_labels) - 1) / 2) * width
        ax_mse.bar(x + offs, report.mse[k], width, label=f"k={k}")
        ax_cov.bar(x + offs, report.coverage[k], width, label=f"k={k}")
    for ax, label in ((ax_mse, "MSE"), (ax_cov, "coverage")):
        ax.set_xticks(x)
        ax.set_xticklabels(report.metrics)
        ax.set_ylabel(label)
    if all(v > 0 for k in report.k_labels for v in report.mse[k]):
        ax_mse.set_yscale("log")
    ax_cov.axhline(0.95, color="gray", linestyle="--", linewidth=1.0)
    ax_cov.set_ylim(0.0, 1.05)
    ax_cov.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
