"""Optional figure rendering for the report path.

Figures are written as PNG files next to the delimited/structured output when
the CLI is given ``--figures DIR``; nothing here is imported on the default
path. All renderers take the plain-data report document.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .quantum import ScanResult

_TSIRELSON = 2.0 * math.sqrt(2.0)


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def atom_probability_figure(report: dict, out: Path) -> Path:
    """Bar chart of the 16 atom probabilities."""
    atoms = report["space"]["atom_probabilities"]
    labels = list(atoms.keys())
    values = [0.0 if v is None else float(v) for v in atoms.values()]
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.bar(range(len(values)), values, color="steelblue")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=70, fontsize=7)
    ax.set_ylabel("p(atom)")
    ax.set_title("Atom probabilities (i, j, eps, eps')")
    ax.grid(axis="y", linestyle="--", alpha=0.4)
    return _save(fig, out)


def correlation_figure(report: dict, out: Path) -> Path:
    """Heatmap of conditional correlations with setting weights annotated."""
    corr = report["correlations"]
    q = np.array(
        [[np.nan if v is None else v for v in row] for row in corr["conditional"]], dtype=float
    )
    w = np.array(corr["weights"], dtype=float)
    fig, ax = plt.subplots(figsize=(4.5, 4))
    im = ax.imshow(q, vmin=-1, vmax=1, cmap="RdBu_r")
    for i in range(2):
        for j in range(2):
            text = "undef" if math.isnan(q[i, j]) else f"Q={q[i, j]:.3f}"
            ax.text(j, i, f"{text}\nw={w[i, j]:.3f}", ha="center", va="center", fontsize=9)
    ax.set_xticks([0, 1], labels=["b=1", "b=2"])
    ax.set_yticks([0, 1], labels=["a=1", "a=2"])
    ax.set_title("Conditional correlations")
    fig.colorbar(im, ax=ax, shrink=0.8)
    return _save(fig, out)


def chsh_bounds_figure(report: dict, out: Path) -> Path:
    """The two CHSH readings against their thresholds."""
    ch = report["chsh"]
    names = ["|S_abs|"]
    values = [abs(ch["s_abs"])]
    if ch["s_cond"] is not None:
        names.append("|S_cond|")
        values.append(abs(ch["s_cond"]))
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(names, values, color=["seagreen", "indianred"][: len(values)], width=0.5)
    for level, label, style in (
        (1.0, "strengthened classical bound (1)", ":"),
        (2.0, "classical bound (2)", "--"),
        (_TSIRELSON, "quantum bound (2*sqrt(2))", "-."),
    ):
        ax.axhline(level, linestyle=style, color="gray")
        ax.text(ax.get_xlim()[1], level, f" {label}", va="bottom", fontsize=7)
    ax.set_ylim(0, 3.2)
    ax.set_title("CHSH combinations vs bounds")
    return _save(fig, out)


def convergence_figure(points: list[dict], out: Path) -> Path:
    """log-log deviation decay with an n^(-1/2) guide."""
    n = np.array([p["n"] for p in points], dtype=float)
    dev = np.array([p["max_abs_deviation"] for p in points], dtype=float)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(n, np.where(dev > 0, dev, np.nan), "o-", label="max atom deviation")
    if dev[0] > 0:
        ax.loglog(n, dev[0] * np.sqrt(n[0] / n), "--", color="gray", label="n^(-1/2) guide")
    ax.set_xlabel("trials")
    ax.set_ylabel("max |empirical - exact|")
    ax.legend()
    ax.grid(True, which="both", linestyle="--", alpha=0.3)
    ax.set_title("Monte Carlo convergence")
    return _save(fig, out)


def scan_figure(scan: ScanResult, out: Path) -> Path:
    """Distribution of |S_cond| over the angle grid, with the maximum marked."""
    values = scan.s_values.reshape(-1)
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.hist(values, bins=80, color="steelblue", alpha=0.85)
    ax.axvline(2.0, linestyle="--", color="gray", label="classical bound 2")
    ax.axvline(_TSIRELSON, linestyle="-.", color="black", label="quantum bound 2*sqrt(2)")
    ax.axvline(scan.max_abs_s, color="red", linewidth=1, label=f"grid max {scan.max_abs_s:.6f}")
    ax.set_xlabel("|S_cond|")
    ax.set_ylabel("grid points")
    ax.set_title(f"|S_cond| over {scan.n_points} angle combinations")
    ax.legend(fontsize=8)
    return _save(fig, out)


def render_report_figures(
    report: dict,
    out_dir: str | Path,
    *,
    scan: ScanResult | None = None,
) -> list[Path]:
    """Render every figure the report's content supports; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [
        atom_probability_figure(report, out_dir / "atom_probabilities.png"),
        correlation_figure(report, out_dir / "correlations.png"),
        chsh_bounds_figure(report, out_dir / "chsh_bounds.png"),
    ]
    sim = report.get("simulation")
    if sim and sim.get("convergence"):
        written.append(convergence_figure(sim["convergence"], out_dir / "convergence.png"))
    if scan is not None:
        written.append(scan_figure(scan, out_dir / "tsirelson_scan.png"))
    return written
