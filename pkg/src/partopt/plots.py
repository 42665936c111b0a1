"""Figure rendering for bench reports.

Figures are written next to the delimited report and carry the same data at
a glance: per-strategy wall-clock times, sequential-over-parallel speedup,
and the genetic algorithm's gap to the exact answer. Rendering goes through
matplotlib Figure objects directly, so no GUI backend is ever touched.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from .bench import BenchReport

_DPI = 150


def _new_axes(n_rows: int):
    fig = Figure(figsize=(max(6.0, 1.2 + 1.6 * n_rows), 4.2))
    return fig, fig.add_subplot(111)


def times_figure(report: BenchReport) -> Figure:
    """Grouped bars of elapsed seconds per instance and strategy; timeout
    and memory-out cells are annotated instead of plotted."""
    rows = report.rows
    fig, ax = _new_axes(len(rows))
    base = np.arange(len(rows), dtype=float)
    width = 0.8 / max(1, len(report.strategies))
    for si, strat in enumerate(report.strategies):
        xs = base + si * width
        heights = []
        notes = []
        for row in rows:
            cell = row.cells[strat]
            if cell.solved and cell.elapsed is not None:
                heights.append(cell.elapsed)
                notes.append(None)
            else:
                heights.append(0.0)
                notes.append(cell.status if cell.status in ("Timeout", "MemoryOut") else "n/a")
        bars = ax.bar(xs, heights, width=width, label=strat)
        for bar, note in zip(bars, notes):
            if note:
                ax.annotate(
                    {"Timeout": "TO", "MemoryOut": "MO"}.get(note, note),
                    (bar.get_x() + bar.get_width() / 2, 0),
                    ha="center",
                    va="bottom",
                    fontsize=7,
                    rotation=90,
                )
    ax.set_xticks(base + 0.4 - width / 2)
    ax.set_xticklabels([row.name for row in rows], rotation=20, ha="right")
    ax.set_ylabel("wall-clock seconds")
    ax.set_title("solve time by strategy")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def speedup_figure(report: BenchReport) -> Figure | None:
    rows = [row for row in report.rows if row.speedup is not None]
    if not rows:
        return None
    fig, ax = _new_axes(len(rows))
    xs = np.arange(len(rows), dtype=float)
    ax.bar(xs, [row.speedup for row in rows], width=0.6, color="tab:green")
    ax.axhline(1.0, color="grey", linewidth=0.8, linestyle="--")
    ax.set_xticks(xs)
    ax.set_xticklabels([row.name for row in rows], rotation=20, ha="right")
    ax.set_ylabel("sequential / parallel elapsed")
    ax.set_title("relative speedup of the parallel sweep")
    fig.tight_layout()
    return fig


def ga_error_figure(report: BenchReport) -> Figure | None:
    rows = [row for row in report.rows if row.ga_error_pct is not None]
    if not rows:
        return None
    fig, ax = _new_axes(len(rows))
    xs = np.arange(len(rows), dtype=float)
    ax.bar(xs, [row.ga_error_pct for row in rows], width=0.6, color="tab:orange")
    ax.axhline(0.0, color="grey", linewidth=0.8)
    ax.set_xticks(xs)
    ax.set_xticklabels([row.name for row in rows], rotation=20, ha="right")
    ax.set_ylabel("error vs exact optimum (%)")
    ax.set_title("genetic algorithm error")
    fig.tight_layout()
    return fig


def render_bench_figures(report: BenchReport, csv_path) -> list[Path]:
    """Write the report's figures next to its CSV; returns the paths written."""
    stem = Path(csv_path).with_suffix("")
    written: list[Path] = []
    for suffix, fig in (
        ("times", times_figure(report)),
        ("speedup", speedup_figure(report)),
        ("ga_error", ga_error_figure(report)),
    ):
        if fig is None:
            continue
        path = stem.parent / f"{stem.name}_{suffix}.png"
        fig.savefig(path, dpi=_DPI)
        written.append(path)
    return written
