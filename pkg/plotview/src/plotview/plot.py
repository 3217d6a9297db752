"""Figure rendering. Every plotted value comes from a CSV cell; the only
derived curve is the 1/p baseline, drawn from the baseline column."""

from __future__ import annotations

from pathlib import Path
from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .frame import SweepFrame

STYLES = ("loglog-baseline", "sensitivity")

_SAVE_KWARGS = {"dpi": 120, "metadata": {"Software": "plotview"}}


def _new_axes():
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    return fig, ax


def _plot_loglog_baseline(frames: Sequence[SweepFrame], ax) -> None:
    for frame in frames:
        xs = frame.axis_values()
        ys = [r.mean_lifetime for r in frame.rows]
        es = [r.stderr for r in frame.rows]
        ax.errorbar(xs, ys, yerr=es, marker="o", capsize=3, label=frame.label)
    # baseline from the CSV's own column, one curve per distinct series
    base_frame = frames[0]
    xs = base_frame.axis_values()
    ax.plot(
        xs,
        [r.baseline for r in base_frame.rows],
        linestyle="--",
        color="black",
        label="unencoded 1/p",
    )
    ax.set_xlabel("physical error rate p")
    ax.set_ylabel("mean storage lifetime (rounds)")
    ax.legend()


def _plot_sensitivity(frames: Sequence[SweepFrame], ax) -> None:
    for frame in frames:
        xs = frame.axis_values()
        ys = [r.mean_lifetime for r in frame.rows]
        es = [r.stderr for r in frame.rows]
        style = {"p_m": "-", "p_f": "--"}.get(frame.varied, ":")
        ax.errorbar(
            xs, ys, yerr=es, marker="s", capsize=3, linestyle=style, label=frame.label
        )
    ax.set_xlabel("varied error rate")
    ax.set_ylabel("mean storage lifetime (rounds)")
    ax.legend()


def plot_lifetime(
    csv_paths: Sequence[str] | str, out_path: str, style: str
) -> List[SweepFrame]:
    """Render one or more sweep CSVs to an image file.

    Validation happens before anything is written: a schema violation
    leaves no output behind.
    """
    if isinstance(csv_paths, (str, Path)):
        csv_paths = [csv_paths]
    if style not in STYLES:
        raise ValueError(f"unknown style '{style}'; choose one of {STYLES}")
    frames = [SweepFrame.read(p) for p in csv_paths]
    fig, ax = _new_axes()
    try:
        if style == "loglog-baseline":
            _plot_loglog_baseline(frames, ax)
        else:
            _plot_sensitivity(frames, ax)
        fig.savefig(out_path, **_SAVE_KWARGS)
    finally:
        plt.close(fig)
    return frames
