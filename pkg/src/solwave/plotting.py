"""Figure rendering for the CLI reports.

Figures are written as SVG with a fixed hash salt and no timestamp, so the
same data always produces the same bytes.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "svg.hashsalt": "solwave",
    "svg.fonttype": "path",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
    "figure.figsize": (5.0, 3.6),
}


def savefig(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", bbox_inches="tight", metadata={"Date": None})
    plt.close(fig)
    return path


def line_plot(path, x, y, xlabel, ylabel, title=None, markers=(), zero_line=False, label=None):
    """Single curve, optional vertical markers (e.g. roots) and a y = 0 guide."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(np.asarray(x, dtype=float), np.asarray(y, dtype=float), color="C0", label=label)
        if zero_line:
            ax.axhline(0.0, color="0.4", lw=0.8)
        for m in markers:
            ax.axvline(m, color="C3", ls="--", lw=0.9)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if label:
            ax.legend(loc="best", frameon=False)
        return savefig(fig, path)


def phase_plot(path, phi, y, saddle=None, reference=None, title=None):
    """Phase portrait (phi, y), with the unperturbed loop dashed when given."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        if reference is not None:
            ax.plot(reference[0], reference[1], color="0.5", ls="--", lw=1.0, label="unperturbed loop")
        ax.plot(phi, y, color="C0", label="trajectory")
        if saddle is not None:
            ax.plot([saddle], [0.0], "o", color="C3", ms=4, label="saddle")
        ax.set_xlabel(r"$\phi$")
        ax.set_ylabel(r"$y$")
        if title:
            ax.set_title(title)
        ax.legend(loc="best", frameon=False, fontsize=8)
        return savefig(fig, path)
