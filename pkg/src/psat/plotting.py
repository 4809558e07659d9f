"""Figures for enumeration reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 11,
    "legend.fontsize": 8,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
    # keep the file bytes stable between runs
    "svg.hashsalt": "psat",
    "path.simplify": False,
}

COLORS = {"verify": "#4c72b0", "entail": "#dd8452"}


def plot_comparison(rows: list[dict], path: str, title: str | None = None) -> None:
    """Bar chart of cube count, literal count and cube-size spread per mode.

    ``rows`` holds one dict per mode with keys ``mode``, ``num_cubes``,
    ``sum_cube_sizes`` and ``cube_sizes`` (a list).
    """
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, 3, figsize=(9.0, 3.0))
        modes = [r["mode"] for r in rows]
        colors = [COLORS.get(m, "#888888") for m in modes]
        for ax, key, label in ((axes[0], "num_cubes", "cubes"), (axes[1], "sum_cube_sizes", "literals")):
            vals = [r[key] for r in rows]
            ax.bar(modes, vals, color=colors)
            ax.set_ylabel(label)
            for x, v in enumerate(vals):
                ax.annotate(str(v), (x, v), ha="center", va="bottom", fontsize=8)
        ax = axes[2]
        top = max((max(r["cube_sizes"], default=0) for r in rows), default=0)
        bins = range(0, top + 2)
        for r, c in zip(rows, colors):
            ax.hist(r["cube_sizes"], bins=bins, alpha=0.6, color=c, label=r["mode"], align="left")
        ax.set_xlabel("cube size")
        ax.set_ylabel("cubes")
        ax.legend(frameon=False)
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        metadata = {"Date": None} if path.endswith(".svg") else {}
        fig.savefig(path, metadata=metadata or None)
        plt.close(fig)
