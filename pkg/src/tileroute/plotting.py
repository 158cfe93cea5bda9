"""Figures for benchmark reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
}
COLORS = ("#4eb3d3", "#08589e")


def plot_report(report, path, title: str | None = None) -> None:
    """Two panels: totals over all nets, and per-net popped count relative to the first flavor."""
    flavors = list(dict.fromkeys(r.flavor for r in report.rows))
    with plt.rc_context(STYLE):
        fig, (ax, bx) = plt.subplots(1, 2, figsize=(8, 3.2))
        xs = range(len(flavors))
        for off, attr, color in ((-0.2, "labeled", COLORS[0]), (0.2, "popped", COLORS[1])):
            ax.bar([x + off for x in xs], [max(report.total(f, attr), 1) for f in flavors],
                   width=0.4, label=attr, color=color)
        ax.set_yscale("log")
        ax.set_xticks(list(xs), flavors)
        ax.set_ylabel("vertices, all nets")
        ax.legend()
        if flavors:
            base = {r.net: r.popped for r in report.rows if r.flavor == flavors[0]}
            for k, f in enumerate(flavors):
                ys = [r.popped / base[r.net] for r in report.rows
                      if r.flavor == f and base.get(r.net)]
                bx.scatter([k] * len(ys), ys, s=12, alpha=0.6, color=COLORS[1])
            bx.set_xticks(list(xs), flavors)
            bx.set_ylim(bottom=0)
            bx.set_ylabel(f"popped / popped({flavors[0]}) per net")
        fig.suptitle(title or f"{report.mode} mode")
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)
