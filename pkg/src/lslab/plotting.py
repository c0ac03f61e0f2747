"""PNG rendering of scan grids (optional; needs matplotlib)."""

from __future__ import annotations

from .rational import Verdict

COLORS = {Verdict.LSPACE: "black", Verdict.NOT_LSPACE: "lightgray", Verdict.INDETERMINATE: "tab:orange"}


def plot_scan(result, path: str, title: str = "") -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    for verdict, color in COLORS.items():
        pts = [p for p, v in result.verdicts.items() if v.verdict is verdict]
        if pts:
            ax.scatter([x for x, _ in pts], [y for _, y in pts], s=18, c=color, label=verdict.value)
    ax.axhline(0, lw=0.5, c="gray")
    ax.axvline(0, lw=0.5, c="gray")
    ax.set_xlabel("d1")
    ax.set_ylabel("d2")
    ax.set_aspect("equal")
    ax.legend(loc="upper left", fontsize="small")
    if title:
        ax.set_title(title, fontsize="small")
    fig.savefig(path, dpi=120, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
