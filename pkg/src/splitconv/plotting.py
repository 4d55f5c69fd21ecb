"""Matplotlib rendering of the bandwidth-ratio curves next to their CSVs."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .bounds import CurvePoint  # noqa: E402


def render_curve_figure(points: Sequence[CurvePoint], path, lam: int,
                        ri_over_ki: Fraction, example_kf: int | None = None) -> None:
    """Write a PNG of the relative read-bandwidth curves."""
    x = [float(p.rf_over_ri) for p in points]
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    ax.plot(x, [float(p.rel_default) for p in points], color="0.4",
            linestyle=":", label="default")
    ax.plot(x, [float(p.rel_access) for p in points], color="tab:orange",
            linestyle="--", label="access optimal")
    ax.plot(x, [float(p.rel_bound) for p in points], color="tab:blue",
            label="bandwidth bound")
    marked = [(xx, float(p.rel_bound)) for xx, p in zip(x, points) if p.achievable]
    if marked:
        label = "achievable" if example_kf is None else f"achievable (kF={example_kf})"
        ax.plot([m[0] for m in marked], [m[1] for m in marked], "o",
                color="tab:blue", markersize=4, label=label)
    ax.set_xlabel("rF / rI")
    ax.set_ylabel("read bandwidth / default")
    ax.set_title(f"split conversion, lam={lam}, rI/kI={ri_over_ki}")
    ax.set_ylim(bottom=0)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
