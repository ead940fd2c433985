"""Static SVG convergence plots."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed ids and no timestamp so identical data gives identical files
_RC = {"svg.hashsalt": "qinexact", "svg.fonttype": "none", "figure.figsize": (7.0, 4.5),
       "axes.grid": True, "grid.alpha": 0.3, "legend.fontsize": 8}

FLOOR = 1e-16


def plot_gaps(curves: dict[str, list], path, title: str = "", ylabel: str = "f_hat - f_min"):
    """Write gap-vs-iteration curves on a log scale.

    Nonpositive gaps (reference round-off) are clipped to a small floor so the
    log axis stays defined.  Curves are drawn in name order.
    """
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for name in sorted(curves):
            gaps = np.asarray([np.nan if g is None else g for g in curves[name]], dtype=float)
            if gaps.size == 0:
                continue
            k = np.arange(1, gaps.size + 1)
            ax.semilogy(k, np.maximum(gaps, FLOOR), label=name, lw=1.2)
        ax.set_xlabel("iteration k")
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend(loc="best", ncol=2)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
