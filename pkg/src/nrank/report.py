"""Optional figures for the experiment commands.

CSV stays the contract; a figure is an extra file written next to it.
matplotlib is imported lazily so the rest of the package never needs it.
"""

from __future__ import annotations


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _finish(fig, ax, path, title, xlabel, ylabel):
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(alpha=0.3)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    _pyplot().close(fig)


def plot_log_gcd(path, ns, logs, title, reference=None, fit=None):
    """log gcd against n, with an optional reference slope through the origin
    and an optional fitted line given as (slope, intercept, n_lo, n_hi)."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    pts = [(n, y) for n, y in zip(ns, logs) if y is not None]
    ax.plot([n for n, _ in pts], [y for _, y in pts], "o", ms=3, label="log gcd")
    if reference is not None:
        ax.plot([0, max(ns)], [0, reference * max(ns)], "--", lw=1,
                label=f"slope {reference:.4g}")
    if fit is not None:
        s, b, lo, hi = fit
        ax.plot([lo, hi], [s * lo + b, s * hi + b], "-", lw=1, label=f"fit {s:.4g}")
    _finish(fig, ax, path, title, "n", "log gcd")


def plot_ratio(path, ns, ratios, floors, title):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, ratios, "o-", ms=4, label="log l / (n log q)")
    ax.plot(ns, floors, "--", lw=1, label="trivial floor")
    ax.axhline(1.0, color="grey", lw=0.8)
    ax.set_ylim(0, 1.05)
    _finish(fig, ax, path, title, "n", "ratio")
