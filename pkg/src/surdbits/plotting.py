"""Figure rendering for frequency curves and relation reports.

Uses the Agg backend and pins svg.hashsalt so SVG output is a pure
function of the data; saved SVGs carry no creation date.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

from matplotlib import pyplot as plt  # noqa: E402

from .stats import FrequencyCurve, FrequencyRelationReport  # noqa: E402

plt.rcParams["svg.hashsalt"] = "surdbits"
plt.rcParams["figure.figsize"] = (7.0, 4.2)
plt.rcParams["axes.grid"] = True
plt.rcParams["grid.alpha"] = 0.3


def _savefig(fig, path: str) -> None:
    kwargs = {}
    if str(path).lower().endswith(".svg"):
        kwargs["metadata"] = {"Date": None}
    fig.savefig(path, bbox_inches="tight", **kwargs)
    plt.close(fig)


def save_frequency_plot(curves: list[tuple[str, FrequencyCurve]], path: str,
                        title: str = "") -> None:
    """One line per labelled curve: f_n against n on a log-2 axis."""
    fig, ax = plt.subplots()
    for label, curve in curves:
        xs = [p.n for p in curve.points]
        ys = [p.ones / p.n for p in curve.points]
        ax.plot(xs, ys, marker="o", markersize=3, label=label)
    ax.set_xscale("log", base=2)
    ax.axhline(0.5, color="gray", linestyle="--", linewidth=1)
    ax.set_xlabel("n (fractional digits)")
    ax.set_ylabel("fraction of 1 digits")
    if title:
        ax.set_title(title)
    if len(curves) > 1:
        ax.legend()
    _savefig(fig, path)


def save_relation_plot(reports: list[FrequencyRelationReport], path: str) -> None:
    """Per s: both component frequencies (thin) and their sum (solid)
    against n_k, with reference lines at 1/2 and 1."""
    fig, ax = plt.subplots()
    for rep in reports:
        xs = [row.n_k for row in rep.rows]
        ax.plot(xs, [float(r.f_omega1) for r in rep.rows],
                linewidth=0.9, linestyle=":", alpha=0.8)
        ax.plot(xs, [float(r.f_omega2) for r in rep.rows],
                linewidth=0.9, linestyle="--", alpha=0.8)
        ax.plot(xs, [float(r.f_sum) for r in rep.rows],
                marker="o", markersize=3, label=f"s={rep.s} sum")
    ax.set_xscale("log", base=2)
    ax.axhline(1.0, color="gray", linestyle="--", linewidth=1)
    ax.axhline(0.5, color="gray", linestyle=":", linewidth=1)
    ax.set_xlabel("n_k")
    ax.set_ylabel("frequency of 1 digits")
    ax.set_title("digit-frequency sum of the paired constructions")
    ax.legend()
    _savefig(fig, path)
