"""Rendering of verification reports: text, JSON, and figures.

The text form is a short block for terminals. The JSON form carries
every report field verbatim, except that d_lower is dropped when no
distance search ran, so consumers never mistake "not measured" for a
bound. Writing a JSON report also renders two PNG charts next to it,
one for the weight histograms and one for cells per cone. All outputs
are pure functions of the report, byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

from qweight.assembler import (
    CHECK_WEIGHT_BOUND,
    QUBIT_WEIGHT_BOUND,
    VerificationReport,
)

_PNG_METADATA = {"Software": "qweight"}


def _hist(weights: dict[int, int]) -> str:
    if not weights:
        return "none"
    return " ".join(f"{w}:{c}" for w, c in sorted(weights.items()))


def format_report(report: VerificationReport) -> str:
    """Multi-line human summary, newline-terminated."""
    d = "?" if report.d_lower is None else str(report.d_lower)
    cheeger = (
        "?" if report.cheeger_min is None else f"{report.cheeger_min:.4f}"
    )
    lines = [
        f"qubits: {report.n_new}",
        f"logical qubits: {report.k_new} (input had {report.k_orig})",
        f"distance lower bound: {d}",
        f"check weights: {_hist(report.check_weights)}"
        f" (bound {CHECK_WEIGHT_BOUND})",
        f"qubit weights: {_hist(report.qubit_weights)}"
        f" (bound {QUBIT_WEIGHT_BOUND})",
        f"cone cells: {sum(report.cone_cells.values())}"
        f" over {len(report.cone_cells)} cones",
        f"expander edges: {report.expander_edges}",
        f"cheeger min: {cheeger}",
        f"seed: {report.seed}",
    ]
    return "\n".join(lines) + "\n"


def report_to_json(report: VerificationReport) -> dict:
    """All report fields; d_lower only when a search actually ran.

    Weight-histogram keys become strings on serialization, which is the
    usual JSON object restriction.
    """
    obj = asdict(report)
    if obj["d_lower"] is None:
        del obj["d_lower"]
    return obj


def _cone_order(label: str) -> tuple[str, int]:
    return label[0], int(label[1:])


def _save_weight_figure(report: VerificationReport, path: Path) -> None:
    from matplotlib.backends.backend_agg import FigureCanvasAgg
    from matplotlib.figure import Figure

    fig = Figure(figsize=(7.0, 3.0))
    FigureCanvasAgg(fig)
    panels = [
        ("check weight", report.check_weights, CHECK_WEIGHT_BOUND),
        ("qubit weight", report.qubit_weights, QUBIT_WEIGHT_BOUND),
    ]
    for ax, (title, hist, bound) in zip(fig.subplots(1, 2), panels):
        ws = sorted(hist)
        ax.bar(ws, [hist[w] for w in ws], color="#4878a8")
        ax.axvline(bound + 0.5, color="#a84848", linestyle="--", linewidth=1)
        ax.set_xlabel(title)
        ax.set_ylabel("count")
        ax.set_xticks(ws)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_PNG_METADATA)


def _save_cone_figure(report: VerificationReport, path: Path) -> None:
    from matplotlib.backends.backend_agg import FigureCanvasAgg
    from matplotlib.figure import Figure

    labels = sorted(report.cone_cells, key=_cone_order)
    fig = Figure(figsize=(max(4.0, 0.25 * len(labels) + 2.0), 3.0))
    FigureCanvasAgg(fig)
    ax = fig.subplots()
    ax.bar(range(len(labels)), [report.cone_cells[k] for k in labels],
           color="#48a878")
    if len(labels) <= 30:
        ax.set_xticks(range(len(labels)), labels, rotation=90, fontsize=7)
    else:
        ax.set_xticks([])
        ax.set_xlabel(f"{len(labels)} cones")
    ax.set_ylabel("cells")
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_PNG_METADATA)


def write_report(report: VerificationReport, path) -> list[Path]:
    """Write the JSON report plus sibling charts; returns written paths."""
    path = Path(path)
    path.write_text(
        json.dumps(report_to_json(report), indent=2, sort_keys=True) + "\n"
    )
    written = [path]
    weights_png = path.with_suffix(".weights.png")
    _save_weight_figure(report, weights_png)
    written.append(weights_png)
    if report.cone_cells:
        cones_png = path.with_suffix(".cones.png")
        _save_cone_figure(report, cones_png)
        written.append(cones_png)
    return written
