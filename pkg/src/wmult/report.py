"""Report emission: CSV tables, JSON summaries, figures, gnuplot scripts.

CSV floats are written with repr (shortest round-trip form), so a fixed
configuration reproduces byte-identical files.  Figures are rendered
with the Agg backend straight to files next to the delimited output.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .scenario import CSV_COLUMNS, SweepReport, TableCell


def format_csv(report: SweepReport) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in report.rows:
        lines.append(",".join(repr(float(v)) for v in row.as_csv_values()))
    return "\n".join(lines) + "\n"


def write_csv(report: SweepReport, path) -> Path:
    path = Path(path)
    path.write_text(format_csv(report), encoding="utf-8")
    return path


def write_json(payload: dict, path) -> Path:
    path = Path(path)
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True, default=float) + "\n",
        encoding="utf-8",
    )
    return path


def read_sweep_csv(path) -> dict[str, np.ndarray]:
    """Columns of a sweep CSV keyed by header name."""
    lines = Path(path).read_text(encoding="utf-8").strip().splitlines()
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    if data.size == 0:
        raise ValueError(f"no data rows in {path}")
    return {name: data[:, i] for i, name in enumerate(header)}


def render_sweep_figure(report: SweepReport, path) -> Path:
    """Log-log panels of the sweep columns with the fitted slopes."""
    eps = np.array([r.epsilon for r in report.rows])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.2))

    for key, marker in (("ratio_strong", "o"), ("ratio_weak", "s")):
        vals = np.array([getattr(r, key) for r in report.rows])
        fit = report.fitted[key]
        ax1.loglog(eps, vals, marker, ms=4, label=f"{key} (slope {fit.slope:+.3f})")
        ax1.loglog(eps, np.exp(fit.intercept) * eps ** fit.slope, "--", lw=0.8)
    ax1.set_xlabel(r"$\varepsilon$")
    ax1.set_ylabel("operator norm / symbol norm ratio")
    ax1.set_title(f"predicted ratio slope {report.predicted.ratio:+.3f}")
    ax1.legend(fontsize=8)
    ax1.grid(True, which="both", alpha=0.3)

    for key, marker in (("lhs_strong", "o"), ("sup_sobolev", "^"), ("f1_norm", "v")):
        vals = np.array([getattr(r, key) for r in report.rows])
        fit = report.fitted["lhs" if key == "lhs_strong" else
                            "sobolev" if key == "sup_sobolev" else "f1"]
        ax2.loglog(eps, vals, marker, ms=4, label=f"{key} (slope {fit.slope:+.3f})")
    ax2.set_xlabel(r"$\varepsilon$")
    ax2.set_ylabel("norm value")
    ax2.set_title(f"mode = {report.mode}")
    ax2.legend(fontsize=8)
    ax2.grid(True, which="both", alpha=0.3)

    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_table_figure(cells: list[TableCell], path) -> Path:
    """Bar chart of the fitted ratio slopes for the four probe cells."""
    labels = [f"{c.regularity}\n{c.weight_class}" for c in cells]
    slopes = [c.ratio_slope for c in cells]
    colors = ["tab:red" if c.blows_up else "tab:blue" for c in cells]
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.bar(range(len(cells)), slopes, color=colors)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.axhline(-0.05, color="tab:red", lw=0.8, ls="--", label="blow-up threshold")
    ax.set_xticks(range(len(cells)), labels, fontsize=8)
    ax.set_ylabel("fitted ratio slope")
    ax.set_title("negative slope = unbounded ratio as the scale shrinks")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


GNUPLOT_TEMPLATE = """# gnuplot script generated alongside {csv}
set logscale xy
set xlabel "epsilon"
set ylabel "ratio"
set datafile separator ","
set key left top
plot "{csv}" using 1:7 skip 1 with linespoints title "ratio strong", \\
     "{csv}" using 1:8 skip 1 with linespoints title "ratio weak"
"""


def write_gnuplot_script(csv_path, path) -> Path:
    path = Path(path)
    path.write_text(GNUPLOT_TEMPLATE.format(csv=csv_path), encoding="utf-8")
    return path
