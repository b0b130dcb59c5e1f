"""Figure construction from the study's hist.csv files.

Everything numeric is read straight from the CSV columns; this module only
draws.  Images are rendered with the Agg backend and saved without software
metadata so reruns are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

HIST_COLUMNS = (
    "bin_lo",
    "bin_hi",
    "bin_center",
    "count",
    "empirical_density",
    "ldp_density",
    "hld_density",
)


@dataclass(frozen=True)
class FigureSpec:
    """Inputs of one figure: data file, output image, cap location, window."""

    hist_csv: str
    out_path: str
    cap: float
    eps_lo: float
    eps_hi: float
    log_y: bool = False


class SchemaError(ValueError):
    """The input file does not match the expected hist.csv schema."""


def load_hist_csv(path: str | Path) -> tuple[dict[str, np.ndarray], list[str]]:
    """Read a hist.csv: '#' comment lines, a header row, numeric columns."""
    comments: list[str] = []
    header: list[str] | None = None
    data: list[list[float]] = []
    for raw in Path(path).read_text().splitlines():
        if not raw.strip():
            continue
        if raw.startswith("#"):
            comments.append(raw[1:].strip())
            continue
        if header is None:
            header = [c.strip() for c in raw.split(",")]
            continue
        data.append([float(v) for v in raw.split(",")])
    if header is None:
        raise SchemaError(f"{path}: no header row found")
    for column in HIST_COLUMNS:
        if column not in header:
            raise SchemaError(f"{path}: missing required column {column!r}")
    table = np.asarray(data, dtype=float)
    if table.size == 0:
        raise SchemaError(f"{path}: no data rows")
    cols = {name: table[:, i] for i, name in enumerate(header)}
    return cols, comments


def cap_from_comments(comments: list[str]) -> float | None:
    """Recover the cap recorded by the producer in the header comments."""
    for line in comments:
        if line.startswith("one_jump_cap"):
            try:
                return float(line.split("=", 1)[1].split(";", 1)[0])
            except (IndexError, ValueError):
                return None
    return None


def build_hist_overlay(spec: FigureSpec, cols: dict[str, np.ndarray]):
    """Histogram bars with the two analytic density curves and the cap marker.

    Returns ``(figure, artists)`` where ``artists`` maps ``"ldp"`` and
    ``"hld"`` to the Line2D objects whose y-data are exactly the CSV columns.
    """
    lo = cols["bin_lo"]
    hi = cols["bin_hi"]
    emp = cols["empirical_density"]
    ldp = cols["ldp_density"]
    hld = cols["hld_density"]

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.bar(
        lo,
        emp,
        width=hi - lo,
        align="edge",
        color="0.82",
        edgecolor="0.55",
        linewidth=0.4,
        label="empirical",
    )
    # steps-post over bin left edges: the drawn level on each bin is the CSV
    # value, so the atom window shows as a flat-top block
    (ldp_line,) = ax.plot(
        lo, ldp, drawstyle="steps-post", color="tab:red", lw=1.6, label="one-jump estimate"
    )
    (hld_line,) = ax.plot(
        lo, hld, drawstyle="steps-post", color="tab:blue", lw=1.6, label="two-jump estimate"
    )
    ax.axvline(spec.cap, color="tab:red", ls="--", lw=1.0)
    ax.axvspan(spec.cap - spec.eps_lo, spec.cap + spec.eps_hi, color="tab:red", alpha=0.08)
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel("longest intense period")
    ax.set_ylabel("conditional density")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig, {"ldp": ldp_line, "hld": hld_line}


def build_log_tail(spec: FigureSpec, cols: dict[str, np.ndarray]):
    """Log-scale comparison of empirical bin densities with the two-jump curve,
    restricted to bins beyond the cap.

    Raises ``ValueError`` when the restriction is empty (nothing beyond the
    cap with a positive two-jump density).
    """
    beyond = (cols["bin_lo"] >= spec.cap) & (cols["hld_density"] > 0)
    if not np.any(beyond):
        raise ValueError(
            f"empty restriction: no bins beyond the cap ({spec.cap}) with a "
            "positive two-jump density"
        )
    centers = cols["bin_center"][beyond]
    emp = cols["empirical_density"][beyond]
    hld = cols["hld_density"][beyond]

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    positive = emp > 0
    ax.plot(
        centers[positive],
        emp[positive],
        "o",
        ms=4.5,
        color="0.3",
        label="empirical bins",
    )
    (hld_line,) = ax.plot(centers, hld, color="tab:blue", lw=1.6, label="two-jump estimate")
    ax.set_yscale("log")
    ax.set_xlabel("longest intense period")
    ax.set_ylabel("conditional density (log scale)")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig, {"hld": hld_line, "centers": centers, "emp": emp}


def save_figure(fig, out_path: str | Path) -> Path:
    """Write a PNG without software metadata (reruns are byte-identical)."""
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=130, metadata={"Software": None})
    plt.close(fig)
    return out


def plot_hist_overlay(spec: FigureSpec) -> Path:
    """Full pipeline for the overlay figure: load, draw, save."""
    cols, _comments = load_hist_csv(spec.hist_csv)
    fig, _ = build_hist_overlay(spec, cols)
    return save_figure(fig, spec.out_path)


def plot_log_tail(spec: FigureSpec) -> Path:
    """Full pipeline for the log-tail figure: load, draw, save."""
    cols, _comments = load_hist_csv(spec.hist_csv)
    fig, _ = build_log_tail(spec, cols)
    return save_figure(fig, spec.out_path)
