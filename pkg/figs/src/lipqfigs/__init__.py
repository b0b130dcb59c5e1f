"""Figure scripts for intense-period studies; data comes from hist.csv only."""

from .core import (
    FigureSpec,
    SchemaError,
    build_hist_overlay,
    build_log_tail,
    cap_from_comments,
    load_hist_csv,
    plot_hist_overlay,
    plot_log_tail,
    save_figure,
)

__all__ = [
    "FigureSpec",
    "SchemaError",
    "build_hist_overlay",
    "build_log_tail",
    "cap_from_comments",
    "load_hist_csv",
    "plot_hist_overlay",
    "plot_log_tail",
    "save_figure",
]
