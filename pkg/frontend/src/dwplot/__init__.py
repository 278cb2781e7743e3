"""Render sensitivity figures from dwmetro result CSVs.

Everything plotted comes straight from the CSV or from reference values the
caller passes explicitly; this package never recomputes any physics.
"""

from .figures import FigureSpec, PlotResult, SchemaError, plot_fig3, plot_fig4, read_results

__all__ = [
    "FigureSpec",
    "PlotResult",
    "SchemaError",
    "plot_fig3",
    "plot_fig4",
    "read_results",
]

__version__ = "0.1.0"
