"""Figure builders for dwmetro result tables.

Both figures share the same skeleton: a solid curve of QFI against the swept
parameter, plus horizontal dashed reference lines whose values the caller
supplies.  The plotted arrays are returned so tests can assert on data
instead of pixels.
"""

import csv
import math
import os
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

__all__ = [
    "FigureSpec",
    "PlotResult",
    "SchemaError",
    "read_results",
    "plot_fig3",
    "plot_fig4",
]

#: Columns every result CSV must carry for plotting.
REQUIRED_COLUMNS = ("value", "qfi")

#: Reference-line keys accepted per figure, in legend order.
FIG3_REF_KEYS = ("sql", "hl", "css1", "css2")
FIG4_REF_KEYS = ("sql", "fock", "uniform")

_REF_STYLE = {
    "sql": dict(color="0.4", label="SQL"),
    "hl": dict(color="0.4", label="HL"),
    "css1": dict(color="tab:blue", label="CSS ref 1"),
    "css2": dict(color="tab:blue", label="CSS ref 2"),
    "fock": dict(color="tab:blue", label="number-state limit"),
    "uniform": dict(color="tab:green", label="flat-mixture limit"),
}


class SchemaError(ValueError):
    """The CSV does not carry the columns the figure needs."""


@dataclass(frozen=True)
class FigureSpec:
    """Input table, reference values and output location of one figure."""

    csv_path: str
    out_path: str
    refs: Mapping[str, float] = field(default_factory=dict)
    log_y: bool = False

    def __post_init__(self):
        for key, val in self.refs.items():
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"reference value {key}={val!r} must be finite and positive")


@dataclass(frozen=True)
class PlotResult:
    """Arrays that went into the figure, plus the files written."""

    x: Tuple[float, ...]
    y: Tuple[float, ...]
    refs: Dict[str, float]
    files: Tuple[str, ...]


def read_results(path: str) -> List[Dict[str, str]]:
    """Parse a result CSV, skipping leading ``#`` comment lines.

    Raises :class:`SchemaError` when a required column is missing; extra or
    absent optional columns (like ``cfi``) are tolerated.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    names = reader.fieldnames or []
    missing = [c for c in REQUIRED_COLUMNS if c not in names]
    if missing:
        raise SchemaError(
            f"{path}: missing required column(s) {missing}; found {names}"
        )
    return list(reader)


def _curve(rows: List[Dict[str, str]]) -> Tuple[List[float], List[float]]:
    """Finite (value, qfi) pairs in file order.

    Single-point tables leave the swept value empty; those rows are placed at
    their file position.  Rows at infinite parameter (the flat-mixture tail)
    are not part of the curve.
    """
    xs: List[float] = []
    ys: List[float] = []
    for i, row in enumerate(rows):
        try:
            x = float(row["value"]) if row["value"] != "" else float(i)
            y = float(row["qfi"])
        except ValueError as exc:
            raise SchemaError(f"non-numeric cell in value/qfi: {exc}") from None
        if math.isfinite(x):
            xs.append(x)
            ys.append(y)
    return xs, ys


def _out_pair(out_path: str) -> Tuple[str, str]:
    root, ext = os.path.splitext(out_path)
    if ext.lower() not in (".svg", ".png"):
        root = out_path
    return root + ".svg", root + ".png"


def _render(
    spec: FigureSpec,
    ref_keys: Tuple[str, ...],
    xlabel: str,
    title: str,
) -> PlotResult:
    rows = read_results(spec.csv_path)
    xs, ys = _curve(rows)

    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=150)
    try:
        if len(xs) > 1:
            ax.plot(xs, ys, "-", color="tab:red", lw=1.8, label="QFI")
        else:
            ax.plot(xs, ys, "o", color="tab:red", label="QFI")
        used: Dict[str, float] = {}
        for key in ref_keys:
            if key in spec.refs:
                style = _REF_STYLE[key]
                ax.axhline(spec.refs[key], ls="--", lw=1.0, **style)
                used[key] = float(spec.refs[key])
        unknown = set(spec.refs) - set(ref_keys)
        if unknown:
            raise ValueError(f"unknown reference key(s) {sorted(unknown)}; accepted: {ref_keys}")
        if spec.log_y:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel("quantum Fisher information")
        ax.set_title(title)
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        svg, png = _out_pair(spec.out_path)
        fig.savefig(svg)
        fig.savefig(png)
    finally:
        plt.close(fig)
    return PlotResult(tuple(xs), tuple(ys), used, (svg, png))


def plot_fig3(spec: FigureSpec) -> PlotResult:
    """QFI of the twisted-state protocol against the twisting angle.

    Solid curve from the CSV; up to four dashed reference lines (``sql``,
    ``hl`` and the two intermediate benchmark values ``css1``/``css2``).
    """
    return _render(spec, FIG3_REF_KEYS, "twisting angle", "twisted input states")


def plot_fig4(spec: FigureSpec) -> PlotResult:
    """QFI against the atom-number fluctuation width.

    Solid curve from the CSV (a trailing infinite-width row is not part of
    the curve); up to three dashed reference lines (``sql``, the narrow
    ``fock`` limit and the wide ``uniform`` limit).
    """
    return _render(spec, FIG4_REF_KEYS, "fluctuation width", "fluctuating atom number")
