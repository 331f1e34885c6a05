"""src/apps/reports/services/charts.py."""

import io
import math
from numbers import Real
from typing import List, Optional, Sequence

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from src.apps.reports.schemas import ReportTable
from src.core.enum import ChartKind
from src.core.exceptions import ValidationFailedError

matplotlib.use("Agg")

SVG_RC = {"svg.hashsalt": "negtool", "svg.fonttype": "path", "font.family": "DejaVu Sans"}


def _is_number(value) -> bool:
    return value is None or (isinstance(value, Real) and not isinstance(value, bool))


def numeric_columns(table: ReportTable, exclude: Sequence[str] = ()) -> List[str]:
    """Columns whose cells are all numbers (or empty), with at least one number."""
    return [
        c
        for c in table.columns
        if c not in exclude
        and all(_is_number(r[c]) for r in table.rows)
        and any(r[c] is not None for r in table.rows)
    ]


def emit_chart(
    table: ReportTable,
    kind: ChartKind,
    x: Optional[Sequence[str]] = None,
    y: Optional[Sequence[str]] = None,
) -> bytes:
    """
    Renders a grouped bar chart or a line chart as standalone SVG.
    x columns label the categories (joined with '/'), y columns are the series.
    The same table always gives the same bytes.
    """
    if not table.rows:
        raise ValidationFailedError(f"Table {table.name} is empty, nothing to chart")
    x = list(x or table.columns[:1])
    missing = [c for c in x if c not in table.columns]
    if missing:
        raise ValidationFailedError(f"Table {table.name} has no column {missing[0]}")
    y = list(y) if y else numeric_columns(table, exclude=x)
    if not y:
        raise ValidationFailedError(f"Table {table.name} has no numeric column to plot")
    bad = [c for c in y if c not in numeric_columns(table)]
    if bad:
        raise ValidationFailedError(f"Column {bad[0]} of {table.name} is not numeric")

    labels = ["/".join(str(r[c]) for c in x) for r in table.rows]
    series = {c: [math.nan if r[c] is None else float(r[c]) for r in table.rows] for c in y}
    idx = np.arange(len(labels))

    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(max(6.0, 0.6 * len(labels)), 4.0), layout="tight")
        ax = fig.add_subplot()
        if ChartKind(kind) == ChartKind.BARS:
            width = 0.8 / len(y)
            for i, (name, values) in enumerate(series.items()):
                ax.bar(idx + (i - (len(y) - 1) / 2) * width, values, width, label=name)
        else:
            for name, values in series.items():
                ax.plot(idx, values, marker="o", label=name)
        ax.set_xticks(idx, labels, rotation=30 if len(labels) > 6 else 0)
        ax.set_xlabel(" / ".join(x))
        ax.set_ylabel(y[0] if len(y) == 1 else "value")
        ax.set_title(table.name)
        if len(y) > 1:
            ax.legend()
        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()
