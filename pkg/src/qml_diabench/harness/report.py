"""Report files: report.csv, report.md, timings.csv and plotdata_<reduction>.csv."""
from __future__ import annotations

import csv
import io
from pathlib import Path

from ..errors import ReportIOError
from ..metrics import METRIC_NAMES
from .runner import ReportTable

REPORT_HEADER = ("model", "reduction") + METRIC_NAMES + ("seconds",)
FAILED = "FAILED"


def fmt(value: float) -> str:
    return f"{value:.4f}"


def _metric_cells(row) -> list[str]:
    if row.failed:
        return [FAILED] * len(METRIC_NAMES)
    m = row.metrics.as_dict()
    return [fmt(m[name]) for name in METRIC_NAMES]


def report_csv_text(table: ReportTable, include_timing: bool = False) -> str:
    """CSV body sorted by reduction then model.

    Wall-clock is non-deterministic, so the ``seconds`` column is left empty
    unless ``include_timing`` is set; timings.csv always carries it.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    for r in table.sorted_rows():
        seconds = f"{r.seconds:.3f}" if include_timing else ""
        w.writerow([r.model, r.reduction, *_metric_cells(r), seconds])
    return buf.getvalue()


def timings_csv_text(table: ReportTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("model", "reduction", "seconds"))
    for r in table.sorted_rows():
        w.writerow([r.model, r.reduction, f"{r.seconds:.3f}"])
    return buf.getvalue()


def plotdata_csv_text(table: ReportTable, reduction: str) -> str:
    """Long format (model, metric, value) for one reduction; failed cells omitted."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("model", "metric", "value"))
    for r in table.sorted_rows():
        if r.reduction != reduction or r.failed:
            continue
        m = r.metrics.as_dict()
        for name in METRIC_NAMES:
            w.writerow([r.model, name, fmt(m[name])])
    return buf.getvalue()


def report_markdown_text(table: ReportTable) -> str:
    header = ["Model", "Reduction", "Precision", "Recall", "F1", "Balanced accuracy", "Seconds"]
    body = []
    for r in table.sorted_rows():
        body.append([r.model, r.reduction, *_metric_cells(r), f"{r.seconds:.2f}"])
    widths = [max(len(h), *(len(row[i]) for row in body)) if body else len(h)
              for i, h in enumerate(header)]

    def line(cells):
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    out = [line(header), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    out += [line(row) for row in body]
    failures = [r for r in table.sorted_rows() if r.failed]
    if failures:
        out.append("")
        out += [f"- {r.model}/{r.reduction}: {r.error}" for r in failures]
    return "\n".join(out) + "\n"


def _write(path: Path, text: str) -> Path:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportIOError(path, str(exc)) from None
    return path


def emit_report(table: ReportTable, formats=("csv", "markdown"), out_dir="results",
                include_timing: bool = False) -> list[Path]:
    """Write the requested report files into ``out_dir`` and return their paths."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportIOError(out, str(exc)) from None
    written = []
    if "csv" in formats:
        written.append(_write(out / "report.csv", report_csv_text(table, include_timing)))
        written.append(_write(out / "timings.csv", timings_csv_text(table)))
        for reduction in sorted({r.reduction for r in table.rows}):
            name = f"plotdata_{reduction.lower()}.csv"
            written.append(_write(out / name, plotdata_csv_text(table, reduction)))
    if "markdown" in formats:
        written.append(_write(out / "report.md", report_markdown_text(table)))
    return written
