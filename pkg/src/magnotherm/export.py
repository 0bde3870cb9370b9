from __future__ import annotations

import csv
import io
import logging
import os
from datetime import datetime, timezone
from typing import TYPE_CHECKING, Optional, TextIO

if TYPE_CHECKING:
    from magnotherm.sweep import SweepRow, SweepTable

logger = logging.getLogger(__name__)

COLUMNS = (
    "curve_param",
    "curve_value",
    "axis2_value",
    "axis1_value",
    "stable",
    "spectral_abscissa",
    "pi_total",
    "pi_mb",
    "pi_trace",
    "phi",
    "mutual_info",
    "weak_coupling_ratio",
    "nu1",
    "nu2",
    "nu3",
)

MEASURES = (
    "pi_total",
    "pi_mb",
    "pi_trace",
    "phi",
    "mutual_info",
    "weak_coupling_ratio",
)


def format_number(value: Optional[float]) -> str:
    """17 significant digits in scientific notation; empty for a missing value"""
    if value is None:
        return ""
    return format(float(value), ".16e")


def csv_row(curve_param: str, row: "SweepRow") -> list[str]:
    report = row.report
    return [
        curve_param,
        format_number(row.curve_value),
        format_number(row.axis2_value),
        format_number(row.axis1_value),
        "true" if report.stable else "false",
        format_number(report.spectral_abscissa),
        *(format_number(getattr(report, name)) for name in MEASURES),
        *(format_number(nu) for nu in report.nu),
    ]


def write_table(table: "SweepTable", fp: TextIO, timestamp: bool = True):
    if timestamp:
        now = datetime.now(timezone.utc).isoformat(timespec="seconds")
        fp.write(f"# magnotherm sweep {table.spec.name or '-'} {now}\n")
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(COLUMNS)
    curve_param = "" if table.spec.curve is None else table.spec.curve.param
    for row in table.rows:
        writer.writerow(csv_row(curve_param, row))


def csv_text(table: "SweepTable", timestamp: bool = True) -> str:
    with io.StringIO() as buffer:
        write_table(table, buffer, timestamp=timestamp)
        return buffer.getvalue()


def write_csv(table: "SweepTable", filename: str, timestamp: bool = True):
    filename = os.path.realpath(filename)
    create_dir_if_inexistent(filename)
    with open(filename, "w", newline="", encoding="utf-8") as fp:
        write_table(table, fp, timestamp=timestamp)
    logger.info("Wrote %d rows to %s", len(table.rows), filename)


def ensure_writable(filename: str):
    """Fail before any computation if `filename` cannot be written"""
    filename = os.path.realpath(filename)
    create_dir_if_inexistent(filename)

    # Make sure we can open the file for writing
    with open(filename, "a", encoding="utf-8"):
        pass


def create_dir_if_inexistent(filename):
    dirname = os.path.dirname(os.path.realpath(filename))
    if not os.path.isdir(dirname):
        os.makedirs(dirname)
