# SPDX-License-Identifier: Apache-2.0

"""
Renders experiment reports as json, csv or an aligned text table and writes
them to a file or to stdout.
"""

import csv
import io
import json
import math
import sys
from typing import Any, Iterator, List, Tuple

from config import RunConfig
from logger import configure_logger
from reports import SCHEMA_VERSION

LOGGER = configure_logger(__name__)

DECIMALS = 6


def _rounded(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        # + 0.0 turns -0.0 into 0.0
        return round(value, DECIMALS) + 0.0
    if isinstance(value, dict):
        return {key: _rounded(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(item) for item in value]
    return value


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return f"{round(value, DECIMALS) + 0.0:.{DECIMALS}f}"
    return str(value)


def flatten(data: Any, prefix: str = "") -> Iterator[Tuple[str, Any]]:
    """
    Yields dotted field names with their scalar values, list items are
    addressed by their index.
    """
    if isinstance(data, dict):
        for key, value in data.items():
            yield from flatten(value, f"{prefix}.{key}" if prefix else key)
    elif isinstance(data, (list, tuple)):
        for index, value in enumerate(data):
            yield from flatten(value, f"{prefix}.{index}")
    else:
        yield prefix, data


def _rows(report) -> Tuple[List[str], List[List[str]]]:
    if hasattr(report, "table"):
        return (
            report.columns(),
            [[format_value(cell) for cell in row] for row in report.table()],
        )
    return (
        ["field", "value"],
        [[key, format_value(value)] for key, value in flatten(report.to_dict())],
    )


def render_json(report, config: RunConfig) -> str:
    document = {
        "schema_version": SCHEMA_VERSION,
        "config": _rounded(config.to_dict()),
        "report": _rounded(report.to_dict()),
    }
    return json.dumps(document, indent=2) + "\n"


def render_csv(report) -> str:
    header, rows = _rows(report)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def render_table(report) -> str:
    header, rows = _rows(report)
    widths = [
        max(len(line[column]) for line in [header, *rows])
        for column in range(len(header))
    ]
    lines = [
        "  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip()
        for line in [header, *rows]
    ]
    lines.append("")
    lines.extend(report.summary())
    return "\n".join(lines) + "\n"


def render(report, config: RunConfig) -> str:
    if config.format == "json":
        return render_json(report, config)
    if config.format == "csv":
        return render_csv(report)
    return render_table(report)


def write_output(text: str, out: str = "-"):
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    LOGGER.debug("Writing report to %s", out)
    with open(out, mode="w", encoding="utf-8", newline="") as output_file:
        output_file.write(text)
