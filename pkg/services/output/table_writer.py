"""
table_writer.py — serialize command results as CSV or JSON.

Rules:
- Results are fully computed before anything is written (no partial output).
- CSV: header row, '.' decimal separator, 17 significant digits, '\\n' line ends.
- JSON: stable key order as built by the caller, NaN/Inf rejected.
"""
from __future__ import annotations

import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional

import pandas as pd

logger = logging.getLogger("squeezelab.table_writer")

FLOAT_FORMAT = "%.17g"


def _plain(value: Any) -> Any:
    """numpy scalars → Python scalars so json can encode them."""
    item = getattr(value, "item", None)
    return item() if callable(item) else value


def to_records(frame: pd.DataFrame) -> list[dict[str, Any]]:
    columns = list(frame.columns)
    return [
        {name: _plain(value) for name, value in zip(columns, row)}
        for row in frame.itertuples(index=False, name=None)
    ]


def render_csv(frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def render_json(document: Any) -> str:
    return json.dumps(document, indent=2, allow_nan=False) + "\n"


def render_table(frame: pd.DataFrame, output_format: str) -> str:
    if output_format == "json":
        return render_json({"columns": list(frame.columns), "rows": to_records(frame)})
    return render_csv(frame)


def emit(text: str, output_path: Optional[Path] = None) -> None:
    """Write rendered text to output_path, or stdout when no path is given."""
    if output_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(output_path).write_text(text, encoding="utf-8", newline="\n")
    logger.info("wrote %d bytes to %s", len(text), output_path)
