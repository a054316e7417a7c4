"""
Helper Utilities

This module provides report rendering helpers for the command line.
"""

import csv
import dataclasses
import io
import json
import math
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

import numpy as np

FORMATS = ('json', 'text', 'csv')


def to_jsonable(value: Any) -> Any:
    """
    Convert a report value into plain JSON types.

    Dataclasses become dicts, numpy scalars become Python numbers and
    non-finite floats become the strings 'inf', '-inf' or 'nan'.

    Args:
        value: Any report value

    Returns:
        Any: A value json.dumps accepts without allow_nan
    """
    if hasattr(value, 'to_json'):
        return to_jsonable(value.to_json())
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    return value


def format_value(value: Any) -> str:
    """Short text form of a scalar."""
    if isinstance(value, float):
        return f"{value:.6g}"
    if value is None:
        return '-'
    return str(value)


def format_table(rows: Sequence[Dict[str, Any]], headers: Optional[List[str]] = None) -> str:
    """
    Render dict rows as aligned columns.

    Args:
        rows: One dict per row
        headers: Column order (default: keys of the first row)

    Returns:
        str: Header line, rule and rows
    """
    if not rows:
        return ''
    headers = headers or list(rows[0].keys())
    cells = [[format_value(row.get(h)) for h in headers] for row in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(headers)]
    lines = ['  '.join(h.rjust(w) for h, w in zip(headers, widths))]
    lines.append('  '.join('-' * w for w in widths))
    lines.extend('  '.join(c.rjust(w) for c, w in zip(line, widths)) for line in cells)
    return '\n'.join(lines)


def format_mapping(data: Dict[str, Any], indent: int = 0) -> str:
    """Render a nested dict as 'key: value' lines."""
    lines = []
    pad = ' ' * indent
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(format_mapping(value, indent + 2))
        else:
            lines.append(f"{pad}{key}: {format_value(value)}")
    return '\n'.join(line for line in lines if line)


def to_csv(rows: Sequence[Dict[str, Any]], headers: Optional[List[str]] = None) -> str:
    """Render dict rows as CSV text."""
    if not rows:
        return ''
    headers = headers or list(rows[0].keys())
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=headers, extrasaction='ignore', lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({h: row.get(h) for h in headers})
    return buffer.getvalue()


def write_csv(path: Path, rows: Sequence[Dict[str, Any]], headers: Optional[List[str]] = None) -> None:
    """Write dict rows to a CSV file."""
    Path(path).write_text(to_csv(rows, headers), encoding='utf-8')


def render(report: Any, fmt: str = 'json') -> str:
    """
    Render a report in one of FORMATS.

    A report that is a list renders as a table (text) or CSV; a mapping
    renders as key/value lines (text) or a one-row CSV.
    """
    data = to_jsonable(report)
    if fmt == 'json':
        return json.dumps(data, indent=2, sort_keys=True)
    rows = data if isinstance(data, list) else [data]
    if fmt == 'csv':
        flat = [{k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in row.items()} for row in rows]
        return to_csv(flat).rstrip('\n')
    if isinstance(data, list):
        return format_table(data)
    return format_mapping(data)


def emit(report: Any, fmt: str = 'json', stream: Optional[TextIO] = None) -> None:
    """Print a rendered report to stdout (or the given stream)."""
    stream = stream or sys.stdout
    text = render(report, fmt)
    if text:
        stream.write(text + '\n')
