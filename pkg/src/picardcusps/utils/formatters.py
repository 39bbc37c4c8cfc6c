"""Formatting utilities for picardcusps."""

import io
import json
from typing import Any, Dict, Iterable, List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel


def format_structure(structure: Sequence[int]) -> str:
    """Format elementary divisors as '3x3'; the trivial group is '1'.

    Args:
        structure: Elementary divisors d1 | d2 | ...

    Returns:
        Formatted structure string
    """

    if not structure:
        return "1"
    return "x".join(str(d) for d in structure)


def format_int_vector(coords: Sequence[Sequence[int]], omega: str = "w") -> str:
    """Format integer coordinate pairs (a, b) as [a+b*w, ...]."""

    parts = []
    for a, b in coords:
        if b == 0:
            parts.append(str(a))
        elif a == 0:
            parts.append(f"{b}{omega}")
        else:
            parts.append(f"{a}{'+' if b > 0 else '-'}{abs(b)}{omega}")
    return "[" + ", ".join(parts) + "]"


def json_line(data: Dict[str, Any]) -> str:
    """Deterministic compact JSON: sorted keys, no spaces."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def models_to_json_lines(models: Iterable[BaseModel]) -> str:
    lines = [json_line(m.model_dump()) for m in models]
    return "".join(line + "\n" for line in lines)


def rows_to_csv(rows: List[Dict[str, Any]], columns: Sequence[str]) -> str:
    """CSV with a fixed header, even for zero rows."""

    frame = pd.DataFrame(rows, columns=list(columns))
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def rows_to_markdown(rows: List[Dict[str, Any]], columns: Sequence[str], headers: Optional[Sequence[str]] = None) -> str:
    """A pipe table; cells are rendered with str()."""

    headers = list(headers or columns)
    lines = [
        "| " + " | ".join(headers) + " |",
        "|" + "|".join("---" for _ in headers) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(_cell(row.get(c)) for c in columns) + " |")
    return "\n".join(lines) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)
