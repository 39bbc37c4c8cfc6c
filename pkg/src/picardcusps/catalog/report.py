"""Report rendering for scans, formulas and oracles in json, csv or md."""

import json
import logging
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

from pydantic import BaseModel

from ..utils.config import OUTPUT_FORMATS
from ..utils.formatters import (
    format_int_vector,
    format_structure,
    models_to_json_lines,
    rows_to_csv,
    rows_to_markdown,
)
from ..utils.validators import ValidationError
from .records import (
    ClassGroupRecord,
    CuspResult,
    GrowthRow,
    HigherRecord,
    LineWitness,
    NCuspedSummary,
    OrbitReport,
    ScanRecord,
)

logger = logging.getLogger(__name__)

EMPTY_ROW = "∅"

SCAN_COLUMNS = ["abs_disc", "d", "h", "h3", "h3_primary", "structure", "min_cusps", "one_cusped",
                "convention_mismatch"]
GROWTH_COLUMNS = ["lo", "hi", "count", "min_ratio", "argmin_abs_disc", "nondecreasing"]
HIGHER_COLUMNS = ["abs_disc", "h", "r", "q", "h_q", "cusps"]
CUSP_COLUMNS = ["formula", "value", "inputs", "flags", "citation"]
ORBIT_COLUMNS = ["disc", "p", "splitting", "subgroup", "point_count", "orbit_count", "orbit", "size",
                 "representative"]
WITNESS_COLUMNS = ["disc", "class_label", "coords", "height", "height_bound"]
CLASSGROUP_COLUMNS = ["disc", "h", "structure", "h3", "h3_primary", "forms", "generators"]


def _check_format(fmt: str) -> str:
    if fmt not in OUTPUT_FORMATS:
        raise ValidationError(f"format must be one of {OUTPUT_FORMATS}, got {fmt!r}")
    return fmt


def render(models: Sequence[BaseModel], fmt: str, columns: Sequence[str],
           to_row: Optional[Callable[[BaseModel], Dict[str, Any]]] = None) -> str:
    """Render models as JSON lines, or as csv/md rows built by to_row."""

    if _check_format(fmt) == "json":
        return models_to_json_lines(models)

    to_row = to_row or (lambda m: m.model_dump())
    rows = [to_row(m) for m in models]
    if fmt == "csv":
        return rows_to_csv(rows, columns)
    return rows_to_markdown(rows, columns)


def _scan_row(record: ScanRecord) -> Dict[str, Any]:
    row = record.model_dump()
    row["structure"] = format_structure(record.structure)
    return row


def format_scan(records: Sequence[ScanRecord], fmt: str) -> str:
    return render(records, fmt, SCAN_COLUMNS, _scan_row)


def table_report(records: Iterable[ScanRecord], class_numbers: Sequence[int] = (1, 3, 9, 27)) -> str:
    """One-cusped fields grouped by class number, |disc| listed per row.

    Class numbers listed in class_numbers but absent from records get an
    empty-set row; other class numbers present in records get a row too.
    """

    by_h: Dict[int, List[int]] = {}
    for record in records:
        by_h.setdefault(record.h, []).append(record.abs_disc)

    rows = []
    for h in sorted(set(class_numbers) | set(by_h)):
        discs = sorted(by_h.get(h, []))
        rows.append({"h": h, "abs_disc": ", ".join(str(n) for n in discs) if discs else EMPTY_ROW})
    return rows_to_markdown(rows, ["h", "abs_disc"], ["h_k", "|d_k|"])


def format_one_cusped(records: Sequence[ScanRecord], fmt: str,
                      class_numbers: Sequence[int] = (1, 3, 9, 27)) -> str:
    if _check_format(fmt) == "md":
        return table_report(records, class_numbers)
    return format_scan(records, fmt)


def format_n_cusped(records: Sequence[ScanRecord], summary: NCuspedSummary, fmt: str) -> str:
    """Scan rows plus the largest |disc| found.

    json appends the summary as a last line, csv repeats largest_abs_disc on
    every row, md ends with a one-line summary.
    """

    if _check_format(fmt) == "json":
        return models_to_json_lines(list(records) + [summary])

    if fmt == "csv":
        rows = [dict(_scan_row(r), largest_abs_disc=summary.largest_abs_disc) for r in records]
        return rows_to_csv(rows, SCAN_COLUMNS + ["largest_abs_disc"])

    largest = summary.largest_abs_disc
    return (format_scan(records, fmt)
            + f"\n{summary.count} fields; largest |disc|: {largest if largest is not None else EMPTY_ROW}\n")


def format_growth(rows: Sequence[GrowthRow], fmt: str) -> str:
    return render(rows, fmt, GROWTH_COLUMNS)


def format_higher(rows: Sequence[HigherRecord], fmt: str) -> str:
    return render(rows, fmt, HIGHER_COLUMNS)


def _cusp_row(result: CuspResult) -> Dict[str, Any]:
    return {
        "formula": result.formula,
        "value": result.value,
        "inputs": json.dumps(result.inputs, sort_keys=True, separators=(",", ":")),
        "flags": "; ".join(result.flags),
        "citation": result.citation,
    }


def format_cusp_results(results: Sequence[CuspResult], fmt: str) -> str:
    return render(results, fmt, CUSP_COLUMNS, _cusp_row)


def format_orbit_report(report: OrbitReport, fmt: str) -> str:
    """One row per orbit in csv/md; one line per report in json."""

    if _check_format(fmt) == "json":
        return models_to_json_lines([report])

    head = report.model_dump(exclude={"orbits"})
    rows = [
        dict(head, orbit=i, size=orbit.size, representative=format_int_vector(orbit.representative))
        for i, orbit in enumerate(report.orbits)
    ]
    if fmt == "csv":
        return rows_to_csv(rows, ORBIT_COLUMNS)
    return rows_to_markdown(rows, ORBIT_COLUMNS)


def _witness_row(witness: LineWitness) -> Dict[str, Any]:
    row = witness.model_dump()
    row["coords"] = format_int_vector(witness.coords) if witness.found else "not found"
    return row


def format_witnesses(witnesses: Sequence[LineWitness], fmt: str) -> str:
    return render(witnesses, fmt, WITNESS_COLUMNS, _witness_row)


def _classgroup_row(record: ClassGroupRecord) -> Dict[str, Any]:
    row = record.model_dump()
    row["structure"] = format_structure(record.structure)
    row["forms"] = " ".join("({},{},{})".format(*f) for f in record.forms)
    row["generators"] = " ".join("({},{},{})".format(*f) for f in record.generators)
    return row


def format_classgroup(record: ClassGroupRecord, fmt: str) -> str:
    return render([record], fmt, CLASSGROUP_COLUMNS, _classgroup_row)
