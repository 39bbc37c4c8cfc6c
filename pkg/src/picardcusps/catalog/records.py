"""Record models that leave the process: scan rows, cusp results, oracle reports."""

import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, model_validator


def _dump_line(model: BaseModel) -> str:
    return json.dumps(model.model_dump(), sort_keys=True, separators=(",", ":"))


class ScanRecord(BaseModel):
    """One fundamental discriminant in a catalog scan."""
    model_config = ConfigDict(frozen=True)

    abs_disc: int
    d: int
    h: int
    h3: int
    h3_primary: int
    structure: List[int]
    min_cusps: int
    one_cusped: bool
    convention_mismatch: bool

    @model_validator(mode="after")
    def check_consistency(self) -> 'ScanRecord':
        if self.h3 < 1 or self.h % self.h3:
            raise ValueError(f"h3 = {self.h3} does not divide h = {self.h}")
        if self.min_cusps != self.h // self.h3 or self.min_cusps < 1:
            raise ValueError(f"min_cusps = {self.min_cusps}, expected {self.h // self.h3}")
        if self.one_cusped != (self.min_cusps == 1):
            raise ValueError("one_cusped must equal (min_cusps == 1)")
        if self.convention_mismatch != (self.h3 != self.h3_primary):
            raise ValueError("convention_mismatch must equal (h3 != h3_primary)")
        return self

    @property
    def disc(self) -> int:
        return -self.abs_disc

    def min_cusps_for(self, convention: str) -> int:
        """h/h3 under the torsion or primary reading of h3."""
        return self.h // (self.h3_primary if convention == "primary" else self.h3)

    def to_json_line(self) -> str:
        return _dump_line(self)

    @classmethod
    def from_json_line(cls, line: str) -> 'ScanRecord':
        return cls.model_validate_json(line)


class CuspResult(BaseModel):
    """A formula evaluation with its inputs, flags and a description of the formula."""

    formula: str
    inputs: Dict[str, Any]
    value: int
    flags: List[str] = []
    citation: str

    def to_json_line(self) -> str:
        return _dump_line(self)


class OrbitRecord(BaseModel):
    size: int
    representative: List[List[int]]


class OrbitReport(BaseModel):
    """Orbits of one subgroup on the isotropic points mod p."""

    disc: int
    p: int
    splitting: str
    subgroup: str
    point_count: int
    orbit_count: int
    orbits: List[OrbitRecord]

    def to_json_line(self) -> str:
        return _dump_line(self)


class LineWitness(BaseModel):
    """A line realizing a class, kept as a regression fixture."""

    disc: int
    class_label: str
    coords: Optional[List[List[int]]] = None
    height: Optional[int] = None
    height_bound: int

    @property
    def found(self) -> bool:
        return self.coords is not None

    def to_json_line(self) -> str:
        return _dump_line(self)


class GrowthRow(BaseModel):
    """Minimum of h/h3 over one |disc| range.

    nondecreasing compares with the previous row of the same report, so it
    is None on the first row (and on a report with a single range).
    """

    lo: int
    hi: int
    count: int
    min_ratio: Optional[int] = None
    argmin_abs_disc: Optional[int] = None
    nondecreasing: Optional[bool] = None

    def to_json_line(self) -> str:
        return _dump_line(self)


class HigherRecord(BaseModel):
    """Cusps of the maximal simple-type lattice in SU(r+1, r) with m = 0."""

    abs_disc: int
    h: int
    r: int
    q: int
    h_q: int
    cusps: int

    def to_json_line(self) -> str:
        return _dump_line(self)


class ClassGroupRecord(BaseModel):
    """Reduced forms, structure and torsion counts of one class group."""

    disc: int
    h: int
    structure: List[int]
    forms: List[List[int]]
    generators: List[List[int]]
    h3: int
    h3_primary: int

    def to_json_line(self) -> str:
        return _dump_line(self)


class NCuspedSummary(BaseModel):
    """Totals of an N-cusped scan; largest_abs_disc is None when nothing qualifies."""

    n: int
    max_abs_disc: int
    count: int
    largest_abs_disc: Optional[int] = None

    def to_json_line(self) -> str:
        return _dump_line(self)
