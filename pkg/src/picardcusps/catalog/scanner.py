"""
Exhaustive scans over negative fundamental discriminants.

Discriminants are processed in |disc| blocks; blocks may run in worker
processes and are merged back in block order, so the output is the same
for any worker count. Cached records are reused, and new ones are appended
by the parent process only.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from math import gcd
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import factorint, multiplicity

from ..arithmetic.classgroup import ClassGroup, FormClass, reduced_forms_in_range, three_torsion_from_counts
from ..arithmetic.quadfield import fundamental_discriminants
from ..utils.config import TORSION_CONVENTIONS, Config
from ..utils.validators import InvariantViolation, ValidationError, validate_positive, validate_ranges
from .cache import ScanCache
from .records import GrowthRow, HigherRecord, ScanRecord

logger = logging.getLogger(__name__)

GROWTH_TREND_START = 5000


def torsion_from_structure(structure: Sequence[int], q: int) -> int:
    """#G[q] for G = Z/d1 x Z/d2 x ..., which is prod gcd(q, d_i)."""

    result = 1
    for d in structure:
        result *= gcd(q, d)
    return result


def primary_from_h(h: int, q: int) -> int:
    """Order of the part of a group of order h supported on the primes of q."""

    result = 1
    for p in factorint(q):
        if h % p == 0:
            result *= int(p) ** multiplicity(p, h)
    return result


def field_d(abs_disc: int) -> int:
    """Square-free d with disc(Q(sqrt(-d))) = -abs_disc."""
    return abs_disc if abs_disc % 4 else abs_disc // 4


def compute_record(disc: int, forms: List[FormClass]) -> ScanRecord:
    """Scan record of one discriminant from its reduced forms.

    Raises:
        InvariantViolation: if the 3-torsion count disagrees with the structure
    """

    group = ClassGroup(disc, forms)
    h = group.h
    h3 = three_torsion_from_counts(h, forms)
    structure = list(group.structure)

    if torsion_from_structure(structure, 3) != h3:
        raise InvariantViolation(
            f"disc {disc}: #Cl[3] = {h3} but structure {structure} gives {torsion_from_structure(structure, 3)}"
        )
    h3_primary = primary_from_h(h, 3)

    return ScanRecord(
        abs_disc=-disc,
        d=field_d(-disc),
        h=h,
        h3=h3,
        h3_primary=h3_primary,
        structure=structure,
        min_cusps=h // h3,
        one_cusped=(h == h3),
        convention_mismatch=(h3 != h3_primary),
    )


def scan_block(lo: int, hi: int) -> List[ScanRecord]:
    """Records for every fundamental discriminant with lo <= |disc| <= hi, by |disc|."""

    by_disc = reduced_forms_in_range(lo, hi)
    return [compute_record(disc, by_disc[disc]) for disc in sorted(by_disc, reverse=True)]


def _scan_block_args(bounds: Tuple[int, int]) -> List[ScanRecord]:
    return scan_block(*bounds)


class CatalogScanner:
    """Cached, optionally parallel scans producing ScanRecords ordered by |disc|."""

    def __init__(self, config: Optional[Config] = None, cache: Optional[ScanCache] = None):
        self.logger = logging.getLogger(__name__)
        self.config = config or Config()
        self.cache = cache or ScanCache(Path(self.config.cache_path), self.config.cache_enabled)
        self.workers = self.config.scan_workers
        self.block_size = self.config.scan_block_size

    @property
    def convention(self) -> str:
        return self.config.torsion_convention

    def _blocks(self, lo: int, hi: int, missing: Iterable[int]) -> List[Tuple[int, int]]:
        """Blocks of |disc| that contain at least one missing discriminant."""

        starts = sorted({lo + ((n - lo) // self.block_size) * self.block_size for n in missing})
        return [(s, min(s + self.block_size - 1, hi)) for s in starts]

    def _compute(self, blocks: List[Tuple[int, int]]) -> List[ScanRecord]:
        if not blocks:
            return []

        if self.workers > 1 and len(blocks) > 1:
            self.logger.info(f"Scanning {len(blocks)} blocks with {self.workers} workers")
            with ProcessPoolExecutor(max_workers=self.workers) as executor:
                # map yields in submission order
                results = list(executor.map(_scan_block_args, blocks))
        else:
            results = []
            for lo, hi in blocks:
                self.logger.info(f"Scanning |disc| in [{lo}, {hi}]")
                results.append(scan_block(lo, hi))

        return [record for block in results for record in block]

    def records(self, lo: int, hi: int) -> List[ScanRecord]:
        """All scan records with lo <= |disc| <= hi, ordered by |disc|."""

        if lo > hi:
            raise ValidationError(f"empty range [{lo}, {hi}]")

        wanted = [-disc for disc in fundamental_discriminants(lo, hi)]
        found: Dict[int, ScanRecord] = {}
        missing = []
        for n in wanted:
            record = self.cache.get(n)
            if record is None:
                missing.append(n)
            else:
                found[n] = record

        if found:
            self.logger.debug(f"{len(found)} cache hits in [{lo}, {hi}]")

        missing_set = set(missing)
        fresh = [r for r in self._compute(self._blocks(lo, hi, missing)) if r.abs_disc in missing_set]
        if len(fresh) != len(missing):
            raise InvariantViolation(f"scan of [{lo}, {hi}] produced {len(fresh)} records, expected {len(missing)}")

        self.cache.append(fresh)
        found.update((r.abs_disc, r) for r in fresh)

        result = [found[n] for n in wanted]
        mismatches = [r.abs_disc for r in result if r.convention_mismatch]
        if mismatches:
            self.logger.warning(
                f"torsion conventions differ at {len(mismatches)} discriminants in [{lo}, {hi}], first {mismatches[0]}"
            )
        return result

    def _min_cusps(self, record: ScanRecord, convention: Optional[str]) -> int:
        convention = convention or self.convention
        if convention not in TORSION_CONVENTIONS:
            raise ValidationError(f"torsion convention must be one of {TORSION_CONVENTIONS}, got {convention!r}")
        return record.min_cusps_for(convention)

    def scan_one_cusped(self, max_abs_disc: int, convention: Optional[str] = None) -> List[ScanRecord]:
        """Fields with h = h_{k,3}: their maximal lattices have a single cusp."""

        validate_positive(max_abs_disc, "max_abs_disc", minimum=3)
        return [r for r in self.records(3, max_abs_disc) if self._min_cusps(r, convention) == 1]

    def scan_n_cusped(self, n: int, max_abs_disc: int,
                      convention: Optional[str] = None) -> Tuple[List[ScanRecord], Optional[int]]:
        """Fields with h/h_{k,3} <= n, plus the largest |disc| among them."""

        validate_positive(n, "N")
        validate_positive(max_abs_disc, "max_abs_disc", minimum=3)
        hits = [r for r in self.records(3, max_abs_disc) if self._min_cusps(r, convention) <= n]
        largest = hits[-1].abs_disc if hits else None
        self.logger.info(f"{len(hits)} fields with at most {n} cusps up to |disc| = {max_abs_disc}")
        return hits, largest

    def growth_report(self, ranges: Iterable[Tuple[int, int]],
                      convention: Optional[str] = None) -> List[GrowthRow]:
        """Minimum of h/h_{k,3} over each range, with a nondecreasing flag per row after the first.

        A decrease between ranges past |disc| = 5000 is logged, never raised.
        """

        rows: List[GrowthRow] = []
        for lo, hi in validate_ranges(ranges):
            records = self.records(lo, hi)
            if not records:
                raise ValidationError(f"range [{lo}, {hi}] contains no fundamental discriminant")

            best = min(records, key=lambda r: (self._min_cusps(r, convention), r.abs_disc))
            minimum = self._min_cusps(best, convention)
            nondecreasing = None
            if rows:
                nondecreasing = minimum >= rows[-1].min_ratio
                if not nondecreasing and lo >= GROWTH_TREND_START:
                    self.logger.warning(
                        f"minimum of h/h3 drops from {rows[-1].min_ratio} to {minimum} on [{lo}, {hi}]"
                    )
            rows.append(GrowthRow(lo=lo, hi=hi, count=len(records), min_ratio=minimum,
                                  argmin_abs_disc=best.abs_disc, nondecreasing=nondecreasing))
        return rows

    def _higher(self, record: ScanRecord, r: int, convention: Optional[str]) -> HigherRecord:
        convention = convention or self.convention
        q = 2 * r + 1
        if convention == "primary":
            h_q = primary_from_h(record.h, q)
        else:
            h_q = torsion_from_structure(record.structure, q)

        numerator = record.h ** r
        if numerator % h_q:
            raise InvariantViolation(f"|disc| {record.abs_disc}: h_(k,{q}) = {h_q} does not divide h^{r}")
        return HigherRecord(abs_disc=record.abs_disc, h=record.h, r=r, q=q, h_q=h_q, cusps=numerator // h_q)

    def scan_higher_n_cusped(self, r: int, n: int, max_abs_disc: int,
                             convention: Optional[str] = None) -> List[HigherRecord]:
        """Fields whose maximal simple-type SU(r+1, r) lattice (m = 0) has at most n cusps."""

        validate_positive(r, "r")
        validate_positive(n, "N")
        validate_positive(max_abs_disc, "max_abs_disc", minimum=3)
        rows = [self._higher(record, r, convention) for record in self.records(3, max_abs_disc)]
        return [row for row in rows if row.cusps <= n]

    def higher_one_cusped(self, r: int, max_abs_disc: int,
                          convention: Optional[str] = None) -> List[HigherRecord]:
        """One-cusped fields in rank r >= 2; these are exactly the class number one fields."""

        validate_positive(r, "r", minimum=2)
        rows = self.scan_higher_n_cusped(r, 1, max_abs_disc, convention)
        stray = [row.abs_disc for row in rows if row.h != 1]
        if stray:
            raise InvariantViolation(f"one-cusped in rank {r} with h > 1: {stray}")
        return rows
