"""Append-only JSON-lines cache of scan records, keyed by |disc|."""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from pydantic import ValidationError as ModelValidationError

from .records import ScanRecord


class ScanCache:
    """Scan records persisted one per line, decimal integers only.

    The cache is read once and appended to by a single writer. A malformed
    line (for example a partial write from an interrupted run) is skipped
    with a warning and recomputed.
    """

    def __init__(self, path: Path, enabled: bool = True):
        self.logger = logging.getLogger(__name__)
        self.path = Path(path)
        self.enabled = enabled
        self._records: Optional[Dict[int, ScanRecord]] = None

    def _load(self) -> Dict[int, ScanRecord]:
        if self._records is not None:
            return self._records

        self._records = {}
        if not self.enabled or not self.path.exists():
            return self._records

        with open(self.path, 'r', encoding='utf-8') as f:
            for number, line in enumerate(f, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = ScanRecord.from_json_line(line)
                except (ModelValidationError, ValueError) as e:
                    self.logger.warning(f"{self.path}:{number}: skipping unreadable cache line ({e})")
                    continue
                self._records[record.abs_disc] = record

        self.logger.info(f"Loaded {len(self._records)} cached records from {self.path}")
        return self._records

    def get(self, abs_disc: int) -> Optional[ScanRecord]:
        if not self.enabled:
            return None
        return self._load().get(abs_disc)

    def __contains__(self, abs_disc: int) -> bool:
        return self.get(abs_disc) is not None

    def __len__(self) -> int:
        return len(self._load()) if self.enabled else 0

    def append(self, records: Iterable[ScanRecord]) -> int:
        """Append records not yet cached, in the given order. Returns the number written."""

        if not self.enabled:
            return 0

        known = self._load()
        fresh: List[ScanRecord] = [r for r in records if r.abs_disc not in known]
        if not fresh:
            return 0

        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, 'a', encoding='utf-8') as f:
            for record in fresh:
                f.write(record.to_json_line() + "\n")
                known[record.abs_disc] = record

        self.logger.debug(f"Appended {len(fresh)} records to {self.path}")
        return len(fresh)
