"""Catalog scans, records, cache and reports."""

from .records import (ClassGroupRecord, CuspResult, GrowthRow, HigherRecord, LineWitness, NCuspedSummary,
                      OrbitReport, ScanRecord)
from .cache import ScanCache
from .scanner import CatalogScanner

__all__ = [
    'ScanRecord', 'CuspResult', 'GrowthRow', 'HigherRecord', 'LineWitness', 'OrbitReport', 'ClassGroupRecord',
    'NCuspedSummary',
    'ScanCache', 'CatalogScanner',
]
