"""Tests for catalog scans, the scan cache and reports."""

import sys
import os
import json

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.picardcusps.catalog.cache import ScanCache
from src.picardcusps.catalog.records import NCuspedSummary
from src.picardcusps.catalog.report import format_growth, format_n_cusped, format_one_cusped, format_scan, table_report
from src.picardcusps.catalog.scanner import (
    CatalogScanner,
    field_d,
    primary_from_h,
    scan_block,
    torsion_from_structure,
)
from src.picardcusps.utils.config import Config
from src.picardcusps.utils.validators import ValidationError

CLASS_NUMBER_ONE = [3, 4, 7, 8, 11, 19, 43, 67, 163]
CLASS_NUMBER_THREE = [23, 31, 59, 83, 107, 139, 211, 283, 307, 331, 379, 499, 547, 643, 883, 907]


@pytest.fixture
def scanner():
    return CatalogScanner(Config(cache_enabled=False))


@pytest.fixture
def cached_scanner(tmp_path):
    return CatalogScanner(Config(cache_path=str(tmp_path / "cache.jsonl")))


def test_torsion_helpers():
    assert torsion_from_structure([3, 3], 3) == 9
    assert torsion_from_structure([9], 3) == 3
    assert torsion_from_structure([2, 6], 3) == 3
    assert torsion_from_structure([], 5) == 1
    assert primary_from_h(9, 3) == 9
    assert primary_from_h(12, 3) == 3
    assert primary_from_h(10, 3) == 1
    assert field_d(23) == 23
    assert field_d(20) == 5
    assert field_d(8) == 2


def test_scan_block_ordered():
    records = scan_block(3, 40)
    assert [r.abs_disc for r in records] == [3, 4, 7, 8, 11, 15, 19, 20, 23, 24, 31, 35, 39, 40]
    by_disc = {r.abs_disc: r for r in records}
    assert by_disc[23].h == 3
    assert by_disc[23].one_cusped
    assert by_disc[39].h == 4
    assert by_disc[39].min_cusps == 4


def test_one_cusped_below_thousand(scanner):
    records = scanner.scan_one_cusped(1000)
    assert len(records) == 25
    assert [r.abs_disc for r in records if r.h == 1] == CLASS_NUMBER_ONE
    assert [r.abs_disc for r in records if r.h == 3] == CLASS_NUMBER_THREE
    assert all(r.h in (1, 3) for r in records)


def test_one_cusped_first_class_number_nine(scanner):
    records = scanner.scan_one_cusped(4100)
    nine = [r for r in records if r.h == 9]
    assert [r.abs_disc for r in nine] == [4027]
    assert nine[0].structure == [3, 3]
    assert nine[0].h3 == 9


def test_primary_convention(scanner):
    torsion = {r.abs_disc for r in scanner.scan_one_cusped(1000)}
    primary = {r.abs_disc for r in scanner.scan_one_cusped(1000, convention="primary")}
    assert torsion < primary
    assert 199 in primary
    with pytest.raises(ValidationError):
        scanner.scan_one_cusped(1000, convention="sylow")


def test_one_cusped_rejects_small_bound(scanner):
    with pytest.raises(ValidationError):
        scanner.scan_one_cusped(2)


def test_n_cusped(scanner):
    hits, largest = scanner.scan_n_cusped(1, 1000)
    assert hits == scanner.scan_one_cusped(1000)
    assert largest == 907

    hits, largest = scanner.scan_n_cusped(2, 500)
    discs = [r.abs_disc for r in hits]
    assert 20 in discs
    assert 39 not in discs
    assert discs == sorted(discs)
    assert largest == discs[-1]


def test_growth_report(scanner):
    rows = scanner.growth_report([(3, 200), (201, 1000)])
    assert rows[0].min_ratio == 1
    assert rows[0].argmin_abs_disc == 3
    assert rows[0].nondecreasing is None
    assert rows[1].min_ratio == 1
    assert rows[1].argmin_abs_disc == 211
    assert rows[1].nondecreasing is True
    assert sum(row.count for row in rows) == len(scanner.records(3, 1000))


def test_growth_report_rejects_bad_ranges(scanner):
    with pytest.raises(ValidationError):
        scanner.growth_report([(10, 5)])
    with pytest.raises(ValidationError):
        scanner.growth_report([(5, 6)])
    with pytest.raises(ValidationError):
        scanner.growth_report([(100, 200), (150, 300)])
    with pytest.raises(ValidationError):
        scanner.growth_report([(100, 200), (200, 300)])


def test_growth_single_range_has_no_trend(scanner):
    rows = scanner.growth_report([(3, 100)])
    assert len(rows) == 1
    assert rows[0].nondecreasing is None


def test_higher_one_cusped(scanner):
    for r in (2, 5):
        rows = scanner.higher_one_cusped(r, 200)
        assert [row.abs_disc for row in rows] == CLASS_NUMBER_ONE
        assert all(row.q == 2 * r + 1 for row in rows)
    assert [row.abs_disc for row in scanner.higher_one_cusped(3, 30)] == [3, 4, 7, 8, 11, 19]
    with pytest.raises(ValidationError):
        scanner.higher_one_cusped(1, 200)


def test_higher_n_cusped_rank_one_matches_surface_scan(scanner):
    rows = scanner.scan_higher_n_cusped(1, 2, 500)
    hits, _ = scanner.scan_n_cusped(2, 500)
    assert [row.abs_disc for row in rows] == [r.abs_disc for r in hits]


def test_cache_reuse(cached_scanner, tmp_path):
    cold = cached_scanner.records(3, 600)
    path = tmp_path / "cache.jsonl"
    lines = path.read_text().splitlines()
    assert len(lines) == len(cold)

    warm = CatalogScanner(Config(cache_path=str(path))).records(3, 600)
    assert warm == cold
    # nothing new to write
    assert len(path.read_text().splitlines()) == len(cold)


def test_cache_extends(cached_scanner, tmp_path):
    cached_scanner.records(3, 300)
    wider = CatalogScanner(Config(cache_path=str(tmp_path / "cache.jsonl"))).records(3, 600)
    fresh = CatalogScanner(Config(cache_enabled=False)).records(3, 600)
    assert wider == fresh
    assert len(ScanCache(tmp_path / "cache.jsonl")) == len(fresh)


def test_corrupt_cache_line_skipped(cached_scanner, tmp_path):
    expected = cached_scanner.records(3, 300)
    path = tmp_path / "cache.jsonl"
    lines = path.read_text().splitlines()
    lines[5] = lines[5][:10]
    lines.append(json.dumps({"abs_disc": 999, "h": 2}))
    path.write_text("\n".join(lines) + "\n")

    assert CatalogScanner(Config(cache_path=str(path))).records(3, 300) == expected


def test_disabled_cache_writes_nothing(tmp_path):
    path = tmp_path / "cache.jsonl"
    CatalogScanner(Config(cache_path=str(path), cache_enabled=False)).records(3, 100)
    assert not path.exists()


def test_workers_do_not_change_output():
    serial = CatalogScanner(Config(cache_enabled=False, scan_block_size=150)).records(3, 1000)
    parallel = CatalogScanner(Config(cache_enabled=False, scan_block_size=150, scan_workers=2)).records(3, 1000)
    assert parallel == serial


def test_table_report(scanner):
    table = table_report(scanner.scan_one_cusped(1000))
    lines = table.splitlines()
    assert lines[0] == "| h_k | |d_k| |"
    assert "| 1 | 3, 4, 7, 8, 11, 19, 43, 67, 163 |" in lines
    assert "| 3 | " + ", ".join(str(n) for n in CLASS_NUMBER_THREE) + " |" in lines
    assert "| 9 | ∅ |" in lines
    assert "| 27 | ∅ |" in lines


def test_report_formats(scanner):
    records = scanner.scan_one_cusped(1000)
    csv = format_one_cusped(records, "csv")
    assert len(csv.splitlines()) == 26
    assert csv.splitlines()[0].startswith("abs_disc,d,h,h3")

    lines = format_scan(records, "json").splitlines()
    assert len(lines) == 25
    assert json.loads(lines[0])["abs_disc"] == 3

    with pytest.raises(ValidationError):
        format_scan(records, "xml")


def test_n_cusped_formats(scanner):
    hits, largest = scanner.scan_n_cusped(1, 500)
    summary = NCuspedSummary(n=1, max_abs_disc=500, count=len(hits), largest_abs_disc=largest)

    lines = format_n_cusped(hits, summary, "json").splitlines()
    assert len(lines) == len(hits) + 1
    assert json.loads(lines[-1]) == {"n": 1, "max_abs_disc": 500, "count": len(hits), "largest_abs_disc": 499}

    csv = format_n_cusped(hits, summary, "csv").splitlines()
    assert csv[0].endswith(",largest_abs_disc")
    assert len(csv) == len(hits) + 1
    assert all(line.endswith(",499") for line in csv[1:])

    md = format_n_cusped(hits, summary, "md")
    assert md.rstrip().endswith(f"{len(hits)} fields; largest |disc|: 499")

    empty = NCuspedSummary(n=1, max_abs_disc=2, count=0)
    assert json.loads(format_n_cusped([], empty, "json"))["largest_abs_disc"] is None


def test_growth_markdown(scanner):
    text = format_growth(scanner.growth_report([(3, 100)]), "md")
    assert text.splitlines()[2].startswith("| 3 | 100 |")


@pytest.mark.slow
def test_one_cusped_to_hundred_thousand(scanner):
    records = scanner.scan_one_cusped(100000)
    assert [r.abs_disc for r in records if r.h == 1] == CLASS_NUMBER_ONE
    assert [r.abs_disc for r in records if r.h == 3] == CLASS_NUMBER_THREE
    assert [r.abs_disc for r in records if r.h == 9] == [4027]
    assert all(r.h in (1, 3, 9) for r in records)


@pytest.mark.slow
def test_growth_to_hundred_thousand(scanner):
    rows = scanner.growth_report([(1000, 9999), (10000, 100000)])
    assert rows[0].min_ratio == 1
    assert rows[1].min_ratio > 1
    assert rows[1].nondecreasing is True


@pytest.mark.slow
def test_higher_rank_to_ten_thousand(scanner):
    for r in (2, 3, 4, 5):
        assert [row.abs_disc for row in scanner.higher_one_cusped(r, 10000)] == CLASS_NUMBER_ONE
