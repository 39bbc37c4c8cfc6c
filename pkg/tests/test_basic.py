"""Basic tests for picardcusps."""

import sys
import os
import pytest

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))


def test_import_modules():
    """Test that main modules can be imported."""
    import src.picardcusps.cli
    import src.picardcusps.arithmetic.quadfield
    import src.picardcusps.arithmetic.ideals
    import src.picardcusps.arithmetic.classgroup
    import src.picardcusps.lattices.hermitian_lines
    import src.picardcusps.lattices.modp
    import src.picardcusps.lattices.cusp_formulas
    import src.picardcusps.catalog.scanner
    import src.picardcusps.catalog.report


def test_package_exports():
    """Test the top-level names."""
    import src.picardcusps as picardcusps

    assert picardcusps.__version__
    fld = picardcusps.field_from_disc(-23)
    assert picardcusps.enumerate_reduced(fld.disc).h == 3


def test_config_defaults():
    """Test default configuration values."""
    from src.picardcusps.utils.config import Config

    config = Config()
    assert config.torsion_convention == "torsion"
    assert config.output_format == "md"
    assert config.scan_workers == 1
    assert config.oracle_max_prime == 97


def test_config_rejects_bad_values():
    from src.picardcusps.utils.config import Config
    from src.picardcusps.utils.validators import ValidationError

    with pytest.raises(ValidationError):
        Config(torsion_convention="sylow")
    with pytest.raises(ValidationError):
        Config(output_format="xml")
    with pytest.raises(ValidationError):
        Config(scan_workers=0)


def test_config_file_roundtrip(tmp_path):
    from src.picardcusps.utils.config import Config, create_default_config, load_config

    path = tmp_path / "picardcusps.json"
    create_default_config(path)
    loaded = load_config(path)
    assert loaded.to_dict() == Config().to_dict()


def test_config_unknown_key(tmp_path):
    from src.picardcusps.utils.config import Config
    from src.picardcusps.utils.validators import ValidationError

    path = tmp_path / "bad.json"
    path.write_text('{"cache_path": "x.jsonl", "colour": "blue"}', encoding="utf-8")
    with pytest.raises(ValidationError, match="colour"):
        Config.load_from_file(path)


def test_config_wrong_value_type(tmp_path):
    from src.picardcusps.utils.config import Config
    from src.picardcusps.utils.validators import ValidationError

    path = tmp_path / "bad.json"
    path.write_text('{"scan_workers": "two"}', encoding="utf-8")
    with pytest.raises(ValidationError, match="invalid value"):
        Config.load_from_file(path)

    path.write_text('{"scan_workers": ', encoding="utf-8")
    with pytest.raises(ValidationError, match="not valid JSON"):
        Config.load_from_file(path)

    path.write_text('[1, 2]', encoding="utf-8")
    with pytest.raises(ValidationError):
        Config.load_from_file(path)


def test_config_environment(monkeypatch):
    from src.picardcusps.utils.config import Config

    monkeypatch.setenv("PICARD_TORSION_CONVENTION", "primary")
    monkeypatch.setenv("PICARD_WORKERS", "3")
    config = Config.load_from_env()
    assert config.torsion_convention == "primary"
    assert config.scan_workers == 3


def test_config_update_skips_none():
    from src.picardcusps.utils.config import Config

    config = Config()
    config.update_from_dict({"output_format": "csv", "cache_path": None})
    assert config.output_format == "csv"
    assert config.cache_path == "picard_cache.jsonl"
