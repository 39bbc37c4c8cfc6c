"""Configuration management for picardcusps."""

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from decouple import config

from .validators import ValidationError

TORSION_CONVENTIONS = ("torsion", "primary")
OUTPUT_FORMATS = ("json", "csv", "md")


@dataclass
class Config:
    """Configuration settings for picardcusps."""

    # General settings
    log_level: str = "WARNING"

    # Scan cache
    cache_path: str = "picard_cache.jsonl"
    cache_enabled: bool = True

    # Arithmetic conventions
    torsion_convention: str = "torsion"

    # Reports
    output_format: str = "md"

    # Performance
    scan_workers: int = 1
    scan_block_size: int = 2000

    # Oracles
    oracle_max_prime: int = 97
    zink_height_bound: int = 200
    sample_bound: int = 4

    def __post_init__(self):
        if self.torsion_convention not in TORSION_CONVENTIONS:
            raise ValidationError(
                f"torsion_convention must be one of {TORSION_CONVENTIONS}, got {self.torsion_convention!r}"
            )
        if self.output_format not in OUTPUT_FORMATS:
            raise ValidationError(
                f"output_format must be one of {OUTPUT_FORMATS}, got {self.output_format!r}"
            )
        if self.scan_workers < 1:
            raise ValidationError(f"scan_workers must be >= 1, got {self.scan_workers}")
        if self.scan_block_size < 1:
            raise ValidationError(f"scan_block_size must be >= 1, got {self.scan_block_size}")

    @classmethod
    def load_from_env(cls) -> 'Config':
        """Load configuration from environment variables."""

        return cls(
            log_level=config('PICARD_LOG_LEVEL', default='WARNING'),

            cache_path=config('PICARD_CACHE', default='picard_cache.jsonl'),
            cache_enabled=config('PICARD_CACHE_ENABLED', default=True, cast=bool),

            torsion_convention=config('PICARD_TORSION_CONVENTION', default='torsion'),
            output_format=config('PICARD_FORMAT', default='md'),

            scan_workers=config('PICARD_WORKERS', default=1, cast=int),
            scan_block_size=config('PICARD_BLOCK_SIZE', default=2000, cast=int),

            oracle_max_prime=config('PICARD_ORACLE_MAX_PRIME', default=97, cast=int),
            zink_height_bound=config('PICARD_ZINK_HEIGHT', default=200, cast=int),
            sample_bound=config('PICARD_SAMPLE_BOUND', default=4, cast=int),
        )

    @classmethod
    def load_from_file(cls, config_path: Path) -> 'Config':
        """Load configuration from JSON file."""

        if not config_path.exists():
            return cls()

        with open(config_path, 'r', encoding='utf-8') as f:
            try:
                config_data = json.load(f)
            except json.JSONDecodeError as e:
                raise ValidationError(f"{config_path} is not valid JSON: {e}")

        if not isinstance(config_data, dict):
            raise ValidationError(f"{config_path} must contain a JSON object")

        known = {f.name for f in fields(cls)}
        unknown = sorted(set(config_data) - known)
        if unknown:
            raise ValidationError(f"unknown configuration keys in {config_path}: {unknown}")

        # Wrong value types surface as TypeError from the checks in __post_init__
        try:
            return cls(**config_data)
        except TypeError as e:
            raise ValidationError(f"invalid value in {config_path}: {e}")

    def save_to_file(self, config_path: Path):
        """Save configuration to JSON file."""

        config_path.parent.mkdir(parents=True, exist_ok=True)

        with open(config_path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)

    def update_from_dict(self, updates: Dict[str, Any]):
        """Update configuration from dictionary, skipping None values."""

        for key, value in updates.items():
            if value is not None and hasattr(self, key):
                setattr(self, key, value)
        self.__post_init__()

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return asdict(self)


def get_config_paths() -> List[Path]:
    """Get list of possible configuration file paths."""

    return [
        Path('picardcusps.json'),
        Path('config/picardcusps.json'),
        Path.home() / '.picardcusps' / 'config.json',
    ]


def load_config(config_path: Optional[Path] = None) -> Config:
    """Load configuration from file or environment.

    Args:
        config_path: Optional path to configuration file

    Returns:
        Config object
    """

    if config_path:
        config_paths = [config_path]
    else:
        config_paths = [path for path in get_config_paths() if path.exists()]

    env_config = Config.load_from_env()
    if not config_paths:
        return env_config

    loaded = Config.load_from_file(config_paths[0])

    # Environment wins, but only where it differs from the defaults
    defaults = Config()
    for name in loaded.to_dict():
        env_value = getattr(env_config, name)
        if env_value != getattr(defaults, name):
            setattr(loaded, name, env_value)

    return loaded


def create_default_config(config_path: Path) -> Config:
    """Create a default configuration file."""

    default = Config()
    default.save_to_file(config_path)

    return default
