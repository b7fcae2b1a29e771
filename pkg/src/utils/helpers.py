import logging
import os
import sys
from configparser import ConfigParser
from pathlib import Path
from typing import List, Mapping, Optional

from pydantic import BaseModel, Field, field_validator

from src.utils.constants import (
    CONFIG_ENV,
    CONFIG_FILENAME,
    DEFAULT_FIELDS,
    DEFAULT_NODE_BUDGET,
    NODE_BUDGET_ENV,
    SUPPORTED_PRIMES,
)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def get_script_folder() -> str:
    """
    Get the absolute path to the project folder.

    Returns:
        str: The folder holding ``main.py`` and ``config.ini``.
    """
    return str(Path(__file__).resolve().parents[2])


def get_config_path() -> Path:
    override = os.environ.get(CONFIG_ENV)
    if override:
        return Path(override)
    return Path(get_script_folder()) / CONFIG_FILENAME


def read_config(path: Optional[Path] = None) -> ConfigParser:
    """
    Read the configuration file; a missing file yields an empty parser.

    Args:
        path (Optional[Path]): Explicit file, else ``$HARB_CONFIG`` or the
            project's ``config.ini``.

    Returns:
        ConfigParser: The configuration object.
    """
    config_path = path or get_config_path()
    config = ConfigParser()
    if config_path.exists():
        with open(config_path, encoding="utf-8") as f:
            config.read_file(f)
    return config


class SearchSettings(BaseModel):
    node_budget: int = Field(default=DEFAULT_NODE_BUDGET, ge=1)
    fields: List[int] = Field(default_factory=lambda: list(DEFAULT_FIELDS))
    jobs: int = Field(default=1, ge=1)
    log_level: str = "WARNING"

    @field_validator("fields", mode="before")
    @classmethod
    def split_fields(cls, value):
        if isinstance(value, str):
            return [int(v.strip().lower().lstrip("f")) for v in value.split(",") if v.strip()]
        return value

    @field_validator("fields")
    @classmethod
    def supported_fields(cls, value: List[int]) -> List[int]:
        for p in value:
            if p not in SUPPORTED_PRIMES:
                raise ValueError(f"unsupported prime {p}; choose from {SUPPORTED_PRIMES}")
        return value

    @field_validator("log_level")
    @classmethod
    def known_level(cls, value: str) -> str:
        level = value.strip().upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level {value!r}")
        return level


def load_settings(
    path: Optional[Path] = None, environ: Optional[Mapping[str, str]] = None
) -> SearchSettings:
    """
    Merge ``config.ini`` [DEFAULT] with environment overrides.

    Raises:
        pydantic.ValidationError: If a value is out of range.
    """
    env = os.environ if environ is None else environ
    values = dict(read_config(path).defaults())
    if env.get(NODE_BUDGET_ENV):
        values["node_budget"] = env[NODE_BUDGET_ENV]
    return SearchSettings.model_validate(values)


def setup_logging(level: str | int = "WARNING") -> None:
    """Send log records to stderr; stdout is reserved for results."""
    root = logging.getLogger("src")
    if not any(getattr(h, "_harbourne", False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._harbourne = True
        root.addHandler(handler)
    root.setLevel(level)
