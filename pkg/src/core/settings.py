# coding: utf-8
"""Settings loader for Schlice.

This module loads configuration from config/config.json and provides
basic validation (required sections check). Values are exposed as class
attributes on Settings so analysis code can read them without passing a
configuration object around.

Note:
    Full JSON Schema validation is not implemented. The module validates
    that required config sections exist but does not validate against
    config/config.schema.json. The schema file is provided for documentation
    and can be used by external tools.

Environment:
    SCHLICE_BUDGET overrides search.siteBudget, with or without a config
    file. Settings.apply_environment raises on a malformed value; the
    import-time load only logs it, and the CLI applies it again so the
    error reaches the exit status.

See Also:
    - config/config.json: Configuration file
    - config/config.schema.json: JSON Schema for documentation/external validation
    - docs/DECISIONS_SUMMARY.md: configuration format decision
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, ClassVar, Dict, Optional

# Module logger
_logger = logging.getLogger(__name__)

# Determine config path relative to this file
_CONFIG_DIR = Path(__file__).parent.parent.parent / "config"
_CONFIG_FILE = _CONFIG_DIR / "config.json"
_SCHEMA_FILE = _CONFIG_DIR / "config.schema.json"

BUDGET_ENV_VAR = "SCHLICE_BUDGET"

REQUIRED_SECTIONS = ["search", "paths", "sat", "gadgets", "output", "logging"]


class ConfigurationError(Exception):
    """Raised when configuration loading or validation fails."""


def load_config(config_path: Optional[Path] = None) -> Dict[str, Any]:
    """Load and validate configuration from JSON file.

    Args:
        config_path: Optional path to config file. Defaults to config/config.json.

    Returns:
        Dict containing configuration values.

    Raises:
        ConfigurationError: If a required section is missing.
        FileNotFoundError: If config file does not exist.
        json.JSONDecodeError: If config file is not valid JSON.
    """
    if config_path is None:
        config_path = _CONFIG_FILE

    if not config_path.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    with open(config_path, "r", encoding="utf-8") as f:
        config = json.load(f)

    # Basic validation - check required sections exist
    for section in REQUIRED_SECTIONS:
        if section not in config:
            raise ConfigurationError(f"Missing required config section: {section}")

    return config


def budget_from_environment(default: int) -> int:
    """Return the site budget, honouring the SCHLICE_BUDGET override.

    Args:
        default: Budget to use when the variable is unset or empty.

    Raises:
        ConfigurationError: If the variable is set to a negative or
            non-integer value.
    """
    raw = os.environ.get(BUDGET_ENV_VAR, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from e
    if value < 0:
        raise ConfigurationError(f"{BUDGET_ENV_VAR} must be non-negative, got {value}")
    return value


class Settings:
    """Configuration settings container.

    This class loads settings from config.json and exposes them as class
    attributes.

    Attributes:
        siteBudget: Maximum number of free deletable sites a lattice search
            may enumerate.
        searchWorkers: Thread count used when checking quotients.
        defaultMaxLen: Default length cap for path enumeration.
        satMaxVariables: Largest variable count brute-force SAT accepts.
        endLabel: Label appended to gadget and corpus schemas for end slices.
        outputFormat: Default CLI output mode ("human" or "machine").
        logLevel: Default logging level name for the CLI.
    """

    _config: ClassVar[Dict[str, Any]] = {}
    _loaded: ClassVar[bool] = False

    # =========================================================================
    # Search settings
    # =========================================================================
    siteBudget: int = 24
    searchWorkers: int = 1

    # =========================================================================
    # Path settings
    # =========================================================================
    defaultMaxLen: int = 12

    # =========================================================================
    # SAT settings
    # =========================================================================
    satMaxVariables: int = 20

    # =========================================================================
    # Gadget settings
    # =========================================================================
    endLabel: str = "end"
    criterionVariable: str = "v"

    # =========================================================================
    # Output / logging settings
    # =========================================================================
    outputFormat: str = "human"
    logLevel: str = "WARNING"

    @classmethod
    def load(cls, config_path: Optional[Path] = None) -> None:
        """Load configuration from JSON file and update class attributes.

        Args:
            config_path: Optional path to config file. Defaults to config/config.json.

        Raises:
            ConfigurationError: If the file or the SCHLICE_BUDGET override is invalid.
        """
        if cls._loaded and config_path is None:
            return  # Already loaded default config

        config = load_config(config_path)
        cls._apply_config(config)
        cls._config = config
        cls._loaded = True
        cls.apply_environment()

    @classmethod
    def _apply_config(cls, config: Dict[str, Any]) -> None:
        """Map a loaded configuration dictionary onto class attributes.

        Raises:
            ConfigurationError: If keys are missing or values have the wrong type.
        """
        # Wrap in try/except to convert structural errors to ConfigurationError
        try:
            # Search
            cls.siteBudget = int(config["search"]["siteBudget"])
            cls.searchWorkers = int(config["search"].get("workers", 1))
            if cls.searchWorkers < 1:
                raise ValueError("search.workers must be at least 1")

            # Paths
            cls.defaultMaxLen = int(config["paths"]["defaultMaxLen"])

            # SAT
            cls.satMaxVariables = int(config["sat"]["maxVariables"])

            # Gadgets
            cls.endLabel = str(config["gadgets"]["endLabel"])
            cls.criterionVariable = str(config["gadgets"].get("criterionVariable", "v"))

            # Output / logging
            cls.outputFormat = config["output"].get("format", "human")
            if cls.outputFormat not in ("human", "machine"):
                raise ValueError(f"unknown output format {cls.outputFormat!r}")
            cls.logLevel = str(config["logging"].get("level", "WARNING")).upper()
        except KeyError as e:
            raise ConfigurationError(f"Missing required config key: {e}") from e
        except TypeError as e:
            raise ConfigurationError(f"Invalid config value type: {e}") from e
        except ValueError as e:
            raise ConfigurationError(f"Invalid config value: {e}") from e

    @classmethod
    def apply_environment(cls) -> None:
        """Apply the SCHLICE_BUDGET override to siteBudget.

        Raises:
            ConfigurationError: If the variable holds a malformed budget.
        """
        cls.siteBudget = budget_from_environment(cls.siteBudget)

    @classmethod
    def get_config(cls) -> Dict[str, Any]:
        """Return the raw configuration dictionary.

        Returns:
            Dict containing all configuration values.
        """
        if not cls._loaded:
            cls.load()
        return cls._config

    @classmethod
    def reload(cls) -> None:
        """Force reload configuration from file."""
        cls._loaded = False
        cls.load()


# Auto-load configuration on module import
try:
    Settings.load()
except FileNotFoundError:
    # Config file not found - use defaults, still honouring the environment
    try:
        Settings.apply_environment()
    except ConfigurationError as e:
        _logger.warning("Configuration validation error: %s", e)
except json.JSONDecodeError as e:
    _logger.warning("Invalid JSON in config file: %s", e)
except ConfigurationError as e:
    _logger.warning("Configuration validation error: %s", e)
except PermissionError as e:
    _logger.warning("Permission denied reading config file: %s", e)
except OSError as e:
    _logger.warning("OS error reading config file: %s", e)
