"""Core module for Schlice configuration and the shared error hierarchy."""

from .errors import SchliceError
from .settings import ConfigurationError, Settings, load_config

__all__ = ["ConfigurationError", "SchliceError", "Settings", "load_config"]
