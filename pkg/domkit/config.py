import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict

import toml

log = logging.getLogger(__name__)

DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "limits": {
        "subset_cap": 14,
        "iso_limit": 12,
        "am_product_cap": 20,
        "function_space_cap": 4096,
        "cardinality_cap": 5000,
    },
    "constructors": {"max_seq_len": 2, "record_ordering": "pointwise"},
    "coop": {"max_seq_len": 1, "max_iters": 3, "cardinality_cap": 5000},
    "logging": {"level": "WARNING"},
}


def find_config_file() -> str:
    """
    Find the configuration file in standard locations.

    Look for config in the following locations (in order):
    1. ./domkit.toml (current directory)
    2. ~/.config/domkit/config.toml (user config directory)
    3. /etc/domkit/config.toml (system config directory)

    Returns:
        Path to the first config file found, or "" if no config file exists
    """
    for candidate in (
        Path("./domkit.toml"),
        Path.home() / ".config" / "domkit" / "config.toml",
        Path("/etc/domkit/config.toml"),
    ):
        if candidate.exists():
            return str(candidate)
    return ""


def load_config(config_path: str = "") -> Dict[str, Any]:
    """
    Load configuration from a TOML file.

    Args:
        config_path: Path to the configuration file. If not provided,
                    the function will search for a config file in standard locations.

    Returns:
        Dictionary with configuration values, file sections merged over the defaults
    """
    if not config_path:
        config_path = find_config_file()

    config = copy.deepcopy(DEFAULT_CONFIG)

    if config_path and os.path.exists(config_path):
        try:
            user_config = toml.load(config_path)
            for section in config:
                if section in user_config:
                    config[section].update(user_config[section])
        except (toml.TomlDecodeError, OSError, TypeError, ValueError) as e:
            log.warning("Error loading config file %s: %s", config_path, e)
    elif config_path:
        log.warning("Config file %s not found, using defaults", config_path)

    return config
