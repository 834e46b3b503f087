"""
Shared run configuration for lipext.

CONFIG is a module-level dict (singleton). The CLI loads config.yaml and
environment overrides into it; library functions read it when no explicit
tolerance is passed. Tests set values on it directly.
"""

import logging
import os

import yaml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# Module-level config (loaded by lipext.main or set by callers)
CONFIG = {
    "epsilon": 1e-9,
    "max_violations": 100,
    "policy": "min",
    "point_order": "ascending",
    "format": "json",
    "indent": 2,
}

DEFAULTS = dict(CONFIG)

ENV_OVERRIDES = {
    "LIPEXT_EPSILON": ("epsilon", float),
    "LIPEXT_MAX_VIOLATIONS": ("max_violations", int),
    "LIPEXT_POLICY": ("policy", str),
}


def get_epsilon(eps: float | None = None) -> float:
    """Return eps if given, else the configured tolerance."""
    return CONFIG["epsilon"] if eps is None else float(eps)


def reset_config() -> None:
    """Restore CONFIG to its defaults."""
    CONFIG.clear()
    CONFIG.update(DEFAULTS)


def load_config(path: str = "config.yaml") -> dict:
    """
    Merge config.yaml (if present) and LIPEXT_* environment variables into CONFIG.

    Unknown keys in the file are ignored with a warning. Returns CONFIG.
    """
    # Load environment variables from .env file (if present)
    load_dotenv()

    if path and os.path.exists(path):
        with open(path) as f:
            file_config = yaml.safe_load(f) or {}
        for key, value in file_config.items():
            if key in CONFIG:
                CONFIG[key] = value
            else:
                logger.warning(f"Ignoring unknown config key '{key}' in {path}")

    for env_name, (key, cast) in ENV_OVERRIDES.items():
        raw = os.environ.get(env_name)
        if raw is not None:
            CONFIG[key] = cast(raw)

    CONFIG["epsilon"] = float(CONFIG["epsilon"])
    if CONFIG["epsilon"] <= 0:
        raise ValueError(f"epsilon must be positive, got {CONFIG['epsilon']}")

    return CONFIG
