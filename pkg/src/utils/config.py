"""Configuration management"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

load_dotenv()


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class Config:
    """Configuration manager"""

    def __init__(self, env: Optional[str] = None):
        self.env = env or os.getenv("ALPINE_ENV", "development")
        self.config_dir = Path(__file__).parent.parent.parent / "config"
        self._config: Dict[str, Any] = {}
        self.load()

    def load(self):
        """Load configuration from YAML files"""
        self._config = {}
        default_path = self.config_dir / "default.yml"
        if default_path.exists():
            with open(default_path) as f:
                self._config = yaml.safe_load(f) or {}

        # Environment file overrides keys section by section
        env_path = self.config_dir / f"{self.env}.yml"
        if env_path.exists():
            with open(env_path) as f:
                env_config = yaml.safe_load(f) or {}
                self._config = _merge(self._config, env_config)

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value"""
        return self._config.get(key, default)

    def section(self, key: str) -> Dict[str, Any]:
        """Return a configuration section, empty when missing."""
        value = self._config.get(key) or {}
        return dict(value) if isinstance(value, dict) else {}


def worker_threads() -> int:
    """Number of scoring threads, capped by ALPINE_THREADS."""
    cores = os.cpu_count() or 1
    raw = os.getenv("ALPINE_THREADS")
    if not raw:
        return cores
    try:
        value = int(raw)
    except ValueError:
        return cores
    return max(1, min(value, cores))


config = Config()
