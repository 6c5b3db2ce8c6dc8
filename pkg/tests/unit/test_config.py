"""Tests for configuration management."""

import os
from unittest.mock import patch

import yaml

from src.utils.config import Config, worker_threads


class TestConfig:
    """Test the Config class."""

    def test_config_init_default_env(self):
        """Test Config initialization with default environment."""
        with patch.dict(os.environ, {}, clear=True):
            config = Config()
            assert config.env == "development"
            assert config.config_dir.name == "config"

    def test_config_init_custom_env(self):
        """Test Config initialization with ALPINE_ENV."""
        with patch.dict(os.environ, {"ALPINE_ENV": "production"}):
            config = Config()
            assert config.env == "production"

    def test_repository_defaults(self):
        """The shipped default.yml carries every section."""
        config = Config("development")
        for section in ("embedding", "voptimality", "pagerank", "campaign", "data", "logging"):
            assert config.section(section)
        assert config.section("embedding")["dim"] == 8

    def test_env_file_deep_merges(self, tmp_path):
        """Environment files override single keys, not whole sections."""
        (tmp_path / "default.yml").write_text(
            yaml.dump({"embedding": {"dim": 8, "gamma": 1.0}, "campaign": {"step": 10}})
        )
        (tmp_path / "test.yml").write_text(yaml.dump({"embedding": {"dim": 2}}))
        config = Config("test")
        config.config_dir = tmp_path
        config.load()
        assert config.section("embedding") == {"dim": 2, "gamma": 1.0}
        assert config.get("campaign") == {"step": 10}

    def test_config_load_empty_files(self, tmp_path):
        """Test loading configuration with empty YAML files."""
        (tmp_path / "default.yml").touch()
        (tmp_path / "production.yml").touch()
        config = Config("production")
        config.config_dir = tmp_path
        config.load()
        assert config._config == {}
        assert config.section("embedding") == {}

    def test_config_get_method(self):
        """Test the get method functionality."""
        config = Config()
        config._config = {"string": "value", "nested": {"key": "nested_value"}}
        assert config.get("string") == "value"
        assert config.get("missing", "default") == "default"
        assert config.section("string") == {}


class TestWorkerThreads:
    """Test ALPINE_THREADS handling."""

    def test_capped_by_cpu_count(self):
        with patch.dict(os.environ, {"ALPINE_THREADS": "100000"}), patch("os.cpu_count", return_value=4):
            assert worker_threads() == 4

    def test_explicit_value(self):
        with patch.dict(os.environ, {"ALPINE_THREADS": "2"}), patch("os.cpu_count", return_value=4):
            assert worker_threads() == 2

    def test_invalid_value_falls_back(self):
        with patch.dict(os.environ, {"ALPINE_THREADS": "many"}), patch("os.cpu_count", return_value=3):
            assert worker_threads() == 3
