"""
Tests for settings, request defaults and logging setup.
"""

import json
import logging

import pytest
from pydantic import ValidationError

from rankone.config import Settings
from rankone.logging_config import configure_logging
from rankone.schemas.request import CheckConfig, SampleSpec


class TestSettings:
    """Environment-driven configuration."""

    def test_defaults(self):
        """Documented defaults for grids, tolerances and sampling."""
        config = Settings(_env_file=None)
        assert config.grid_min == 1.0 + 1e-6
        assert config.grid_max == 1e3
        assert config.grid_n == 2048
        assert config.tol_abs == 1e-7
        assert config.oracle_samples == 2000
        assert config.oracle_seed == 7
        assert (config.lambda_min, config.lambda_max) == (0.1, 10.0)

    def test_env_override(self, monkeypatch):
        """RANKONE_-prefixed variables override defaults."""
        monkeypatch.setenv("RANKONE_GRID_N", "512")
        monkeypatch.setenv("RANKONE_ORACLE_SEED", "11")
        monkeypatch.setenv("rankone_log_level", "debug")
        config = Settings(_env_file=None)
        assert config.grid_n == 512
        assert config.oracle_seed == 11
        assert config.log_level == "DEBUG"

    @pytest.mark.parametrize(
        "overrides",
        [
            {"environment": "prod"},
            {"log_level": "chatty"},
            {"log_format": "xml"},
            {"grid_min": 1.0},
            {"grid_min": 10.0, "grid_max": 5.0},
            {"grid_n": 8},
            {"lambda_min": 0.0},
            {"lambda_min": 5.0, "lambda_max": 2.0},
        ],
    )
    def test_validation(self, overrides):
        """Invalid values are rejected at load time."""
        with pytest.raises(ValidationError):
            Settings(_env_file=None, **overrides)

    def test_request_defaults_follow_settings(self):
        """CheckConfig and SampleSpec are built from a Settings instance."""
        config = Settings(
            _env_file=None, grid_n=300, oracle_samples=40, lambda_max=4.0
        )
        cfg = CheckConfig.from_settings(config)
        assert cfg.grid_n == 300
        assert cfg.separate_grid_n == config.separate_grid_n
        spec = SampleSpec.from_settings(config)
        assert spec.n_points == 40
        assert spec.lambda_range == (0.1, 4.0)

    def test_check_config_grid(self):
        """A per-request grid must stay inside (1, inf)."""
        with pytest.raises(ValidationError):
            CheckConfig(grid_min=1.0)
        with pytest.raises(ValidationError):
            CheckConfig(grid_n=4)


class TestLogging:
    """stderr logging setup."""

    def test_single_handler(self):
        """Repeated setup replaces the handler."""
        configure_logging(Settings(_env_file=None))
        logger = configure_logging(Settings(_env_file=None, log_level="info"))
        names = [h.get_name() for h in logger.handlers]
        assert names.count("rankone-stderr") == 1
        assert logger.level == logging.INFO

    def test_json_records(self, capsys):
        """JSON lines go to stderr, stdout stays clean."""
        logger = configure_logging(Settings(_env_file=None, log_level="INFO"))
        logging.getLogger("rankone.test").info("grid %d", 256)
        captured = capsys.readouterr()
        assert captured.out == ""
        record = json.loads(captured.err.strip().splitlines()[-1])
        assert record["message"] == "grid 256"
        assert record["levelname"] == "INFO"
        assert record["name"] == "rankone.test"
        logger.setLevel(logging.WARNING)

    def test_text_format(self, capsys):
        """log_format=text uses a plain formatter."""
        logger = configure_logging(
            Settings(_env_file=None, log_level="INFO", log_format="text")
        )
        logging.getLogger("rankone.test").info("plain")
        err = capsys.readouterr().err
        assert "rankone.test: plain" in err
        configure_logging(Settings(_env_file=None))
        assert logger.level == logging.WARNING
