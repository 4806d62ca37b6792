"""Tests for exchci.config — worker limit from the environment."""

import os
from unittest.mock import patch

import pytest

from exchci.config import THREADS_ENV_VAR, worker_limit
from exchci.errors import InvalidArgumentError


@patch("exchci.config.load_dotenv")
class TestWorkerLimit:
    def test_env_value(self, _load):
        with patch.dict(os.environ, {THREADS_ENV_VAR: "3"}):
            assert worker_limit() == 3

    def test_defaults_to_cpu_count(self, _load):
        with patch.dict(os.environ, {}, clear=True), patch("exchci.config.os.cpu_count", return_value=6):
            assert worker_limit() == 6

    def test_cpu_count_unknown(self, _load):
        with patch.dict(os.environ, {}, clear=True), patch("exchci.config.os.cpu_count", return_value=None):
            assert worker_limit() == 1

    def test_not_an_integer(self, _load):
        with patch.dict(os.environ, {THREADS_ENV_VAR: "many"}):
            with pytest.raises(InvalidArgumentError, match="must be an integer"):
                worker_limit()

    def test_not_positive(self, _load):
        with patch.dict(os.environ, {THREADS_ENV_VAR: "0"}):
            with pytest.raises(InvalidArgumentError, match="must be positive"):
                worker_limit()
