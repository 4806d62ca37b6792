"""Tests for exchci.verify.registry — registration, sizing and suite selection."""

from unittest.mock import patch

import pytest

import exchci.verify.suites  # noqa: F401  populate the registry before any test patches it
from exchci.errors import InvalidArgumentError
from exchci.verify.registry import SUITES, register, registered


class TestRegister:
    @patch("exchci.verify.registry._REGISTRY", new_callable=list)
    def test_plain_check(self, registry):
        @register("sample", "core", nmin=4)
        def sample(seed):
            return None

        assert [(c.check_id, c.suite, c.size) for c in registry] == [("sample", "core", 4)]
        assert registry[0].run(7) is None

    @patch("exchci.verify.registry._REGISTRY", new_callable=list)
    def test_sized_check(self, registry):
        @register("sample", "network", sizes=(4, 5))
        def sample(seed, n):
            return f"{seed}:{n}"

        assert [c.check_id for c in registry] == ["sample-n4", "sample-n5"]
        assert registry[1].run(7) == "7:5"
        assert [c.check_id for c in registered("network", 4)] == ["sample-n4"]

    def test_unknown_suite(self):
        with pytest.raises(InvalidArgumentError, match="Unknown suite"):
            register("sample", "extra")


class TestRegistered:
    def test_every_suite_has_checks(self):
        for suite in SUITES:
            assert registered(suite, 6)

    def test_all_is_the_union(self):
        assert len(registered("all", 6)) == sum(len(registered(s, 6)) for s in SUITES)

    def test_ids_are_unique(self):
        ids = [c.check_id for c in registered("all", 8)]
        assert len(ids) == len(set(ids))

    def test_nmax_filters_sizes(self):
        ids = {c.check_id for c in registered("network", 5)}
        assert "incidence-separator-bounds-n5" in ids
        assert "incidence-separator-bounds-n6" not in ids
        assert "named-minimal-separators" not in ids
        assert "named-minimal-separators" in {c.check_id for c in registered("network", 6)}

    def test_small_nmax(self):
        assert registered("core", 3) == []

    def test_unknown_suite(self):
        with pytest.raises(InvalidArgumentError, match="Unknown suite"):
            registered("extra")
