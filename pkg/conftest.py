# -*- coding: utf-8 -*-
"""Общие настройки pytest: маркер slow и опция --runslow."""
import pytest


def pytest_addoption(parser):
	parser.addoption("--runslow", action="store_true", default=False, help="запускать долгие тесты (slow)")


def pytest_configure(config):
	config.addinivalue_line("markers", "slow: долгий тест масштаба приёмки, запускается с --runslow")


def pytest_collection_modifyitems(config, items):
	if config.getoption("--runslow"):
		return
	skip_slow = pytest.mark.skip(reason="нужен --runslow")
	for item in items:
		if "slow" in item.keywords:
			item.add_marker(skip_slow)
