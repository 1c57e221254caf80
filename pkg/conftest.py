"""Pytest wiring: give Django TestCases the test database that `manage.py test` would create."""

import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'szx_project.settings')
django.setup()

from django.test.utils import setup_test_environment, teardown_test_environment  # noqa: E402
from django.test.utils import setup_databases, teardown_databases  # noqa: E402

_state = {}


def pytest_sessionstart(session):
    setup_test_environment()
    _state['dbs'] = setup_databases(verbosity=0, interactive=False)


def pytest_sessionfinish(session, exitstatus):
    if 'dbs' in _state:
        teardown_databases(_state.pop('dbs'), verbosity=0)
        teardown_test_environment()
