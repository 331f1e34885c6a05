"""conftest.py."""

pytest_plugins = [
    "tests.fixtures.corpora",
    "tests.fixtures.traces",
    "tests.fixtures.scan",
]
