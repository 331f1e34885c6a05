"""tests/factories/__init__.py."""
