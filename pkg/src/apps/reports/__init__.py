"""src/apps/reports/__init__.py."""
