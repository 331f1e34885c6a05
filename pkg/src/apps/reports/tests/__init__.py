"""src/apps/reports/tests/__init__.py."""
