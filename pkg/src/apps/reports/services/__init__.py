"""src/apps/reports/services/__init__.py."""
