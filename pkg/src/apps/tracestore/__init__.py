"""src/apps/tracestore/__init__.py."""
