"""src/apps/tracestore/services/__init__.py."""
