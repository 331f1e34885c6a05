"""src/apps/tracestore/tests/__init__.py."""
