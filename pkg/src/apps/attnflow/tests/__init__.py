"""src/apps/attnflow/tests/__init__.py."""
