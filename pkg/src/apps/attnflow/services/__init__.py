"""src/apps/attnflow/services/__init__.py."""
