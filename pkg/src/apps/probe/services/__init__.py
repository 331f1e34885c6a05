"""src/apps/probe/services/__init__.py."""
