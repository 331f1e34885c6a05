"""src/apps/probe/tests/__init__.py."""
