"""src/apps/probe/__init__.py."""
