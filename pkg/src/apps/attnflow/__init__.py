"""src/apps/attnflow/__init__.py."""
