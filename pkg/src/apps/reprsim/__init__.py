"""src/apps/reprsim/__init__.py."""
