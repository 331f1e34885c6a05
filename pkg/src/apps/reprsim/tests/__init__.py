"""src/apps/reprsim/tests/__init__.py."""
