"""src/apps/cuescan/tests/__init__.py."""
