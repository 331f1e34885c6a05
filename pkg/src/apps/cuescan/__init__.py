"""src/apps/cuescan/__init__.py."""
