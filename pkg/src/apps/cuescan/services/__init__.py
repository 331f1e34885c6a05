"""src/apps/cuescan/services/__init__.py."""
