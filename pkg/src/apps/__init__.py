"""src/apps/__init__.py."""
