"""src/apps/negdata/services/__init__.py."""
