"""src/apps/negdata/tests/__init__.py."""
