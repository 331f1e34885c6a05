"""src/apps/negdata/__init__.py."""
