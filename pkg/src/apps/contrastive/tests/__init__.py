"""src/apps/contrastive/tests/__init__.py."""
