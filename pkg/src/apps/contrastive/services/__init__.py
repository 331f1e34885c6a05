"""src/apps/contrastive/services/__init__.py."""
