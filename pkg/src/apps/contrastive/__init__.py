"""src/apps/contrastive/__init__.py."""
