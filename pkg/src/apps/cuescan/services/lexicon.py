"""src/apps/cuescan/services/lexicon.py."""

import logging
from pathlib import Path

from pydantic import ValidationError

from src.apps.cuescan.schemas import CueLexicon
from src.core.exceptions import ResourceNotFoundError, ValidationFailedError

logger = logging.getLogger(__name__)


def load_lexicon(path: Path) -> CueLexicon:
    """Reads a lexicon JSON file (language, match_mode, entries)."""
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise ResourceNotFoundError(f"Lexicon not found: {path}") from e
    try:
        lexicon = CueLexicon.model_validate_json(raw)
    except ValidationError as e:
        raise ValidationFailedError(f"{path}: {e.errors()[0]['msg']}") from e
    logger.debug("Loaded %s lexicon with %d entries", lexicon.language, len(lexicon.entries))
    return lexicon
