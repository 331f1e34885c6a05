"""src/apps/contrastive/services/io.py."""

from pathlib import Path
from typing import Iterable, Iterator, Type, TypeVar

from pydantic import BaseModel, ValidationError

from src.apps.contrastive.schemas import ContrastiveInstance, ReferenceInput, ScoreLine
from src.core.exceptions import ValidationFailedError
from src.core.utils import dumps_jsonl, read_jsonl

M = TypeVar("M", bound=BaseModel)


def _read_models(path: Path, model: Type[M]) -> Iterator[M]:
    for i, raw in enumerate(read_jsonl(path), start=1):
        try:
            yield model.model_validate(raw)
        except ValidationError as e:
            raise ValidationFailedError(f"{path} record {i}: {e.errors()[0]['msg']}") from e


def read_references(path: Path) -> Iterator[ReferenceInput]:
    """Generator input: instance_id, reference_tokens and optional pos_tags."""
    return _read_models(path, ReferenceInput)


def read_instances(path: Path) -> Iterator[ContrastiveInstance]:
    """Reads a contrastive set written by dump_instances."""
    return _read_models(path, ContrastiveInstance)


def read_score_lines(path: Path) -> Iterator[ScoreLine]:
    """Reads exported token log-probabilities, one instance per line."""
    return _read_models(path, ScoreLine)


def dump_instances(instances: Iterable[ContrastiveInstance]) -> str:
    """Contrastive sets as JSON lines."""
    return dumps_jsonl(inst.model_dump(mode="json") for inst in instances)
